use std::f64::consts::PI;
use std::path::Path;

use rand::Rng;
use rotelast::coframe_spinor::{coframe_to_spinor, spinor_to_coframe};
use rotelast::deformation::{decompose, dual_torsion, scalar_f, vector_v};
use rotelast::energetics::{action, energy_report, integrate_slices, lagrangian_density};
use rotelast::field_io::{read_field, write_field, FieldData};
use rotelast::planewave::{
    classify_speeds, critical_residual, plane_wave_quantities, reduced_lagrangian, solve_plane_waves_for,
    wave_speeds,
};
use rotelast::sampling::{random_moduli, random_spinor, rng, smooth_spinor_field};
use rotelast::spinor_repr::{dual_torsion_from_spinor, to_coframe_field, SpinorField};
use rotelast::tensor_algebra::{inner_rank2, norm_sq};
use rotelast::variational::{
    assemble_w, build_tables, euler_lagrange_f, fd_action_gradient, lagrangian_from_w, lemma_check, reduced_g,
};
use rotelast::weyl::{
    check_axial_normalized, theorem2_crosscheck, theorem3_check, weyl_residual, weyl_superposition,
    StationaryField, WeylComponent, WeylSign,
};
use rotelast::{Density, ElasticModuli, FourMomentum, PlaneWave, DEFAULT_RHO_MIN};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::Builder;

type Out = Result<Builder, CliError>;

const LIST_LIMIT: usize = 10;

fn load(cfg: &RunConfig) -> Result<(FieldData, String), CliError> {
    let path = cfg.required_path("input")?;
    Ok((read_field(&path)?, path.display().to_string()))
}

fn expect_spinor(data: FieldData) -> Result<SpinorField, CliError> {
    match data {
        FieldData::Spinor(f) => Ok(f),
        other => Err(CliError::Input(format!("expected a spinor field file, got {}", other.kind()))),
    }
}

/// Fails with every grid point where `ρ ≤ DEFAULT_RHO_MIN`.
fn require_nonvanishing(field: &SpinorField) -> Result<(), CliError> {
    let bad: Vec<usize> = (0..field.len()).filter(|&i| !(field.data[i].norm_sq() > DEFAULT_RHO_MIN)).collect();
    if bad.is_empty() {
        return Ok(());
    }
    let shown: Vec<String> = bad.iter().take(LIST_LIMIT).map(usize::to_string).collect();
    let more = if bad.len() > LIST_LIMIT { format!(" and {} more", bad.len() - LIST_LIMIT) } else { String::new() };
    Err(CliError::Input(format!(
        "spinor vanishes at {} grid point(s): flat index {}{more}",
        bad.len(),
        shown.join(", ")
    )))
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

pub fn convert(cfg: &RunConfig) -> Out {
    let (data, input) = load(cfg)?;
    let output = cfg.required_path("field_output")?;
    let tol = cfg.f64_or("tol", 1e-10)?;
    let mut b = Builder::default();
    b.input("input", input).input("field_output", output.display().to_string()).input("tol", tol);
    let written = match data {
        FieldData::Spinor(xi) => {
            require_nonvanishing(&xi)?;
            let (frames, rho) = to_coframe_field(&xi)?;
            let back = frames.try_map(|i, c| coframe_to_spinor(c, Density::new(rho.data[i])?))?;
            let err = max_of(xi.data.iter().zip(&back.data).map(|(a, c)| {
                c.max_abs_diff(a).min(c.max_abs_diff(&-*a)) / a.norm()
            }));
            b.result("direction", "spinor_to_coframe").residual("round_trip", err).check("round_trip", err <= tol);
            FieldData::Coframe { frames, density: Some(rho) }
        }
        FieldData::Coframe { frames, density } => {
            let rho = density.ok_or_else(|| CliError::Input("coframe file carries no density".into()))?;
            let xi = frames.try_map(|i, c| coframe_to_spinor(c, Density::new(rho.data[i])?))?;
            let mut err = 0.0_f64;
            for i in 0..xi.len() {
                let c = spinor_to_coframe(&xi.data[i])?;
                err = err.max((c.0 - frames.data[i].0).max_abs());
                err = err.max((xi.data[i].norm_sq() - rho.data[i]).abs() / rho.data[i]);
            }
            b.result("direction", "coframe_to_spinor").residual("round_trip", err).check("round_trip", err <= tol);
            FieldData::Spinor(xi)
        }
        other => return Err(CliError::Input(format!("cannot convert a {} field", other.kind()))),
    };
    b.result("points", written.grid().len());
    write_field(&output, &written)?;
    Ok(b)
}

#[derive(Serialize)]
struct PieceTotals {
    axial: f64,
    vector: f64,
    tensor: f64,
}

pub fn decompose_cmd(cfg: &RunConfig) -> Out {
    let (data, input) = load(cfg)?;
    let diff = cfg.derivative("central", None)?;
    let tol = cfg.f64_or("tol", 1e-12)?;
    let mut b = Builder::default();
    b.input("input", input).input("derivative", diff.mode.name()).input("tol", tol);
    let (frames, spinor) = match data {
        FieldData::Spinor(xi) => {
            require_nonvanishing(&xi)?;
            (to_coframe_field(&xi)?.0, Some(xi))
        }
        FieldData::Coframe { frames, .. } => (frames, None),
        other => return Err(CliError::Input(format!("cannot decompose a {} field", other.kind()))),
    };
    let st = dual_torsion(&frames, &diff)?;
    let mut recon = 0.0_f64;
    let mut orth = 0.0_f64;
    let mut ident = 0.0_f64;
    let dv = st.grid.cell_volume();
    let mut totals = PieceTotals { axial: 0.0, vector: 0.0, tensor: 0.0 };
    for p in &st.data {
        let parts = decompose(p);
        let scale = inner_rank2(p, p).max(1.0);
        let (a2, v2, t2) = (
            inner_rank2(&parts.axial, &parts.axial),
            inner_rank2(&parts.vector, &parts.vector),
            inner_rank2(&parts.tensor, &parts.tensor),
        );
        totals.axial += a2 * dv;
        totals.vector += v2 * dv;
        totals.tensor += t2 * dv;
        recon = recon.max((parts.reconstruct() - *p).max_abs() / scale.sqrt());
        orth = orth.max(
            [
                inner_rank2(&parts.axial, &parts.vector),
                inner_rank2(&parts.axial, &parts.tensor),
                inner_rank2(&parts.vector, &parts.tensor),
            ]
            .iter()
            .fold(0.0_f64, |m, x| m.max(x.abs()))
                / scale,
        );
        let f = scalar_f(p);
        ident = ident.max((a2 - f * f / 3.0).abs() / scale).max((v2 - 0.5 * norm_sq(&vector_v(p))).abs() / scale);
    }
    b.result("piece_integrals", totals)
        .result("points", st.len())
        .residual("reconstruction", recon)
        .residual("orthogonality", orth)
        .residual("norm_identities", ident)
        .check("reconstruction", recon <= tol)
        .check("orthogonality", orth <= tol)
        .check("norm_identities", ident <= tol);
    if let Some(xi) = spinor {
        let other = dual_torsion_from_spinor(&xi, &diff)?;
        b.residual("dual_path_gap", max_of(st.data.iter().zip(&other.data).map(|(a, c)| (*a - *c).max_abs())));
    }
    if let Some(path) = cfg.path("field_output") {
        write_field(&path, &FieldData::Rank2(st))?;
    }
    Ok(b)
}

pub fn energy(cfg: &RunConfig) -> Out {
    let (data, input) = load(cfg)?;
    let xi = expect_spinor(data)?;
    require_nonvanishing(&xi)?;
    let m = cfg.moduli()?;
    let diff = cfg.derivative("central", None)?;
    let tol = cfg.f64_or("tol", 1e-10)?;
    let rep = energy_report(&xi, &diff, &m)?;
    let mut b = Builder::default();
    b.input("input", input).input("moduli", m).input("derivative", diff.mode.name()).input("tol", tol);
    b.residual("potential_path_gap", rep.potential_path_gap)
        .residual("lagrangian_maxnorm", rep.residual_maxnorm)
        .check("potential_paths_agree", rep.potential_path_gap <= tol)
        .result("energy", rep);
    Ok(b)
}

pub fn lagrangian(cfg: &RunConfig) -> Out {
    let (data, input) = load(cfg)?;
    let xi = expect_spinor(data)?;
    require_nonvanishing(&xi)?;
    let m = cfg.moduli()?;
    let diff = cfg.derivative("central", None)?;
    let tol = cfg.f64_or("tol", 1e-10)?;
    let l = lagrangian_density(&xi, &diff, &m)?;
    let s = action(&xi, &diff, &m)?;
    let t = build_tables(&m)?;
    let w = assemble_w(&xi, &diff, &t)?;
    let gap = max_of(l.data.iter().zip(&w.data).map(|(a, wv)| (a - lagrangian_from_w(wv, &t)).abs() / a.abs().max(1.0)));
    let mut b = Builder::default();
    b.input("input", input).input("moduli", m).input("derivative", diff.mode.name()).input("tol", tol);
    b.result("action", s)
        .result("slices", integrate_slices(&l))
        .result("min", l.data.iter().cloned().fold(f64::INFINITY, f64::min))
        .result("max", l.data.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
        .residual("quadratic_form_gap", gap)
        .check("quadratic_form", gap <= tol);
    if let Some(path) = cfg.path("field_output") {
        write_field(&path, &FieldData::Scalar(l))?;
    }
    Ok(b)
}

pub fn planewave_solve(cfg: &RunConfig) -> Out {
    let m = cfg.moduli()?;
    let p0 = cfg.p0(1.0)?;
    let zeta = cfg.zeta()?;
    let samples = cfg.usize_or("samples", rotelast::planewave::DEFAULT_FAMILY_SAMPLES)?;
    let tol = cfg.f64_or("tol", 1e-10)?;
    let sol = solve_plane_waves_for(&zeta, &m, p0, samples)?;
    let mut b = Builder::default();
    b.input("moduli", m).input("p0", p0).input("zeta", zeta.to_reals()).input("samples", samples).input("tol", tol);
    b.result("case", classify_speeds(&sol.speeds))
        .result("speeds", sol.speeds)
        .residual("critical_residual_max", sol.residual_max)
        .check("samples_are_solutions", sol.residual_max <= tol)
        .result("families", &sol.families);
    Ok(b)
}

pub fn planewave_check(cfg: &RunConfig) -> Out {
    let m = cfg.moduli()?;
    let zeta = cfg.zeta()?;
    let [p1, p2, p3] = cfg.momentum()?;
    let p = FourMomentum::new(cfg.p0(1.0)?, [p1, p2, p3]);
    let tol = cfg.f64_or("tol", 1e-10)?;
    let g = critical_residual(&zeta, &p, &m)?;
    let mut b = Builder::default();
    b.input("moduli", m).input("momentum", p.to_array()).input("zeta", zeta.to_reals()).input("tol", tol);
    b.result("quantities", plane_wave_quantities(&zeta, &p)?)
        .result("lagrangian", reduced_lagrangian(&zeta, &p, &m)?)
        .result("speeds", wave_speeds(&m)?)
        .result("critical_residual", g.to_reals())
        .residual("critical_residual_norm", g.norm())
        .check("is_solution", g.norm() <= tol);
    Ok(b)
}

/// Random `(plane wave, moduli)` pairs; the moduli come from the config when any is set.
fn lemma_samples(cfg: &RunConfig) -> Result<Vec<(PlaneWave, ElasticModuli)>, CliError> {
    let count = cfg.usize_or("count", 10)?;
    let fixed = if cfg.has_moduli() { Some(cfg.moduli()?) } else { None };
    let mut r = rng(cfg.u64_or("seed", 0)?);
    (0..count)
        .map(|_| {
            let m = fixed.unwrap_or_else(|| random_moduli(&mut r));
            let zeta = random_spinor(&mut r);
            let p = FourMomentum::from_array([0; 4].map(|_| r.gen_range(-2.0..2.0)));
            Ok((PlaneWave::new(zeta, p)?, m))
        })
        .collect()
}

pub fn verify_lemma(cfg: &RunConfig, second: bool) -> Out {
    let samples = lemma_samples(cfg)?;
    let n = cfg.usize_or("n", 12)?;
    let tol = cfg.f64_or("tol", 1e-8)?;
    let (mut stdev, mut resid, mut table) = (0.0_f64, 0.0_f64, 0.0_f64);
    for (wave, m) in &samples {
        let grid = wave.periodic_grid(n, n)?;
        let diff = rotelast::Differentiator::exact(wave.momentum.to_array());
        let rep = lemma_check(wave, grid, &diff, m)?;
        stdev = stdev.max(rep.stdev);
        resid = resid.max(rep.max_residual);
        let a = reduced_g(&wave.zeta, &wave.momentum, m)?;
        let c = critical_residual(&wave.zeta, &wave.momentum, m)?;
        table = table.max(a.max_abs_diff(&c) / c.norm().max(1.0));
    }
    let mut b = Builder::default();
    b.input("count", samples.len()).input("n", n).input("tol", tol).input("seed", cfg.u64_or("seed", 0)?);
    b.residual("stdev_max", stdev);
    if second {
        b.residual("reduced_gap_max", resid)
            .residual("table_gap_max", table)
            .check("reduced_residual", resid <= tol)
            .check("tables_match_closed_form", table <= 1e-12);
    } else {
        b.check("modulated_constant", stdev <= tol);
    }
    Ok(b)
}

pub fn verify_euler_lagrange(cfg: &RunConfig) -> Out {
    let m = cfg.moduli()?;
    let diff = cfg.derivative("central", None)?;
    let step = cfg.f64_or("fd_step", 1e-5)?;
    let tol = cfg.f64_or("tol", 1e-4)?;
    let fields: Vec<SpinorField> = match cfg.path("input") {
        Some(p) => vec![expect_spinor(read_field(&p)?)?],
        None => {
            let grid = cfg.grid(8, 2.0, 8, 2.0)?;
            let seed = cfg.u64_or("seed", 0)?;
            (0..cfg.usize_or("count", 2)? as u64)
                .map(|k| smooth_spinor_field(&mut rng(seed + k), grid, 3, 0.2, 1))
                .collect()
        }
    };
    let mut gaps = Vec::new();
    for xi in &fields {
        require_nonvanishing(xi)?;
        let f = euler_lagrange_f(xi, &diff, &m)?;
        let fd = fd_action_gradient(xi, &diff, &m, step)?;
        let scale = max_of(f.data.iter().map(|s| s.norm())).max(f64::MIN_POSITIVE);
        gaps.push(max_of(f.data.iter().zip(&fd.data).map(|(a, c)| (*a - *c).norm())) / scale);
    }
    let worst = max_of(gaps.iter().copied());
    let mut b = Builder::default();
    b.input("moduli", m).input("fd_step", step).input("tol", tol).input("fields", fields.len());
    b.result("relative_gaps", gaps).residual("relative_gap_max", worst).check("oracle_agreement", worst <= tol);
    Ok(b)
}

fn sign(cfg: &RunConfig) -> Result<WeylSign, CliError> {
    match cfg.raw("sign").unwrap_or("plus") {
        "plus" => Ok(WeylSign::Plus),
        "minus" => Ok(WeylSign::Minus),
        other => Err(CliError::Config(format!("key \"sign\": expected plus or minus, got {other:?}"))),
    }
}

fn waves(cfg: &RunConfig) -> Result<Vec<WeylComponent>, CliError> {
    let text = cfg.raw("waves").unwrap_or("0,0,1,1,0;1,0,0,0.5,0");
    text.split(';')
        .map(|w| {
            let v: Vec<f64> = w.split(',').filter_map(|x| x.trim().parse().ok()).collect();
            match v.as_slice() {
                [dx, dy, dz, re, im] => Ok(WeylComponent { direction: [*dx, *dy, *dz], amplitude: [*re, *im] }),
                _ => Err(CliError::Config(format!("key \"waves\": expected dx,dy,dz,re,im, got {w:?}"))),
            }
        })
        .collect()
}

fn superposition(cfg: &RunConfig, default_n: usize) -> Result<StationaryField, CliError> {
    let p0 = cfg.p0(1.0)?;
    let grid = cfg.grid(default_n, 2.0 * PI / p0.abs().max(f64::MIN_POSITIVE), 0, 1.0)?;
    Ok(weyl_superposition(p0, &waves(cfg)?, sign(cfg)?, grid)?)
}

pub fn weyl_check(cfg: &RunConfig) -> Out {
    let tol = cfg.f64_or("tol", 1e-8)?;
    let diff = cfg.derivative("spectral", None)?;
    let mut b = Builder::default();
    let xi = match cfg.path("input") {
        Some(p) => {
            b.input("input", p.display().to_string());
            expect_spinor(read_field(&p)?)?
        }
        None => {
            b.input("waves", waves(cfg)?).input("sign", sign(cfg)?);
            superposition(cfg, 16)?.sample(cfg.usize_or("n_t", 16)?)?
        }
    };
    b.input("derivative", diff.mode.name()).input("tol", tol);
    let plus = max_of(weyl_residual(&xi, WeylSign::Plus, &diff)?.data.iter().map(|s| s.norm()));
    let minus = max_of(weyl_residual(&xi, WeylSign::Minus, &diff)?.data.iter().map(|s| s.norm()));
    let satisfied: Vec<WeylSign> =
        [(WeylSign::Plus, plus), (WeylSign::Minus, minus)].iter().filter(|(_, r)| *r <= tol).map(|(s, _)| *s).collect();
    b.residual("plus_max", plus)
        .residual("minus_max", minus)
        .result("satisfied", &satisfied)
        .check("solves_weyl", !satisfied.is_empty());
    Ok(b)
}

pub fn weyl_theorem2(cfg: &RunConfig) -> Out {
    let m = cfg.moduli()?;
    check_axial_normalized(&m)?;
    let p0 = cfg.p0(1.0)?;
    let lattice = cfg.usize_or("lattice", 41)?;
    let rep = theorem2_crosscheck(p0, &m, lattice)?;
    let mut zeros = rep.elastic_zeros.clone();
    zeros.sort_by(|a, c| a[2].total_cmp(&c[2]));
    let expected = vec![[0.0, 0.0, -p0.abs()], [0.0, 0.0, p0.abs()]];
    let mut b = Builder::default();
    b.input("moduli", m).input("p0", p0).input("lattice", lattice);
    b.check("zero_sets_coincide", rep.coincide)
        .check("zero_set_is_axis_pair", zeros == expected)
        .check("speeds", (rep.speeds.v1 - 1.0).abs() <= 1e-14 && rep.speeds.v2 == 0.0)
        .residual("min_offshell_elastic", rep.min_offshell_elastic)
        .residual("min_offshell_weyl", rep.min_offshell_weyl)
        .result("crosscheck", rep);
    Ok(b)
}

pub fn weyl_theorem3(cfg: &RunConfig) -> Out {
    let m = cfg.moduli()?;
    let field = superposition(cfg, 16)?;
    let n_t = cfg.usize_or("n_t", 16)?;
    let diff = cfg.derivative("spectral", None)?;
    let mask = cfg.f64_or("mask_fraction", 0.1)?;
    let tol = cfg.f64_or("tol", 1e-5)?;
    let s = sign(cfg)?;
    let rep = theorem3_check(&field, &m, &diff, n_t, mask)?;
    let weyl = match s {
        WeylSign::Plus => rep.weyl_plus_max,
        WeylSign::Minus => rep.weyl_minus_max,
    };
    let mut b = Builder::default();
    b.input("moduli", m)
        .input("p0", field.p0)
        .input("waves", waves(cfg)?)
        .input("sign", s)
        .input("n_t", n_t)
        .input("mask_fraction", mask)
        .input("derivative", diff.mode.name())
        .input("tol", tol);
    b.residual("weyl_max", weyl)
        .residual("f_max", rep.f_max)
        .check("weyl_solution", weyl <= 1e-8)
        .check("elastic_solution", rep.f_max <= tol)
        .result("report", rep);
    Ok(b)
}

#[derive(Serialize)]
struct SweepRow {
    value: f64,
    moduli: ElasticModuli,
    v1: f64,
    v2: f64,
    case: rotelast::planewave::SpeedCase,
}

pub fn sweep_speeds(cfg: &RunConfig) -> Out {
    let base = cfg.moduli()?;
    let param = cfg.raw("sweep_param").unwrap_or("c_vec").to_string();
    let values = match cfg.list("sweep_values")?.as_deref() {
        None => vec![0.0, 0.5, 1.0, 1.5, 2.0],
        Some([start, stop, count]) if count.fract() == 0.0 && *count >= 1.0 => {
            let k = *count as usize;
            (0..k).map(|i| if k == 1 { *start } else { start + (stop - start) * i as f64 / (k - 1) as f64 }).collect()
        }
        Some(_) => return Err(CliError::Config("key \"sweep_values\": expected start,stop,count".into())),
    };
    let moduli: Vec<ElasticModuli> = values
        .iter()
        .map(|&v| {
            let mut m = base;
            match param.as_str() {
                "c_ax" => m.c_ax = v,
                "c_vec" => m.c_vec = v,
                "c_ten" => m.c_ten = v,
                "c_kin" => m.c_kin = v,
                other => return Err(CliError::Config(format!("key \"sweep_param\": unknown modulus {other:?}"))),
            }
            m.validate()?;
            Ok(m)
        })
        .collect::<Result<_, CliError>>()?;
    let mut rows = Vec::new();
    let mut inequality = true;
    for (&value, m) in values.iter().zip(&moduli) {
        let s = wave_speeds(m)?;
        if m.c_vec == 0.0 {
            inequality &= s.v1 >= (4.0f64 / 3.0).sqrt() * s.v2 - 1e-12;
        }
        rows.push(SweepRow { value, moduli: *m, v1: s.v1, v2: s.v2, case: classify_speeds(&s) });
    }
    if let Some(path) = cfg.path("csv_output") {
        write_csv(&path, &param, &rows)?;
    }
    let mut b = Builder::default();
    b.input("moduli", base).input("sweep_param", &param).input("values", &values);
    b.check("inequality_without_vector_modulus", inequality).result("rows", &rows);
    Ok(b)
}

fn write_csv(path: &Path, param: &str, rows: &[SweepRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let io = |e: csv::Error| CliError::Input(format!("{}: {e}", path.display()));
    w.write_record([param, "v1", "v2", "case"]).map_err(io)?;
    for r in rows {
        let case = serde_json::to_value(r.case).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        w.write_record([r.value.to_string(), r.v1.to_string(), r.v2.to_string(), case]).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
