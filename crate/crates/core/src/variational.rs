//! The Euler–Lagrange operator of the spinor Lagrangian and independent oracles for it.
//!
//! The Lagrangian density is a quadratic form `L = Σ_J A_J W_J²` in sixteen
//! real quantities
//!
//! ```text
//! W_J = i(ξ̄ B_J^𝛂 ∂_𝛂ξ − ξ B̄_J^𝛂 ∂_𝛂ξ̄)/√ρ = −2 Im(ξ̄ B_J^𝛂 ∂_𝛂ξ)/√ρ
//! ```
//!
//! ordered `(f, v₁..v₃, *T₁₁..*T₃₃, ω₁..ω₃)` so that `W = √ρ V`. Varying the
//! action with respect to `ξ̄` gives
//!
//! ```text
//! F = 2 Σ_J A_J [ i W_J B_J^𝛂 ∂_𝛂ξ/√ρ − W_J² ξ/(2ρ) + i ∂_𝛂(W_J B_J^𝛂 ξ/√ρ) ]
//! ```
//!
//! For a plane wave `e^{ip·x} F` is a constant spinor `G`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coframe_spinor::{Spinor, DEFAULT_RHO_MIN};
use crate::derivative::{DerivativeMode, Differentiator};
use crate::energetics::{lagrangian_per_rho, ElasticModuli};
use crate::error::{Error, Result};
use crate::grid::{Field, GridSpec, ScalarField};
use crate::planewave::{FourMomentum, PlaneWave};
use crate::reduce::pairwise_sum;
use crate::spinor_repr::{self, density_field, SpinorField};
use crate::tensor_algebra::{eps, sigma, Mat2};
use crate::C64;

pub const W_LEN: usize = 16;
pub const W_F: usize = 0;
pub const W_V: usize = 1;
pub const W_T: usize = 4;
pub const W_OMEGA: usize = 13;

pub type WVector = [f64; W_LEN];

/// Index of `*T_{αβ}` (0-based) in a [`WVector`].
pub fn w_index_t(a: usize, b: usize) -> usize {
    W_T + 3 * a + b
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientTables {
    pub a: [f64; W_LEN],
    /// `b[J][𝛂]`, `𝛂 = 0..=3`.
    pub b: [[Mat2; 4]; W_LEN],
}

pub fn build_tables(m: &ElasticModuli) -> Result<CoefficientTables> {
    m.validate()?;
    let s = sigma();
    let zero = Mat2::ZERO;
    let mut a = [0.0; W_LEN];
    let mut b = [[zero; 4]; W_LEN];

    a[W_F] = (m.c_ax - m.c_ten) / 3.0;
    for g in 0..3 {
        b[W_F][g + 1] = s[g] * -2.0;
    }
    for al in 0..3 {
        a[W_V + al] = (m.c_vec - m.c_ten) / 2.0;
        for g in 0..3 {
            let mut acc = zero;
            for be in 0..3 {
                acc = acc - s[be] * eps(be, g, al);
            }
            b[W_V + al][g + 1] = acc;
        }
    }
    for al in 0..3 {
        for be in 0..3 {
            let j = w_index_t(al, be);
            a[j] = m.c_ten;
            for g in 0..3 {
                let mut acc = zero;
                if g == al {
                    acc = acc + s[be];
                }
                if al == be {
                    acc = acc - s[g];
                }
                b[j][g + 1] = acc;
            }
        }
    }
    for al in 0..3 {
        a[W_OMEGA + al] = -m.c_kin;
        b[W_OMEGA + al][0] = s[al];
    }
    Ok(CoefficientTables { a, b })
}

/// Spacetime derivatives `[∂₀ξ, ∂₁ξ, ∂₂ξ, ∂₃ξ]` at a point.
pub type SpinorJet = [Spinor; 4];

pub fn w_at(xi: &Spinor, d: &SpinorJet, t: &CoefficientTables) -> WVector {
    let sqrt_rho = xi.norm_sq().sqrt();
    let mut w = [0.0; W_LEN];
    for (j, wj) in w.iter_mut().enumerate() {
        let mut z = C64::new(0.0, 0.0);
        for al in 0..4 {
            z += t.b[j][al].sandwich(&xi.0, &d[al].0);
        }
        *wj = -2.0 * z.im / sqrt_rho;
    }
    w
}

/// `Σ_J A_J W_J²`, which equals the Lagrangian density.
pub fn lagrangian_from_w(w: &WVector, t: &CoefficientTables) -> f64 {
    w.iter().zip(&t.a).map(|(w, a)| a * w * w).sum()
}

fn spinor_jets(field: &SpinorField, diff: &Differentiator) -> Result<Vec<SpinorJet>> {
    if !field.grid.has_time() {
        return Err(Error::MissingTimeAxis);
    }
    let d: Vec<Field<Spinor>> = (0..4).map(|a| diff.diff_spinor(field, a)).collect::<Result<_>>()?;
    Ok((0..field.len())
        .into_par_iter()
        .map(|i| [d[0].data[i], d[1].data[i], d[2].data[i], d[3].data[i]])
        .collect())
}

pub fn assemble_w(field: &SpinorField, diff: &Differentiator, t: &CoefficientTables) -> Result<Field<WVector>> {
    density_field(field, DEFAULT_RHO_MIN)?;
    let jets = spinor_jets(field, diff)?;
    let data = field.data.par_iter().zip(jets.par_iter()).map(|(x, d)| w_at(x, d, t)).collect();
    Ok(Field { grid: field.grid, data })
}

fn apply(m: &Mat2, s: &Spinor) -> Spinor {
    Spinor(m.apply(&s.0))
}

/// `F` at every grid point, with derivatives taken by `diff`.
pub fn euler_lagrange_f(field: &SpinorField, diff: &Differentiator, m: &ElasticModuli) -> Result<Field<Spinor>> {
    let t = build_tables(m)?;
    density_field(field, DEFAULT_RHO_MIN)?;
    let jets = spinor_jets(field, diff)?;
    let i_unit = C64::new(0.0, 1.0);
    // local part of F and the four fluxes Y^𝛂 = Σ 2 A_J W_J B_J^𝛂 ξ/√ρ
    let parts: Vec<(Spinor, [Spinor; 4])> = field
        .data
        .par_iter()
        .zip(jets.par_iter())
        .map(|(xi, d)| {
            let rho = xi.norm_sq();
            let sqrt_rho = rho.sqrt();
            let w = w_at(xi, d, &t);
            let mut local = Spinor::ZERO;
            let mut flux = [Spinor::ZERO; 4];
            for j in 0..W_LEN {
                if t.a[j] == 0.0 {
                    continue;
                }
                let c = 2.0 * t.a[j];
                let mut bd = Spinor::ZERO;
                for al in 0..4 {
                    bd = bd + apply(&t.b[j][al], &d[al]);
                    flux[al] = flux[al] + apply(&t.b[j][al], xi) * (c * w[j] / sqrt_rho);
                }
                local = local + bd * (i_unit * (c * w[j] / sqrt_rho)) - *xi * (c * w[j] * w[j] / (2.0 * rho));
            }
            (local, flux)
        })
        .collect();
    let mut out: Vec<Spinor> = parts.iter().map(|p| p.0).collect();
    for al in 0..4 {
        let y = Field { grid: field.grid, data: parts.iter().map(|p| p.1[al]).collect() };
        let dy = diff.diff_spinor(&y, al)?;
        for (o, v) in out.iter_mut().zip(dy.data) {
            *o = *o + v * i_unit;
        }
    }
    Ok(Field { grid: field.grid, data: out })
}

/// The constant spinor `G` of a plane wave, assembled from the tables.
pub fn reduced_g(zeta: &Spinor, p: &FourMomentum, m: &ElasticModuli) -> Result<Spinor> {
    let t = build_tables(m)?;
    let j0 = zeta.norm_sq();
    if !(j0 > DEFAULT_RHO_MIN) {
        return Err(Error::ZeroSpinor);
    }
    let sj = j0.sqrt();
    let pa = p.to_array();
    let mut g = Spinor::ZERO;
    for j in 0..W_LEN {
        if t.a[j] == 0.0 {
            continue;
        }
        let mut bp = Mat2::ZERO;
        for al in 0..4 {
            bp = bp + t.b[j][al] * pa[al];
        }
        let bpz = apply(&bp, zeta);
        let w = 2.0 * bp.sandwich(&zeta.0, &zeta.0).re / sj;
        g = g + (bpz * (2.0 * w / sj) - *zeta * (w * w / (2.0 * j0))) * (2.0 * t.a[j]);
    }
    Ok(g)
}

pub const FD_STEP_MIN: f64 = 1e-9;
pub const FD_STEP_MAX: f64 = 1e-2;

/// Lagrangian density at `i` from central differences of `values`, with
/// `values[k]` replaced by `sub` when `over = Some((k, sub))`.
fn local_lagrangian(
    grid: &GridSpec,
    values: &[Spinor],
    i: usize,
    over: Option<(usize, Spinor)>,
    m: &ElasticModuli,
) -> f64 {
    let get = |k: usize| match over {
        Some((o, s)) if o == k => s,
        _ => values[k],
    };
    let mut d = [Spinor::ZERO; 4];
    for (a, da) in d.iter_mut().enumerate() {
        let h = grid.axis(a).expect("spacetime grid").spacing();
        *da = (get(grid.neighbor(i, a, 1)) - get(grid.neighbor(i, a, -1))) * (0.5 / h);
    }
    let xi = get(i);
    let grad = [d[1], d[2], d[3]];
    let st = spinor_repr::dual_torsion_at(&xi, &grad);
    let w = spinor_repr::omega_at(&xi, &d[0]);
    xi.norm_sq() * lagrangian_per_rho(&st, &w, m)
}

/// Central-difference gradient of the discretized action `Σ L dV` with respect
/// to the real and imaginary parts of every grid value, returned as
/// `(∂S/∂Re ξ + i ∂S/∂Im ξ)/(2 dV)` so that it approximates `F`.
///
/// The action is evaluated with second-order central differences, independently
/// of the coefficient tables.
pub fn fd_action_gradient(
    field: &SpinorField,
    diff: &Differentiator,
    m: &ElasticModuli,
    step: f64,
) -> Result<Field<Spinor>> {
    m.validate()?;
    if !(FD_STEP_MIN..=FD_STEP_MAX).contains(&step) {
        return Err(Error::StepOutOfRange(step));
    }
    if diff.mode != DerivativeMode::Central {
        return Err(Error::UnsupportedDerivative {
            mode: diff.mode.name(),
            reason: "the action-variation oracle uses a local central-difference stencil".into(),
        });
    }
    if !field.grid.has_time() {
        return Err(Error::MissingTimeAxis);
    }
    density_field(field, DEFAULT_RHO_MIN)?;
    let grid = field.grid;
    let values = &field.data;
    let data = (0..field.len())
        .into_par_iter()
        .map(|k| {
            let mut stencil = vec![k];
            for a in 0..4 {
                stencil.push(grid.neighbor(k, a, 1));
                stencil.push(grid.neighbor(k, a, -1));
            }
            stencil.sort_unstable();
            stencil.dedup();
            let base = values[k];
            let mut grad = [0.0; 4];
            for (c, g) in grad.iter_mut().enumerate() {
                let mut plus = base.to_reals();
                let mut minus = plus;
                plus[c] += step;
                minus[c] -= step;
                let sp = Spinor::from_reals(plus[0], plus[1], plus[2], plus[3]);
                let sm = Spinor::from_reals(minus[0], minus[1], minus[2], minus[3]);
                let lp: Vec<f64> = stencil.iter().map(|&i| local_lagrangian(&grid, values, i, Some((k, sp)), m)).collect();
                let lm: Vec<f64> = stencil.iter().map(|&i| local_lagrangian(&grid, values, i, Some((k, sm)), m)).collect();
                let diffs: Vec<f64> = lp.iter().zip(&lm).map(|(a, b)| a - b).collect();
                *g = pairwise_sum(&diffs) / (2.0 * step);
            }
            Spinor::new(C64::new(grad[0], grad[1]) * 0.5, C64::new(grad[2], grad[3]) * 0.5)
        })
        .collect();
    Ok(Field { grid, data })
}

/// `max ‖F‖` over points with `ρ ≥ fraction · max ρ`, and the number of such points.
pub fn masked_max_norm(f: &Field<Spinor>, rho: &ScalarField, fraction: f64) -> Result<(f64, usize)> {
    f.grid.ensure_same(&rho.grid)?;
    let rho_max = rho.data.iter().cloned().fold(0.0, f64::max);
    let cut = fraction * rho_max;
    let mut worst = 0.0_f64;
    let mut count = 0;
    for (v, r) in f.data.iter().zip(&rho.data) {
        if *r >= cut && *r > DEFAULT_RHO_MIN {
            worst = worst.max(v.norm());
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::Precondition("no grid point passes the density mask".into()));
    }
    Ok((worst, count))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    /// Mean of `e^{ip·x} F` over the grid.
    pub mean: [[f64; 2]; 2],
    /// Root-mean-square deviation of `e^{ip·x} F` from its mean.
    pub stdev: f64,
    pub mean_norm: f64,
    /// `max ‖G − e^{ip·x} F‖` with `G` from [`reduced_g`].
    pub max_residual: f64,
    pub g_norm: f64,
}

/// Evaluates `e^{ip·x} F` for a sampled plane wave and compares it to `G`.
pub fn lemma_check(wave: &PlaneWave, grid: GridSpec, diff: &Differentiator, m: &ElasticModuli) -> Result<LemmaReport> {
    let field = wave.sample(grid);
    let f = euler_lagrange_f(&field, diff, m)?;
    let g = reduced_g(&wave.zeta, &wave.momentum, m)?;
    let demod: Vec<Spinor> = f
        .data
        .par_iter()
        .enumerate()
        .map(|(i, v)| *v * C64::from_polar(1.0, wave.momentum.phase(&grid.coords(i))))
        .collect();
    let n = demod.len() as f64;
    let comp = |c: usize, re: bool| -> f64 {
        let v: Vec<f64> = demod.iter().map(|s| if re { s.0[c].re } else { s.0[c].im }).collect();
        pairwise_sum(&v) / n
    };
    let mean = Spinor::new(C64::new(comp(0, true), comp(0, false)), C64::new(comp(1, true), comp(1, false)));
    let dev: Vec<f64> = demod.iter().map(|s| (*s - mean).norm_sq()).collect();
    let stdev = (pairwise_sum(&dev) / n).sqrt();
    let max_residual = demod.iter().map(|s| (*s - g).norm()).fold(0.0, f64::max);
    Ok(LemmaReport {
        mean: [[mean.0[0].re, mean.0[0].im], [mean.0[1].re, mean.0[1].im]],
        stdev,
        mean_norm: mean.norm(),
        max_residual,
        g_norm: g.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planewave::critical_residual;

    #[test]
    fn tables_are_hermitian_and_axial_tables_are_sparse() {
        let t = build_tables(&ElasticModuli::new(0.3, 0.5, 0.7, 1.1).unwrap()).unwrap();
        for row in &t.b {
            for m in row {
                assert!(m.is_hermitian(0.0));
            }
        }
        let t = build_tables(&ElasticModuli::purely_axial(1.0).unwrap()).unwrap();
        let nonzero: Vec<usize> = (0..W_LEN).filter(|&j| t.a[j] != 0.0).collect();
        assert_eq!(nonzero, vec![W_F, W_OMEGA, W_OMEGA + 1, W_OMEGA + 2]);
        let s = sigma();
        for g in 0..3 {
            assert_eq!(t.b[W_F][g + 1], s[g] * -2.0);
        }
        assert_eq!(t.b[W_F][0], Mat2::ZERO);
    }

    #[test]
    fn reduced_g_matches_critical_residual() {
        let m = ElasticModuli::new(0.6, 0.2, 0.9, 1.3).unwrap();
        let z = Spinor::new(C64::new(0.3, -0.7), C64::new(1.1, 0.2));
        let p = FourMomentum::new(0.7, [0.4, -0.2, 0.9]);
        let a = reduced_g(&z, &p, &m).unwrap();
        let b = critical_residual(&z, &p, &m).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12 * b.norm().max(1.0));
    }

    #[test]
    fn fd_oracle_argument_checks() {
        let g = GridSpec::spacetime(crate::grid::Axis::new(4, 1.0), [4; 3], [1.0; 3]).unwrap();
        let f = Field::constant(g, Spinor::from_reals(1.0, 0.0, 0.0, 0.0));
        let m = ElasticModuli::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(fd_action_gradient(&f, &Differentiator::central(), &m, 1.0), Err(Error::StepOutOfRange(1.0)));
        assert!(matches!(
            fd_action_gradient(&f, &Differentiator::spectral(), &m, 1e-5),
            Err(Error::UnsupportedDerivative { .. })
        ));
        let zero = fd_action_gradient(&f, &Differentiator::central(), &m, 1e-5).unwrap();
        assert!(zero.data.iter().all(|s| s.norm() == 0.0));
    }
}
