//! The Weyl operators `i(±σ⁰∂₀ + σ^α∂_α)` and their relation to purely axial elasticity.
//!
//! With `σ⁰ = −σ₀ = −I`, a plane wave `e^{−ip·x}ζ` gives the residual
//! `(∓p₀ + σ·p)ζ`. For a purely axial material with `c_kin = 4/3 c_ax`
//! (so that `v₁ = 1`, `v₂ = 0`) the plane-wave solutions of elasticity are
//! exactly the Weyl plane waves, and any stationary Weyl field solves the
//! elasticity equations.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::coframe_spinor::Spinor;
use crate::derivative::Differentiator;
use crate::energetics::ElasticModuli;
use crate::error::{Error, Result};
use crate::grid::{Axis, Field, GridSpec};
use crate::planewave::{critical_residual, wave_speeds, FourMomentum, WaveSpeeds};
use crate::spinor_repr::{density_field, SpinorField};
use crate::tensor_algebra::{sigma, sigma_dot, PauliSet, Vec3};
use crate::variational::{euler_lagrange_f, masked_max_norm};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeylSign {
    Plus,
    Minus,
}

impl WeylSign {
    pub const BOTH: [WeylSign; 2] = [WeylSign::Plus, WeylSign::Minus];

    pub fn value(self) -> f64 {
        match self {
            WeylSign::Plus => 1.0,
            WeylSign::Minus => -1.0,
        }
    }

    pub fn reversed(self) -> WeylSign {
        match self {
            WeylSign::Plus => WeylSign::Minus,
            WeylSign::Minus => WeylSign::Plus,
        }
    }
}

fn upper_sigma0() -> crate::tensor_algebra::Mat2 {
    let p = PauliSet::standard();
    assert_eq!(p.upper[0], p.lower[0] * -1.0, "σ⁰ must equal −σ₀");
    p.upper[0]
}

/// `i(±σ⁰∂₀ + σ^α∂_α)ξ` on a spacetime grid.
pub fn weyl_residual(field: &SpinorField, sign: WeylSign, diff: &Differentiator) -> Result<Field<Spinor>> {
    if !field.grid.has_time() {
        return Err(Error::MissingTimeAxis);
    }
    let s0 = upper_sigma0() * sign.value();
    let s = sigma();
    let d: Vec<Field<Spinor>> = (0..4).map(|a| diff.diff_spinor(field, a)).collect::<Result<_>>()?;
    let i_unit = C64::new(0.0, 1.0);
    let data = (0..field.len())
        .map(|i| {
            let mut r = Spinor(s0.apply(&d[0].data[i].0));
            for a in 0..3 {
                r = r + Spinor(s[a].apply(&d[a + 1].data[i].0));
            }
            r * i_unit
        })
        .collect();
    Ok(Field { grid: field.grid, data })
}

/// `(∓p₀ + σ·p)ζ`, the plane-wave residual with the phase factor removed.
pub fn weyl_plane_residual(zeta: &Spinor, p: &FourMomentum, sign: WeylSign) -> Spinor {
    Spinor(sigma_dot(&p.p).apply(&zeta.0)) - *zeta * (sign.value() * p.p0)
}

/// Momenta of the Weyl plane waves with `ζ = (1,0)`, one per sign.
pub fn weyl_plane_waves(p0: f64) -> Result<Vec<(WeylSign, Vec3)>> {
    if p0 == 0.0 || !p0.is_finite() {
        return Err(Error::StaticMomentum);
    }
    Ok(vec![(WeylSign::Plus, [0.0, 0.0, p0]), (WeylSign::Minus, [0.0, 0.0, -p0])])
}

/// Checks `c_vec = c_ten = 0` and `c_kin = 4/3 c_ax`.
pub fn check_axial_normalized(m: &ElasticModuli) -> Result<()> {
    m.validate()?;
    if !m.is_purely_axial() {
        return Err(Error::Precondition(format!(
            "material is not purely axial: c_vec = {}, c_ten = {}",
            m.c_vec, m.c_ten
        )));
    }
    let target = 4.0 / 3.0 * m.c_ax;
    if (m.c_kin - target).abs() > 1e-12 * target {
        return Err(Error::Precondition(format!(
            "time is not normalized: c_kin = {} but 4/3 c_ax = {target}",
            m.c_kin
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub p0: f64,
    pub speeds: WaveSpeeds,
    pub lattice_points: usize,
    pub zero_tol: f64,
    /// Lattice momenta where the elasticity residual vanishes.
    pub elastic_zeros: Vec<Vec3>,
    /// Lattice momenta where a Weyl residual vanishes, with the branch.
    pub weyl_zeros: Vec<(WeylSign, Vec3)>,
    /// Smallest residuals away from the zero sets.
    pub min_offshell_elastic: f64,
    pub min_offshell_weyl: f64,
    pub coincide: bool,
}

/// Sweeps `ζ = (1,0)` plane waves over the cube `|p_α| ≤ 2|p₀|` sampled with
/// `n` points per axis and compares the zero sets of the two residuals.
pub fn theorem2_crosscheck(p0: f64, m: &ElasticModuli, n: usize) -> Result<Theorem2Report> {
    check_axial_normalized(m)?;
    if p0 == 0.0 || !p0.is_finite() {
        return Err(Error::StaticMomentum);
    }
    if n < 3 || n % 2 == 0 {
        return Err(Error::Precondition(format!("lattice size must be odd and at least 3, got {n}")));
    }
    let speeds = wave_speeds(m)?;
    let zeta = Spinor::from_reals(1.0, 0.0, 0.0, 0.0);
    let half = (n - 1) / 2;
    let coord = |k: usize| 2.0 * p0.abs() * (k as f64 - half as f64) / half as f64;
    let scale_e = 4.0 * m.c_kin * p0 * p0;
    let scale_w = p0.abs();
    let zero_tol = 1e-12;
    let mut elastic_zeros = Vec::new();
    let mut weyl_zeros = Vec::new();
    let mut min_e = f64::INFINITY;
    let mut min_w = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let p = FourMomentum::new(p0, [coord(i), coord(j), coord(k)]);
                let g = critical_residual(&zeta, &p, m)?.norm() / scale_e;
                if g <= zero_tol {
                    elastic_zeros.push(p.p);
                } else {
                    min_e = min_e.min(g);
                }
                let mut any_weyl = false;
                for sign in WeylSign::BOTH {
                    let r = weyl_plane_residual(&zeta, &p, sign).norm() / scale_w;
                    if r <= zero_tol {
                        weyl_zeros.push((sign, p.p));
                        any_weyl = true;
                    }
                }
                if !any_weyl {
                    let r = WeylSign::BOTH
                        .map(|s| weyl_plane_residual(&zeta, &p, s).norm() / scale_w)
                        .into_iter()
                        .fold(f64::INFINITY, f64::min);
                    min_w = min_w.min(r);
                }
            }
        }
    }
    let mut weyl_set: Vec<Vec3> = weyl_zeros.iter().map(|(_, p)| *p).collect();
    weyl_set.dedup();
    let coincide = elastic_zeros == weyl_set && !elastic_zeros.is_empty();
    Ok(Theorem2Report {
        p0,
        speeds,
        lattice_points: n * n * n,
        zero_tol,
        elastic_zeros,
        weyl_zeros,
        min_offshell_elastic: min_e,
        min_offshell_weyl: min_w,
        coincide,
    })
}

/// `ξ = e^{−ip₀x⁰} η(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryField {
    pub p0: f64,
    pub eta: SpinorField,
}

impl StationaryField {
    pub fn new(p0: f64, eta: SpinorField) -> Result<Self> {
        if p0 == 0.0 || !p0.is_finite() {
            return Err(Error::StaticMomentum);
        }
        if eta.grid.has_time() {
            return Err(Error::InvalidGrid("a stationary amplitude lives on a spatial grid".into()));
        }
        Ok(StationaryField { p0, eta })
    }

    /// Samples one temporal period with `n_t` points.
    pub fn sample(&self, n_t: usize) -> Result<SpinorField> {
        let grid = GridSpec::spacetime(
            Axis::new(n_t, 2.0 * PI / self.p0.abs()),
            self.eta.grid.space.map(|a| a.n),
            self.eta.grid.space.map(|a| a.length),
        )?;
        let slice = grid.slice_len();
        let ht = grid.time.expect("spacetime").spacing();
        let data = (0..grid.len())
            .map(|i| {
                let t = (i / slice) as f64 * ht;
                self.eta.data[i % slice] * C64::from_polar(1.0, -self.p0 * t)
            })
            .collect();
        Ok(Field { grid, data })
    }
}

/// Eigenvector of `σ·n` with eigenvalue `±1` for a unit vector `n`.
pub fn helicity_spinor(n: &Vec3, sign: WeylSign) -> Spinor {
    let theta = n[2].clamp(-1.0, 1.0).acos();
    let phi = n[1].atan2(n[0]);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    match sign {
        WeylSign::Plus => Spinor::new(C64::new(c, 0.0), C64::from_polar(s, phi)),
        WeylSign::Minus => Spinor::new(-C64::from_polar(s, -phi), C64::new(c, 0.0)),
    }
}

/// One component of a superposition of same-frequency Weyl plane waves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylComponent {
    /// Propagation direction; normalized internally.
    pub direction: Vec3,
    pub amplitude: [f64; 2],
}

/// `η(x) = Σ a_k e^{−i p₀ n_k·x} ζ_k` with `σ·(p₀n_k) ζ_k = ±p₀ ζ_k`, so that
/// `e^{−ip₀x⁰}η` solves the chosen Weyl equation.
pub fn weyl_superposition(
    p0: f64,
    components: &[WeylComponent],
    sign: WeylSign,
    grid: GridSpec,
) -> Result<StationaryField> {
    let parts: Vec<(Vec3, Spinor)> = components
        .iter()
        .map(|c| {
            let len = c.direction.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(len > 0.0) {
                return Err(Error::Precondition("zero propagation direction".into()));
            }
            let n = c.direction.map(|x| x / len);
            let zeta = helicity_spinor(&n, sign) * C64::new(c.amplitude[0], c.amplitude[1]);
            Ok((n.map(|x| x * p0), zeta))
        })
        .collect::<Result<_>>()?;
    let eta = Field::from_fn(grid.spatial_part(), |x| {
        let mut s = Spinor::ZERO;
        for (p, z) in &parts {
            let phase = p[0] * x[1] + p[1] * x[2] + p[2] * x[3];
            s = s + *z * C64::from_polar(1.0, -phase);
        }
        s
    });
    StationaryField::new(p0, eta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Report {
    pub weyl_plus_max: f64,
    pub weyl_minus_max: f64,
    /// `max ‖F‖` over the density mask.
    pub f_max: f64,
    pub masked_points: usize,
    pub total_points: usize,
    pub mask_fraction: f64,
}

impl Theorem3Report {
    pub fn weyl_min(&self) -> f64 {
        self.weyl_plus_max.min(self.weyl_minus_max)
    }

    /// `Weyl ≈ 0 ⇒ F ≈ 0` with the given tolerances.
    pub fn implication_holds(&self, weyl_tol: f64, f_tol: f64) -> bool {
        self.weyl_min() > weyl_tol || self.f_max <= f_tol
    }
}

/// Weyl residuals and the elasticity residual `F` of a stationary field on the
/// points where `ρ ≥ mask_fraction · max ρ`.
pub fn theorem3_check(
    field: &StationaryField,
    m: &ElasticModuli,
    diff: &Differentiator,
    n_t: usize,
    mask_fraction: f64,
) -> Result<Theorem3Report> {
    m.validate()?;
    let xi = field.sample(n_t)?;
    let rho = xi.map(|s| s.norm_sq());
    let rho_max = rho.data.iter().cloned().fold(0.0, f64::max);
    if !(rho_max > 0.0) {
        return Err(Error::Precondition("field vanishes everywhere".into()));
    }
    density_field(&xi, crate::coframe_spinor::DEFAULT_RHO_MIN)?;
    let plus = weyl_residual(&xi, WeylSign::Plus, diff)?;
    let minus = weyl_residual(&xi, WeylSign::Minus, diff)?;
    let (weyl_plus_max, _) = masked_max_norm(&plus, &rho, mask_fraction)?;
    let (weyl_minus_max, _) = masked_max_norm(&minus, &rho, mask_fraction)?;
    let f = euler_lagrange_f(&xi, diff, m)?;
    let (f_max, masked_points) = masked_max_norm(&f, &rho, mask_fraction)?;
    Ok(Theorem3Report {
        weyl_plus_max,
        weyl_minus_max,
        f_max,
        masked_points,
        total_points: xi.len(),
        mask_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planewave::PlaneWave;

    #[test]
    fn plane_wave_momenta() {
        assert_eq!(
            weyl_plane_waves(1.0).unwrap(),
            vec![(WeylSign::Plus, [0.0, 0.0, 1.0]), (WeylSign::Minus, [0.0, 0.0, -1.0])]
        );
        assert_eq!(
            weyl_plane_waves(-2.0).unwrap(),
            vec![(WeylSign::Plus, [0.0, 0.0, -2.0]), (WeylSign::Minus, [0.0, 0.0, 2.0])]
        );
        assert!(weyl_plane_waves(0.0).is_err());
    }

    #[test]
    fn plane_residual_examples() {
        let e = Spinor::from_reals(1.0, 0.0, 0.0, 0.0);
        let p0 = 0.7;
        for (sign, p) in weyl_plane_waves(p0).unwrap() {
            assert_eq!(weyl_plane_residual(&e, &FourMomentum::new(p0, p), sign).norm(), 0.0);
        }
        let r = weyl_plane_residual(&e, &FourMomentum::new(p0, [p0, 0.0, 0.0]), WeylSign::Plus);
        assert!((r.norm() - p0 * 2f64.sqrt()).abs() < 1e-15);
        let r = weyl_plane_residual(&e, &FourMomentum::new(p0, [0.0; 3]), WeylSign::Minus);
        assert!((r.norm() - p0).abs() < 1e-15);
    }

    #[test]
    fn grid_residual_matches_plane_form() {
        let wave = PlaneWave::new(
            Spinor::new(C64::new(0.4, 0.1), C64::new(-0.3, 0.8)),
            FourMomentum::new(1.0, [1.0, -1.0, 2.0]),
        )
        .unwrap();
        let grid = wave.periodic_grid(4, 4).unwrap();
        let field = wave.sample(grid);
        let d = Differentiator::exact(wave.momentum.to_array());
        for sign in WeylSign::BOTH {
            let r = weyl_residual(&field, sign, &d).unwrap();
            let expected = weyl_plane_residual(&wave.zeta, &wave.momentum, sign);
            for (i, v) in r.data.iter().enumerate() {
                let demod = *v * C64::from_polar(1.0, wave.momentum.phase(&grid.coords(i)));
                assert!(demod.max_abs_diff(&expected) < 1e-12);
            }
        }
    }

    #[test]
    fn helicity_spinors_are_eigenvectors() {
        let dirs = [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.48, -0.6, 0.64]];
        for n in dirs {
            for sign in WeylSign::BOTH {
                let z = helicity_spinor(&n, sign);
                let lhs = Spinor(sigma_dot(&n).apply(&z.0));
                assert!(lhs.max_abs_diff(&(z * sign.value())) < 1e-14);
                assert!((z.norm() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn theorem2_preconditions() {
        let bad = ElasticModuli::new(1.0, 0.5, 0.0, 4.0 / 3.0).unwrap();
        assert!(matches!(theorem2_crosscheck(1.0, &bad, 5), Err(Error::Precondition(_))));
        let unnormalized = ElasticModuli::new(1.0, 0.0, 0.0, 1.0).unwrap();
        assert!(matches!(theorem2_crosscheck(1.0, &unnormalized, 5), Err(Error::Precondition(_))));
        let m = ElasticModuli::purely_axial(0.75).unwrap();
        let r = theorem2_crosscheck(1.0, &m, 5).unwrap();
        assert!(r.coincide);
        assert_eq!(r.elastic_zeros, vec![[0.0, 0.0, -1.0], [0.0, 0.0, 1.0]]);
    }
}
