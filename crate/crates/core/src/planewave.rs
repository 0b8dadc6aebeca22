//! Plane waves `ξ(x) = e^{−ip·x} ζ` in closed form.
//!
//! Here `p·x = p₀x⁰ + p_α x^α` and `j_𝛂 = ζ̄ σ_𝛂 ζ` is the 4-current, so that
//! `j₀ = ρ` and `‖j‖ = j₀`. Substituting into the Lagrangian gives
//!
//! ```text
//! L(ζ;p) = (2/j₀) a ‖p‖²‖j‖² + (4/j₀) b (j·p)² − (4/j₀) c_kin p₀² ‖j‖²
//! a = c_vec + c_ten,   b = 4/3 c_ax − 1/2 c_vec + 1/6 c_ten
//! ```
//!
//! whose critical points (`G = ∂L/∂ζ̄ = 0`) are classified by the speeds
//! `v₁ = √((4c_ax + 2c_ten)/(3c_kin))` and `v₂ = √((c_vec + c_ten)/(2c_kin))`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::coframe_spinor::{Spinor, DEFAULT_RHO_MIN};
use crate::energetics::ElasticModuli;
use crate::error::{Error, Result};
use crate::grid::{Axis, Field, GridSpec};
use crate::spinor_repr::SpinorField;
use crate::tensor_algebra::{cross, dot, norm_sq, sigma, sigma_dot, Mat2, Rank2, Vec3};
use crate::C64;

/// Speeds at or below this are treated as exactly zero.
pub const ZERO_SPEED: f64 = 1e-14;
/// Relative gap below which `v₁` and `v₂` are treated as equal.
pub const EQUAL_SPEED_REL: f64 = 1e-14;
/// Nonzero speeds below this are flagged as nearly degenerate.
pub const NEAR_DEGENERATE_SPEED: f64 = 1e-7;
/// Samples drawn from each continuous solution family.
pub const DEFAULT_FAMILY_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourMomentum {
    pub p0: f64,
    pub p: Vec3,
}

impl FourMomentum {
    pub fn new(p0: f64, p: Vec3) -> Self {
        FourMomentum { p0, p }
    }

    pub fn from_array(p: [f64; 4]) -> Self {
        FourMomentum { p0: p[0], p: [p[1], p[2], p[3]] }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.p0, self.p[0], self.p[1], self.p[2]]
    }

    /// `p·x` for spacetime coordinates `(x⁰, x¹, x², x³)`.
    pub fn phase(&self, x: &[f64; 4]) -> f64 {
        self.p0 * x[0] + self.p[0] * x[1] + self.p[1] * x[2] + self.p[2] * x[3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWave {
    pub zeta: Spinor,
    pub momentum: FourMomentum,
}

impl PlaneWave {
    pub fn new(zeta: Spinor, momentum: FourMomentum) -> Result<Self> {
        check_nonzero(&zeta)?;
        Ok(PlaneWave { zeta, momentum })
    }

    pub fn value_at(&self, x: &[f64; 4]) -> Spinor {
        self.zeta * C64::from_polar(1.0, -self.momentum.phase(x))
    }

    pub fn sample(&self, grid: GridSpec) -> SpinorField {
        Field::from_fn(grid, |x| self.value_at(&x))
    }

    /// Spacetime grid with `n_t` time and `n` spatial points per axis whose box
    /// lengths are one period of the wave along each axis (`2π` where `p` vanishes).
    pub fn periodic_grid(&self, n_t: usize, n: usize) -> Result<GridSpec> {
        let len = |k: f64| if k == 0.0 { 2.0 * PI } else { 2.0 * PI / k.abs() };
        let p = self.momentum.to_array();
        GridSpec::spacetime(Axis::new(n_t, len(p[0])), [n; 3], [len(p[1]), len(p[2]), len(p[3])])
    }
}

fn check_nonzero(zeta: &Spinor) -> Result<f64> {
    let rho = zeta.norm_sq();
    if rho > DEFAULT_RHO_MIN {
        Ok(rho)
    } else {
        Err(Error::ZeroSpinor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourCurrent {
    pub j0: f64,
    pub j: Vec3,
}

pub fn four_current(zeta: &Spinor) -> FourCurrent {
    let s = sigma();
    FourCurrent {
        j0: zeta.norm_sq(),
        j: [0, 1, 2].map(|a| s[a].sandwich(&zeta.0, &zeta.0).re),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveQuantities {
    pub rho: f64,
    pub f: f64,
    pub v: Vec3,
    pub dual_torsion: Rank2,
    pub omega: Vec3,
}

/// `ρ = j₀`, `f = −4 p·j/ρ`, `v = −2 (j×p)/ρ`, `*T = 2(p⊗j − (p·j) g)/ρ`, `ω = 2p₀ j/ρ`.
pub fn plane_wave_quantities(zeta: &Spinor, p: &FourMomentum) -> Result<PlaneWaveQuantities> {
    let rho = check_nonzero(zeta)?;
    let FourCurrent { j, .. } = four_current(zeta);
    let pj = dot(&p.p, &j);
    let jxp = cross(&j, &p.p);
    Ok(PlaneWaveQuantities {
        rho,
        f: -4.0 * pj / rho,
        v: jxp.map(|c| -2.0 * c / rho),
        dual_torsion: (Rank2::outer(&p.p, &j) - Rank2::identity() * pj) * (2.0 / rho),
        omega: j.map(|c| 2.0 * p.p0 * c / rho),
    })
}

fn ab(m: &ElasticModuli) -> (f64, f64) {
    (m.c_vec + m.c_ten, 4.0 / 3.0 * m.c_ax - 0.5 * m.c_vec + m.c_ten / 6.0)
}

pub fn reduced_lagrangian(zeta: &Spinor, p: &FourMomentum, m: &ElasticModuli) -> Result<f64> {
    m.validate()?;
    let j0 = check_nonzero(zeta)?;
    let FourCurrent { j, .. } = four_current(zeta);
    let (a, b) = ab(m);
    let jj = norm_sq(&j);
    let jp = dot(&j, &p.p);
    Ok(2.0 / j0 * a * norm_sq(&p.p) * jj + 4.0 / j0 * b * jp * jp - 4.0 / j0 * m.c_kin * p.p0 * p.p0 * jj)
}

/// `G = ∂L(ζ;p)/∂ζ̄`; plane-wave solutions are exactly the zeros of `G`.
pub fn critical_residual(zeta: &Spinor, p: &FourMomentum, m: &ElasticModuli) -> Result<Spinor> {
    m.validate()?;
    let j0 = check_nonzero(zeta)?;
    let FourCurrent { j, .. } = four_current(zeta);
    let (a, b) = ab(m);
    let c = m.c_kin;
    let pp = norm_sq(&p.p);
    let jj = norm_sq(&j);
    let jp = dot(&j, &p.p);
    let p02 = p.p0 * p.p0;
    let js = Spinor(sigma_dot(&j).apply(&zeta.0));
    let ps = Spinor(sigma_dot(&p.p).apply(&zeta.0));
    let z = *zeta;
    Ok(js * (4.0 * a * pp / j0) - z * (2.0 * a * pp * jj / (j0 * j0)) + ps * (8.0 * b * jp / j0)
        - z * (4.0 * b * jp * jp / (j0 * j0))
        - js * (8.0 * c * p02 / j0)
        + z * (4.0 * c * p02 * jj / (j0 * j0)))
}

/// The same residual for `ζ = (1,0)` in wave-speed form.
pub fn critical_residual_canonical(p: &FourMomentum, m: &ElasticModuli) -> Result<Spinor> {
    let s = wave_speeds(m)?;
    let (v1s, v2s) = (s.v1 * s.v1, s.v2 * s.v2);
    let [p1, p2, p3] = p.p;
    let first = v2s * norm_sq(&p.p) + (v1s - v2s) * p3 * p3 - p.p0 * p.p0;
    let second = C64::new(p1, p2) * (2.0 * p3 * (v1s - v2s));
    Ok(Spinor([C64::new(first, 0.0), second]) * (4.0 * m.c_kin))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveSpeeds {
    pub v1: f64,
    pub v2: f64,
}

pub fn wave_speeds(m: &ElasticModuli) -> Result<WaveSpeeds> {
    m.validate()?;
    Ok(WaveSpeeds {
        v1: ((4.0 * m.c_ax + 2.0 * m.c_ten) / (3.0 * m.c_kin)).sqrt(),
        v2: ((m.c_vec + m.c_ten) / (2.0 * m.c_kin)).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Type1,
    Type2Circle,
    SphereDegenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum FamilyShape {
    /// `p = ±magnitude · direction`
    AxisPair { direction: Vec3, magnitude: f64 },
    /// `‖p‖ = radius` in the plane orthogonal to `normal`
    Circle { normal: Vec3, radius: f64 },
    /// `‖p‖ = radius`
    Sphere { radius: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFamily {
    pub branch: Branch,
    pub shape: FamilyShape,
    /// Speed `v` with `‖p‖ v = |p₀|` on this family.
    pub speed: f64,
    pub samples: Vec<Vec3>,
    pub residual_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveSolutions {
    pub speeds: WaveSpeeds,
    pub families: Vec<SolutionFamily>,
    pub residual_max: f64,
}

/// Which of the four cases of the classification applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeedCase {
    Generic,
    Equal,
    OnlyType1,
    OnlyType2,
}

pub fn classify_speeds(s: &WaveSpeeds) -> SpeedCase {
    let z1 = s.v1 <= ZERO_SPEED;
    let z2 = s.v2 <= ZERO_SPEED;
    match (z1, z2) {
        (false, true) => SpeedCase::OnlyType1,
        (true, false) => SpeedCase::OnlyType2,
        (true, true) => unreachable!("validated moduli give a nonzero speed"),
        (false, false) if (s.v1 - s.v2).abs() <= EQUAL_SPEED_REL * s.v1.max(s.v2) => SpeedCase::Equal,
        _ => SpeedCase::Generic,
    }
}

fn near_degenerate_warning(name: &str, v: f64) -> Option<String> {
    (v > ZERO_SPEED && v < NEAR_DEGENERATE_SPEED)
        .then(|| format!("{name} = {v:e} is nearly zero; classified as nonzero"))
}

/// The induced rotation and normalization of a gauge transformation `ζ ↦ Uζ/scale = (1,0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gauge {
    pub scale: f64,
    pub u: Mat2,
    /// `U† σ_α U = R_{αβ} σ_β`
    pub rotation: Rank2,
}

pub fn normalize_and_gauge(zeta: &Spinor) -> Result<Gauge> {
    let rho = check_nonzero(zeta)?;
    let scale = rho.sqrt();
    let a = zeta.0[0] / scale;
    let b = zeta.0[1] / scale;
    let u = Mat2::new(a.conj(), b.conj(), -b, a);
    let s = sigma();
    let rotation = Rank2::from_fn(|al, be| {
        let m = u.adjoint().matmul(&s[al]).matmul(&u).matmul(&s[be]);
        0.5 * m.trace().re
    });
    Ok(Gauge { scale, u, rotation })
}

fn family_samples(branch: Branch, p0: f64, v: f64, n: usize) -> (FamilyShape, Vec<Vec3>) {
    let r = p0.abs() / v;
    let e3 = [0.0, 0.0, 1.0];
    match branch {
        Branch::Type1 => (
            FamilyShape::AxisPair { direction: e3, magnitude: r },
            vec![[0.0, 0.0, r], [0.0, 0.0, -r]],
        ),
        Branch::Type2Circle => {
            let samples = (0..n)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / n as f64;
                    [r * t.cos(), r * t.sin(), 0.0]
                })
                .collect();
            (FamilyShape::Circle { normal: e3, radius: r }, samples)
        }
        Branch::SphereDegenerate => {
            // golden-angle spiral, deterministic and roughly uniform
            let golden = PI * (3.0 - 5f64.sqrt());
            let samples = (0..n)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
                    let s = (1.0 - z * z).sqrt();
                    let t = golden * k as f64;
                    [r * s * t.cos(), r * s * t.sin(), r * z]
                })
                .collect();
            (FamilyShape::Sphere { radius: r }, samples)
        }
    }
}

/// All plane-wave solutions with `ζ = (1,0)` and frequency `p₀`.
pub fn solve_plane_waves(m: &ElasticModuli, p0: f64) -> Result<PlaneWaveSolutions> {
    solve_plane_waves_for(&Spinor::from_reals(1.0, 0.0, 0.0, 0.0), m, p0, DEFAULT_FAMILY_SAMPLES)
}

/// All plane-wave solutions with amplitude `ζ`, obtained by rotating the `(1,0)`
/// solutions with the gauge of `ζ`.
pub fn solve_plane_waves_for(
    zeta: &Spinor,
    m: &ElasticModuli,
    p0: f64,
    samples_per_family: usize,
) -> Result<PlaneWaveSolutions> {
    if p0 == 0.0 || !p0.is_finite() {
        return Err(Error::StaticMomentum);
    }
    let speeds = wave_speeds(m)?;
    let gauge = normalize_and_gauge(zeta)?;
    let rt = gauge.rotation.transpose();
    let n = samples_per_family.max(1);
    let branches: Vec<(Branch, f64, Option<String>)> = match classify_speeds(&speeds) {
        SpeedCase::Generic => vec![
            (Branch::Type1, speeds.v1, near_degenerate_warning("v1", speeds.v1)),
            (Branch::Type2Circle, speeds.v2, near_degenerate_warning("v2", speeds.v2)),
        ],
        SpeedCase::Equal => vec![(Branch::SphereDegenerate, speeds.v1, near_degenerate_warning("v1", speeds.v1))],
        SpeedCase::OnlyType1 => vec![(Branch::Type1, speeds.v1, near_degenerate_warning("v1", speeds.v1))],
        SpeedCase::OnlyType2 => vec![(Branch::Type2Circle, speeds.v2, near_degenerate_warning("v2", speeds.v2))],
    };
    let mut families = Vec::new();
    for (branch, speed, warning) in branches {
        let (shape, canonical) = family_samples(branch, p0, speed, n);
        let shape = match shape {
            FamilyShape::AxisPair { direction, magnitude } => {
                FamilyShape::AxisPair { direction: rt.mul_vec(&direction), magnitude }
            }
            FamilyShape::Circle { normal, radius } => FamilyShape::Circle { normal: rt.mul_vec(&normal), radius },
            s => s,
        };
        let samples: Vec<Vec3> = canonical.iter().map(|p| rt.mul_vec(p)).collect();
        let mut residual_max = 0.0_f64;
        for p in &samples {
            let g = critical_residual(zeta, &FourMomentum::new(p0, *p), m)?;
            residual_max = residual_max.max(g.norm());
        }
        families.push(SolutionFamily { branch, shape, speed, samples, residual_max, warning });
    }
    let residual_max = families.iter().map(|f| f.residual_max).fold(0.0, f64::max);
    Ok(PlaneWaveSolutions { speeds, families, residual_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn e1() -> Spinor {
        Spinor::from_reals(1.0, 0.0, 0.0, 0.0)
    }

    #[test]
    fn currents() {
        let c = four_current(&e1());
        assert_eq!((c.j0, c.j), (1.0, [0.0, 0.0, 1.0]));
        let c = four_current(&Spinor::from_reals(0.0, 0.0, 1.0, 0.0));
        assert_eq!((c.j0, c.j), (1.0, [0.0, 0.0, -1.0]));
        let h = 0.5f64.sqrt();
        let c = four_current(&Spinor::from_reals(h, 0.0, h, 0.0));
        assert_abs_diff_eq!(c.j0, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.j[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.j[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.j[2], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn quantities_for_canonical_spinor() {
        let p = FourMomentum::new(0.8, [0.3, -0.4, 1.2]);
        let q = plane_wave_quantities(&e1(), &p).unwrap();
        assert_eq!(q.rho, 1.0);
        assert_abs_diff_eq!(q.f, -4.0 * 1.2, epsilon = 1e-15);
        assert_eq!(q.v, [2.0 * -0.4, -2.0 * 0.3, 0.0]);
        assert_eq!(q.omega, [0.0, 0.0, 1.6]);
        assert_abs_diff_eq!(q.dual_torsion.0[0][0], -2.0 * 1.2, epsilon = 1e-15);
        assert_abs_diff_eq!(q.dual_torsion.0[0][2], 2.0 * 0.3, epsilon = 1e-15);
        let q0 = plane_wave_quantities(&e1(), &FourMomentum::new(0.0, [0.0; 3])).unwrap();
        assert_eq!(q0.f, 0.0);
        assert_eq!(q0.dual_torsion.max_abs(), 0.0);
        assert!(plane_wave_quantities(&Spinor::ZERO, &p).is_err());
    }

    #[test]
    fn speeds_examples() {
        let s = wave_speeds(&ElasticModuli::new(1.0, 1.0, 1.0, 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(s.v1, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.v2, 1.0, epsilon = 1e-15);
        let s = wave_speeds(&ElasticModuli::purely_axial(0.75).unwrap()).unwrap();
        assert_eq!((s.v1, s.v2), (1.0, 0.0));
        let s = wave_speeds(&ElasticModuli::new(0.0, 2.0, 0.0, 1.0).unwrap()).unwrap();
        assert_eq!((s.v1, s.v2), (0.0, 1.0));
    }

    #[test]
    fn canonical_and_general_residuals_agree() {
        let m = ElasticModuli::new(0.6, 0.2, 0.9, 1.3).unwrap();
        let p = FourMomentum::new(0.7, [0.4, -0.2, 0.9]);
        let g = critical_residual(&e1(), &p, &m).unwrap();
        let h = critical_residual_canonical(&p, &m).unwrap();
        assert!(g.max_abs_diff(&h) < 1e-13);
    }

    #[test]
    fn theorem_cases() {
        let generic = ElasticModuli::new(0.6, 0.2, 0.9, 1.3).unwrap();
        let sol = solve_plane_waves(&generic, 1.5).unwrap();
        let branches: Vec<Branch> = sol.families.iter().map(|f| f.branch).collect();
        assert_eq!(branches, vec![Branch::Type1, Branch::Type2Circle]);
        assert!(sol.residual_max < 1e-10);

        let c_ax = 0.5;
        let c_ten = 0.3;
        let equal = ElasticModuli::new(c_ax, (8.0 * c_ax + c_ten) / 3.0, c_ten, 1.0).unwrap();
        let sol = solve_plane_waves(&equal, -2.0).unwrap();
        assert_eq!(sol.families.len(), 1);
        assert_eq!(sol.families[0].branch, Branch::SphereDegenerate);
        assert!(sol.residual_max < 1e-10);

        let sol = solve_plane_waves(&ElasticModuli::purely_axial(1.0).unwrap(), 1.0).unwrap();
        assert_eq!(sol.families.len(), 1);
        assert_eq!(sol.families[0].branch, Branch::Type1);
        assert_eq!(sol.families[0].samples, vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]);

        let sol = solve_plane_waves(&ElasticModuli::new(0.0, 2.0, 0.0, 1.0).unwrap(), 1.0).unwrap();
        assert_eq!(sol.families.len(), 1);
        assert_eq!(sol.families[0].branch, Branch::Type2Circle);
        assert_eq!(sol.families[0].samples.len(), DEFAULT_FAMILY_SAMPLES);

        assert_eq!(solve_plane_waves(&generic, 0.0).unwrap_err(), Error::StaticMomentum);
    }

    #[test]
    fn near_degenerate_speed_is_flagged() {
        let m = ElasticModuli::new(1.0, 1e-16, 0.0, 1.0).unwrap();
        let sol = solve_plane_waves(&m, 1.0).unwrap();
        assert_eq!(sol.families.len(), 2);
        assert!(sol.families[1].warning.is_some());
    }

    #[test]
    fn gauge_examples() {
        let g = normalize_and_gauge(&e1()).unwrap();
        assert_eq!(g.scale, 1.0);
        assert_eq!(g.u, Mat2::identity());
        let down = Spinor::from_reals(0.0, 0.0, 1.0, 0.0);
        let g = normalize_and_gauge(&down).unwrap();
        let img = g.u.apply(&down.0);
        assert!(Spinor(img).max_abs_diff(&e1()) < 1e-15);
        assert!((g.u.det() - C64::new(1.0, 0.0)).norm() < 1e-15);
        let z = Spinor::new(C64::new(0.0, 6.0 / 5.0), C64::new(8.0 / 5.0, 0.0));
        let g = normalize_and_gauge(&z).unwrap();
        assert_abs_diff_eq!(g.scale, 2.0, epsilon = 1e-15);
        let back = g.u.adjoint().apply(&[C64::new(g.scale, 0.0), C64::new(0.0, 0.0)]);
        assert!(Spinor(back).max_abs_diff(&z) < 1e-14);
    }

    #[test]
    fn general_spinor_solutions_are_rotated() {
        let m = ElasticModuli::new(0.6, 0.2, 0.9, 1.3).unwrap();
        let z = Spinor::new(C64::new(0.3, -0.7), C64::new(1.1, 0.2));
        let sol = solve_plane_waves_for(&z, &m, 0.9, 8).unwrap();
        assert!(sol.residual_max < 1e-10, "{}", sol.residual_max);
        for fam in &sol.families {
            for p in &fam.samples {
                assert_abs_diff_eq!(norm_sq(p).sqrt() * fam.speed, 0.9, epsilon = 1e-12);
            }
        }
    }
}
