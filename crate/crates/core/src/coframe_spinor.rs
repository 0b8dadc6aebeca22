//! Pointwise equivalence between a nonvanishing spinor and a (coframe, density) pair.
//!
//! The forward map is
//!
//! ```text
//! ρ            = ξ̄ σ_0 ξ
//! (ϑ¹ + iϑ²)_α = ρ⁻¹ ε^{ċḃ} (σ_0 ξ)_ḃ (σ_α ξ)_ċ
//! ϑ³_α         = ρ⁻¹ ξ̄ σ_α ξ
//! ```
//!
//! It is invariant under `ξ → −ξ`, so the inverse only recovers `±ξ`; the
//! representative returned by [`coframe_to_spinor`] is fixed by a sign rule.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor_algebra::{PauliSet, Rank2, Vec3};

/// Default lower bound on `|ξ¹|² + |ξ²|²` below which a spinor counts as vanishing.
pub const DEFAULT_RHO_MIN: f64 = 1e-12;

/// Tolerance for coframe orthonormality and orientation checks.
pub const COFRAME_TOL: f64 = 1e-10;

/// Two-component complex spinor `(ξ¹, ξ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Spinor(pub [C64; 2]);

impl Spinor {
    pub const ZERO: Spinor = Spinor([C64::new(0.0, 0.0); 2]);

    pub fn new(a: C64, b: C64) -> Self {
        Spinor([a, b])
    }

    pub fn from_reals(re1: f64, im1: f64, re2: f64, im2: f64) -> Self {
        Spinor([C64::new(re1, im1), C64::new(re2, im2)])
    }

    /// `(Re ξ¹, Im ξ¹, Re ξ², Im ξ²)`.
    pub fn to_reals(&self) -> [f64; 4] {
        [self.0[0].re, self.0[0].im, self.0[1].re, self.0[1].im]
    }

    pub fn norm_sq(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn conj(&self) -> Spinor {
        Spinor([self.0[0].conj(), self.0[1].conj()])
    }

    pub fn scale(&self, s: C64) -> Spinor {
        Spinor([self.0[0] * s, self.0[1] * s])
    }

    /// `e^{iφ} ξ`.
    pub fn with_phase(&self, phi: f64) -> Spinor {
        self.scale(C64::from_polar(1.0, phi))
    }

    pub fn max_abs_diff(&self, other: &Spinor) -> f64 {
        (self.0[0] - other.0[0]).norm().max((self.0[1] - other.0[1]).norm())
    }

    /// `ρ = |ξ¹|² + |ξ²|²`, rejecting values below `rho_min`.
    pub fn density_checked(&self, rho_min: f64) -> Result<f64> {
        let rho = self.norm_sq();
        if rho > rho_min {
            Ok(rho)
        } else {
            Err(Error::DegenerateSpinor { density: rho, floor: rho_min })
        }
    }
}

impl Add for Spinor {
    type Output = Spinor;
    fn add(self, o: Spinor) -> Spinor {
        Spinor([self.0[0] + o.0[0], self.0[1] + o.0[1]])
    }
}

impl Sub for Spinor {
    type Output = Spinor;
    fn sub(self, o: Spinor) -> Spinor {
        Spinor([self.0[0] - o.0[0], self.0[1] - o.0[1]])
    }
}

impl Neg for Spinor {
    type Output = Spinor;
    fn neg(self) -> Spinor {
        Spinor([-self.0[0], -self.0[1]])
    }
}

impl Mul<f64> for Spinor {
    type Output = Spinor;
    fn mul(self, s: f64) -> Spinor {
        Spinor([self.0[0] * s, self.0[1] * s])
    }
}

impl Mul<C64> for Spinor {
    type Output = Spinor;
    fn mul(self, s: C64) -> Spinor {
        self.scale(s)
    }
}

/// Positive density `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Density(f64);

impl Density {
    pub fn new(rho: f64) -> Result<Self> {
        if rho > 0.0 && rho.is_finite() {
            Ok(Density(rho))
        } else {
            Err(Error::NonPositiveDensity(rho))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Three orthonormal covectors stored as the rows of an `SO(3)` matrix:
/// `self.0[j][α] = ϑ^{j+1}_{α+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coframe(pub Rank2);

impl Coframe {
    pub fn identity() -> Self {
        Coframe(Rank2::identity())
    }

    /// Builds a coframe from rows, validating orthonormality and orientation.
    pub fn new(rows: [Vec3; 3]) -> Result<Self> {
        let c = Coframe(Rank2(rows));
        c.validate(COFRAME_TOL)?;
        Ok(c)
    }

    pub fn row(&self, j: usize) -> Vec3 {
        self.0 .0[j]
    }

    pub fn matrix(&self) -> &Rank2 {
        &self.0
    }

    /// Largest entry of `δ_{jk} ϑ^j ⊗ ϑ^k − g`.
    pub fn orthonormality_defect(&self) -> f64 {
        let m = &self.0;
        (m.transpose().matmul(m) - Rank2::identity()).max_abs()
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let defect = self.orthonormality_defect();
        if !(defect <= tol) {
            return Err(Error::InvalidCoframe(format!(
                "orthonormality defect {defect:e} exceeds {tol:e}"
            )));
        }
        let det = self.0.det();
        if !((det - 1.0).abs() <= tol) {
            return Err(Error::InvalidCoframe(format!("determinant {det} is not +1")));
        }
        Ok(())
    }
}

pub fn spinor_to_density(xi: &Spinor) -> Result<Density> {
    spinor_to_density_with(xi, DEFAULT_RHO_MIN)
}

pub fn spinor_to_density_with(xi: &Spinor, rho_min: f64) -> Result<Density> {
    Ok(Density(xi.density_checked(rho_min)?))
}

pub fn spinor_to_coframe(xi: &Spinor) -> Result<Coframe> {
    spinor_to_coframe_with(xi, DEFAULT_RHO_MIN)
}

pub fn spinor_to_coframe_with(xi: &Spinor, rho_min: f64) -> Result<Coframe> {
    let rho = xi.density_checked(rho_min)?;
    let pauli = PauliSet::standard();
    let eps = pauli.metric;
    let s0x = pauli.lower[0].apply(&xi.0);
    let mut rows = [[0.0; 3]; 3];
    for alpha in 0..3 {
        let sigma = &pauli.lower[alpha + 1];
        let sx = sigma.apply(&xi.0);
        let mut z = C64::new(0.0, 0.0);
        for c in 0..2 {
            for b in 0..2 {
                z += eps.0[c][b] * s0x[b] * sx[c];
            }
        }
        z /= rho;
        rows[0][alpha] = z.re;
        rows[1][alpha] = z.im;
        rows[2][alpha] = sigma.sandwich(&xi.0, &xi.0).re / rho;
    }
    Ok(Coframe(Rank2(rows)))
}

/// Unit quaternion `(w, x, y, z)` of a rotation matrix, using the pivot with the
/// largest diagonal combination.
fn quaternion_from_rotation(r: &Rank2) -> [f64; 4] {
    let m = &r.0;
    let trace = m[0][0] + m[1][1] + m[2][2];
    let candidates = [trace, m[0][0], m[1][1], m[2][2]];
    let pivot = (0..4)
        .max_by(|&a, &b| candidates[a].total_cmp(&candidates[b]))
        .unwrap_or(0);
    match pivot {
        0 => {
            let w = 0.5 * (1.0 + trace).sqrt();
            let d = 4.0 * w;
            [w, (m[2][1] - m[1][2]) / d, (m[0][2] - m[2][0]) / d, (m[1][0] - m[0][1]) / d]
        }
        1 => {
            let x = 0.5 * (1.0 + m[0][0] - m[1][1] - m[2][2]).sqrt();
            let d = 4.0 * x;
            [(m[2][1] - m[1][2]) / d, x, (m[0][1] + m[1][0]) / d, (m[0][2] + m[2][0]) / d]
        }
        2 => {
            let y = 0.5 * (1.0 - m[0][0] + m[1][1] - m[2][2]).sqrt();
            let d = 4.0 * y;
            [(m[0][2] - m[2][0]) / d, (m[0][1] + m[1][0]) / d, y, (m[1][2] + m[2][1]) / d]
        }
        _ => {
            let z = 0.5 * (1.0 - m[0][0] - m[1][1] + m[2][2]).sqrt();
            let d = 4.0 * z;
            [(m[1][0] - m[0][1]) / d, (m[0][2] + m[2][0]) / d, (m[1][2] + m[2][1]) / d, z]
        }
    }
}

/// Inverts [`spinor_to_coframe`] and [`spinor_to_density`] up to the sign of `ξ`.
///
/// The coframe matrix is the rotation of a unit quaternion `(w, x, y, z)` and
/// the normalized spinor is `(w + iz, −y + ix)`. The returned representative
/// has its first component (in the order `Re ξ¹, Im ξ¹, Re ξ², Im ξ²`) whose
/// magnitude exceeds `1e-12·|ξ|` positive.
pub fn coframe_to_spinor(frame: &Coframe, rho: Density) -> Result<Spinor> {
    frame.validate(COFRAME_TOL)?;
    let [w, x, y, z] = quaternion_from_rotation(&frame.0);
    let qn = (w * w + x * x + y * y + z * z).sqrt();
    let s = rho.value().sqrt() / qn;
    let xi = canonical_sign(Spinor::from_reals(w * s, z * s, -y * s, x * s));
    // no negative zeros in the output
    let [a, b, c, d] = xi.to_reals().map(|v| v + 0.0);
    Ok(Spinor::from_reals(a, b, c, d))
}

/// Applies the deterministic sign rule used by [`coframe_to_spinor`].
pub fn canonical_sign(xi: Spinor) -> Spinor {
    let threshold = 1e-12 * xi.norm();
    let first = xi.to_reals().into_iter().find(|c| c.abs() > threshold);
    match first {
        Some(c) if c < 0.0 => -xi,
        _ => xi,
    }
}

/// Validates `O ∈ SO(3)` to [`COFRAME_TOL`].
pub fn check_special_orthogonal(o: &Rank2) -> Result<()> {
    let defect = (o.transpose().matmul(o) - Rank2::identity()).max_abs();
    if !(defect <= COFRAME_TOL) {
        return Err(Error::NotSpecialOrthogonal(format!("OᵀO − I has entry {defect:e}")));
    }
    let det = o.det();
    if !((det - 1.0).abs() <= COFRAME_TOL) {
        return Err(Error::NotSpecialOrthogonal(format!("det O = {det}")));
    }
    Ok(())
}

/// Rigid rotation `ϑ^j ↦ O^j_k ϑ^k` by a constant special orthogonal matrix.
pub fn rigid_rotate(frame: &Coframe, o: &Rank2) -> Result<Coframe> {
    check_special_orthogonal(o)?;
    Ok(Coframe(o.matmul(&frame.0)))
}

/// Rotation by `angle` about the given coordinate axis (0-based).
pub fn axis_rotation(axis: usize, angle: f64) -> Rank2 {
    let (s, c) = angle.sin_cos();
    let (i, j) = match axis {
        0 => (1, 2),
        1 => (2, 0),
        2 => (0, 1),
        _ => panic!("axis must be 0, 1 or 2"),
    };
    let mut m = Rank2::identity();
    m.0[i][i] = c;
    m.0[i][j] = -s;
    m.0[j][i] = s;
    m.0[j][j] = c;
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_coframe_gives_positive_zeros() {
        let xi = coframe_to_spinor(&Coframe::identity(), Density::new(1.0).unwrap()).unwrap();
        assert!(xi.to_reals().iter().all(|c| c.is_sign_positive()));
    }

    fn assert_frame(frame: &Coframe, rows: [Vec3; 3]) {
        let diff = (frame.0 - Rank2(rows)).max_abs();
        assert!(diff < 1e-15, "coframe {:?} differs from {rows:?}", frame.0);
    }

    #[test]
    fn density_examples() {
        assert_eq!(spinor_to_density(&Spinor::from_reals(1.0, 0.0, 0.0, 0.0)).unwrap().value(), 1.0);
        assert_eq!(spinor_to_density(&Spinor::from_reals(0.0, 0.0, 1.0, 0.0)).unwrap().value(), 1.0);
        assert_eq!(spinor_to_density(&Spinor::from_reals(0.0, 2.0, 0.0, 0.0)).unwrap().value(), 4.0);
        assert!(matches!(
            spinor_to_density(&Spinor::ZERO),
            Err(Error::DegenerateSpinor { .. })
        ));
        assert!(spinor_to_density_with(&Spinor::from_reals(1e-3, 0.0, 0.0, 0.0), 1e-4).is_err());
    }

    #[test]
    fn coframe_examples() {
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert_frame(&spinor_to_coframe(&Spinor::from_reals(1.0, 0.0, 0.0, 0.0)).unwrap(), id);
        assert_frame(&spinor_to_coframe(&Spinor::from_reals(2.0, 0.0, 0.0, 0.0)).unwrap(), id);
        assert_frame(
            &spinor_to_coframe(&Spinor::from_reals(0.0, 0.0, 1.0, 0.0)).unwrap(),
            [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]],
        );
        assert!(spinor_to_coframe(&Spinor::ZERO).is_err());
    }

    #[test]
    fn inverse_examples() {
        let xi = coframe_to_spinor(&Coframe::identity(), Density::new(1.0).unwrap()).unwrap();
        assert_eq!(xi, Spinor::from_reals(1.0, 0.0, 0.0, 0.0));
        let xi = coframe_to_spinor(&Coframe::identity(), Density::new(4.0).unwrap()).unwrap();
        assert_eq!(xi, Spinor::from_reals(2.0, 0.0, 0.0, 0.0));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let input = Spinor::from_reals(h, 0.0, h, 0.0);
        let frame = spinor_to_coframe(&input).unwrap();
        let back = coframe_to_spinor(&frame, Density::new(1.0).unwrap()).unwrap();
        assert!(back.max_abs_diff(&input) < 1e-15 || back.max_abs_diff(&-input) < 1e-15);
    }

    #[test]
    fn inverse_rejects_invalid_frames() {
        let reflected = Coframe(Rank2::diag([1.0, 1.0, -1.0]));
        assert!(coframe_to_spinor(&reflected, Density::new(1.0).unwrap()).is_err());
        let skewed = Coframe(Rank2::diag([1.0, 1.0, 1.1]));
        assert!(coframe_to_spinor(&skewed, Density::new(1.0).unwrap()).is_err());
        assert!(Density::new(0.0).is_err());
        assert!(Density::new(-1.0).is_err());
    }

    #[test]
    fn rigid_rotation_examples() {
        let id = Coframe::identity();
        assert_eq!(rigid_rotate(&id, &Rank2::identity()).unwrap(), id);
        let half_turn = axis_rotation(2, std::f64::consts::PI);
        let rotated = rigid_rotate(&id, &half_turn).unwrap();
        let expected = [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!((rotated.0 - Rank2(expected)).max_abs() < 1e-15);
        assert!(rigid_rotate(&id, &Rank2::diag([1.0, 1.0, -1.0])).is_err());
        assert!(rigid_rotate(&id, &(Rank2::identity() * 2.0)).is_err());
    }

    #[test]
    fn shepperd_pivots_all_exercised() {
        // rotations by π about each axis force each non-trace pivot
        for axis in 0..3 {
            let o = axis_rotation(axis, std::f64::consts::PI);
            let frame = Coframe(o);
            let xi = coframe_to_spinor(&frame, Density::new(1.0).unwrap()).unwrap();
            let again = spinor_to_coframe(&xi).unwrap();
            assert!((again.0 - o).max_abs() < 1e-14, "axis {axis}");
        }
    }

    fn arb_spinor() -> impl Strategy<Value = Spinor> {
        prop::array::uniform4(-2.0f64..2.0)
            .prop_filter("nonvanishing", |c| c.iter().map(|x| x * x).sum::<f64>() > 1e-3)
            .prop_map(|c| Spinor::from_reals(c[0], c[1], c[2], c[3]))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn round_trip_to_sign(xi in arb_spinor()) {
            let frame = spinor_to_coframe(&xi).unwrap();
            prop_assert!(frame.validate(COFRAME_TOL).is_ok());
            let back = coframe_to_spinor(&frame, spinor_to_density(&xi).unwrap()).unwrap();
            let err = back.max_abs_diff(&xi).min(back.max_abs_diff(&-xi));
            prop_assert!(err < 1e-10, "round trip error {err:e}");
        }

        #[test]
        fn forward_map_invariances(xi in arb_spinor(), lambda in 0.1f64..10.0, phi in -3.2f64..3.2) {
            let frame = spinor_to_coframe(&xi).unwrap();
            let scaled = spinor_to_coframe(&(xi * lambda)).unwrap();
            let flipped = spinor_to_coframe(&-xi).unwrap();
            prop_assert!((scaled.0 - frame.0).max_abs() < 1e-12);
            prop_assert!((flipped.0 - frame.0).max_abs() < 1e-15);

            // a global phase e^{iφ} rotates ϑ¹ + iϑ² by e^{2iφ}: rows mix by R₃(2φ)
            let phased = spinor_to_coframe(&xi.with_phase(phi)).unwrap();
            let expected = rigid_rotate(&frame, &axis_rotation(2, 2.0 * phi)).unwrap();
            prop_assert!((phased.0 - expected.0).max_abs() < 1e-10);
            prop_assert!((spinor_to_density(&xi.with_phase(phi)).unwrap().value() - xi.norm_sq()).abs() < 1e-12);
        }
    }
}
