//! Seeded generators for test inputs: spinors, rotations, moduli and smooth
//! periodic spinor fields.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coframe_spinor::{spinor_to_coframe, Spinor};
use crate::energetics::ElasticModuli;
use crate::grid::{Field, GridSpec};
use crate::spinor_repr::SpinorField;
use crate::tensor_algebra::Rank2;
use crate::C64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Components uniform in `[−1, 1]`, rejecting spinors with `ρ < 0.01`.
pub fn random_spinor<R: Rng>(rng: &mut R) -> Spinor {
    loop {
        let s = Spinor::from_reals(
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        );
        if s.norm_sq() >= 0.01 {
            return s;
        }
    }
}

pub fn random_unit_spinor<R: Rng>(rng: &mut R) -> Spinor {
    let s = random_spinor(rng);
    s * (1.0 / s.norm())
}

/// A random element of `SO(3)`, taken as the coframe of a random spinor.
pub fn random_rotation<R: Rng>(rng: &mut R) -> Rank2 {
    spinor_to_coframe(&random_spinor(rng)).expect("nonzero spinor").0
}

/// Moduli with every coefficient uniform in `[0.1, 2]`.
pub fn random_moduli<R: Rng>(rng: &mut R) -> ElasticModuli {
    ElasticModuli {
        c_ax: rng.gen_range(0.1..2.0),
        c_vec: rng.gen_range(0.1..2.0),
        c_ten: rng.gen_range(0.1..2.0),
        c_kin: rng.gen_range(0.1..2.0),
    }
}

/// Random moduli realizing each case of the plane-wave classification by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuliCase {
    Generic,
    /// `v₁ = v₂` through `c_vec = (8c_ax + c_ten)/3`
    EqualSpeeds,
    /// `v₂ = 0` through `c_vec = c_ten = 0`
    NoTransverse,
    /// `v₁ = 0` through `c_ax = c_ten = 0`
    NoLongitudinal,
}

impl ModuliCase {
    pub const ALL: [ModuliCase; 4] = [
        ModuliCase::Generic,
        ModuliCase::EqualSpeeds,
        ModuliCase::NoTransverse,
        ModuliCase::NoLongitudinal,
    ];
}

pub fn random_moduli_case<R: Rng>(rng: &mut R, case: ModuliCase) -> ElasticModuli {
    let mut m = random_moduli(rng);
    match case {
        ModuliCase::Generic => {
            // keep clear of the equal-speed surface
            while ((8.0 * m.c_ax + m.c_ten) / 3.0 - m.c_vec).abs() < 0.05 {
                m = random_moduli(rng);
            }
        }
        ModuliCase::EqualSpeeds => m.c_vec = (8.0 * m.c_ax + m.c_ten) / 3.0,
        ModuliCase::NoTransverse => {
            m.c_vec = 0.0;
            m.c_ten = 0.0;
        }
        ModuliCase::NoLongitudinal => {
            m.c_ax = 0.0;
            m.c_ten = 0.0;
        }
    }
    m
}

/// Integer wavenumbers in `[−k_max, k_max]`, one per spacetime axis.
fn random_wavenumbers<R: Rng>(rng: &mut R, k_max: i32) -> [f64; 4] {
    [0; 4].map(|_| rng.gen_range(-k_max..=k_max) as f64)
}

/// `ξ(x) = ξ₀ + amplitude · Σ_k c_k cos(2π m_k·(x/L) + φ_k)` with unit spinors
/// `ξ₀`, `c_k` and integer wavenumbers `|m| ≤ k_max` (time included when the
/// grid has a time axis). Nonvanishing whenever `amplitude · modes < 1`.
pub fn smooth_spinor_field<R: Rng>(
    rng: &mut R,
    grid: GridSpec,
    modes: usize,
    amplitude: f64,
    k_max: i32,
) -> SpinorField {
    let base = random_unit_spinor(rng);
    let lengths = [
        grid.time.map_or(1.0, |t| t.length),
        grid.space[0].length,
        grid.space[1].length,
        grid.space[2].length,
    ];
    let has_time = grid.has_time();
    let terms: Vec<([f64; 4], f64, Spinor)> = (0..modes)
        .map(|_| {
            let mut m = random_wavenumbers(rng, k_max);
            if !has_time {
                m[0] = 0.0;
            }
            let k = [0, 1, 2, 3].map(|a| 2.0 * PI * m[a] / lengths[a]);
            let phi = rng.gen_range(0.0..2.0 * PI);
            (k, phi, random_unit_spinor(rng) * amplitude)
        })
        .collect();
    Field::from_fn(grid, |x| {
        let mut s = base;
        for (k, phi, c) in &terms {
            let arg = k[0] * x[0] + k[1] * x[1] + k[2] * x[2] + k[3] * x[3] + phi;
            s = s + *c * arg.cos();
        }
        s
    })
}

/// A smooth positive function `λ(x) = 1 + ½ sin(…)·cos(…)` periodic on the grid.
pub fn smooth_positive_scalar<R: Rng>(rng: &mut R, grid: GridSpec) -> Field<f64> {
    let k = [1, 2, 3].map(|a| 2.0 * PI * rng.gen_range(1..=2) as f64 / grid.space[a - 1].length);
    let phase = rng.gen_range(0.0..2.0 * PI);
    Field::from_fn(grid, |x| 1.0 + 0.5 * (k[0] * x[1] + phase).sin() * (k[1] * x[2] - k[2] * x[3]).cos())
}

/// Random complex phase factor `e^{iφ}`.
pub fn random_phase<R: Rng>(rng: &mut R) -> (f64, C64) {
    let phi = rng.gen_range(-PI..PI);
    (phi, C64::from_polar(1.0, phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coframe_spinor::check_special_orthogonal;
    use crate::planewave::{classify_speeds, wave_speeds, SpeedCase};

    #[test]
    fn generators_are_deterministic_and_valid() {
        let a = random_spinor(&mut rng(7));
        let b = random_spinor(&mut rng(7));
        assert_eq!(a, b);
        let mut r = rng(1);
        for _ in 0..50 {
            check_special_orthogonal(&random_rotation(&mut r)).unwrap();
        }
    }

    #[test]
    fn moduli_cases_classify_as_constructed() {
        let mut r = rng(3);
        for _ in 0..200 {
            for (case, expected) in ModuliCase::ALL.into_iter().zip([
                SpeedCase::Generic,
                SpeedCase::Equal,
                SpeedCase::OnlyType1,
                SpeedCase::OnlyType2,
            ]) {
                let m = random_moduli_case(&mut r, case);
                m.validate().unwrap();
                assert_eq!(classify_speeds(&wave_speeds(&m).unwrap()), expected, "{m:?}");
            }
        }
    }

    #[test]
    fn smooth_fields_stay_away_from_zero() {
        let g = GridSpec::cube(8, 2.0).unwrap();
        let f = smooth_spinor_field(&mut rng(5), g, 3, 0.3, 2);
        assert!(f.data.iter().all(|s| s.norm_sq() > 0.09));
    }
}
