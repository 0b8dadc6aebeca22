//! Kinetic and potential energy, the Lagrangian density and the action.
//!
//! ```text
//! K = c_kin ∫ ‖ω‖² ρ
//! P = ∫ (c_ax ‖ax‖² + c_vec ‖vec‖² + c_ten ‖ten‖²) ρ
//!   = ∫ ((c_ax − c_ten)/3 f² + (c_vec − c_ten)/2 ‖v‖² + c_ten ‖*T‖²) ρ
//! L = P-density − K-density,   S = ∫ L dx⁰ dx
//! ```
//!
//! Integrals are plain Riemann sums over the periodic grid, reduced with
//! [`pairwise_sum`](crate::reduce::pairwise_sum).

use serde::{Deserialize, Serialize};

use crate::deformation::{self, decompose, scalar_f, vector_v, CoframeField, Rank2Field};
use crate::derivative::Differentiator;
use crate::error::{Error, Result};
use crate::grid::{CovectorField, Field, GridSpec, ScalarField};
use crate::reduce::{max_abs, pairwise_sum};
use crate::spinor_repr::{self, PointMeasures, SpinorField};
use crate::tensor_algebra::{inner_rank2, norm_sq, Rank2, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticModuli {
    pub c_ax: f64,
    pub c_vec: f64,
    pub c_ten: f64,
    pub c_kin: f64,
}

impl ElasticModuli {
    pub fn new(c_ax: f64, c_vec: f64, c_ten: f64, c_kin: f64) -> Result<Self> {
        let m = ElasticModuli { c_ax, c_vec, c_ten, c_kin };
        m.validate()?;
        Ok(m)
    }

    /// `c_vec = c_ten = 0` with time scaled so that `c_kin = 4/3 c_ax`.
    pub fn purely_axial(c_ax: f64) -> Result<Self> {
        Self::new(c_ax, 0.0, 0.0, 4.0 / 3.0 * c_ax)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.c_ax, self.c_vec, self.c_ten, self.c_kin];
        if all.iter().any(|c| !c.is_finite()) {
            return Err(Error::InadmissibleModuli(format!("non-finite modulus in {self:?}")));
        }
        if self.c_ax < 0.0 || self.c_vec < 0.0 || self.c_ten < 0.0 {
            return Err(Error::InadmissibleModuli(format!(
                "elastic moduli must be nonnegative, got c_ax={}, c_vec={}, c_ten={}",
                self.c_ax, self.c_vec, self.c_ten
            )));
        }
        if self.c_ax + self.c_vec + self.c_ten <= 0.0 {
            return Err(Error::InadmissibleModuli("elastic moduli are all zero".into()));
        }
        if self.c_kin <= 0.0 {
            return Err(Error::InadmissibleModuli(format!("c_kin must be positive, got {}", self.c_kin)));
        }
        Ok(())
    }

    pub fn is_purely_axial(&self) -> bool {
        self.c_vec == 0.0 && self.c_ten == 0.0
    }

    /// Coefficients `((c_ax − c_ten)/3, (c_vec − c_ten)/2, c_ten)` of `f²`, `‖v‖²`, `‖*T‖²`.
    pub fn simplified_coefficients(&self) -> [f64; 3] {
        [(self.c_ax - self.c_ten) / 3.0, (self.c_vec - self.c_ten) / 2.0, self.c_ten]
    }
}

/// Potential energy density per unit `ρ` through the irreducible pieces.
pub fn potential_per_rho_irreducible(st: &Rank2, m: &ElasticModuli) -> f64 {
    let parts = decompose(st);
    m.c_ax * inner_rank2(&parts.axial, &parts.axial)
        + m.c_vec * inner_rank2(&parts.vector, &parts.vector)
        + m.c_ten * inner_rank2(&parts.tensor, &parts.tensor)
}

/// Potential energy density per unit `ρ` through `f`, `v` and `*T`.
pub fn potential_per_rho(st: &Rank2, m: &ElasticModuli) -> f64 {
    let [a, b, c] = m.simplified_coefficients();
    let f = scalar_f(st);
    a * f * f + b * norm_sq(&vector_v(st)) + c * inner_rank2(st, st)
}

pub fn kinetic_per_rho(omega: &Vec3, m: &ElasticModuli) -> f64 {
    m.c_kin * norm_sq(omega)
}

/// `L/ρ`; vanishes pointwise on solutions.
pub fn lagrangian_per_rho(st: &Rank2, omega: &Vec3, m: &ElasticModuli) -> f64 {
    potential_per_rho(st, m) - kinetic_per_rho(omega, m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PotentialForm {
    /// `c_ax ‖ax‖² + c_vec ‖vec‖² + c_ten ‖ten‖²`
    Irreducible,
    /// `(c_ax − c_ten)/3 f² + (c_vec − c_ten)/2 ‖v‖² + c_ten ‖*T‖²`
    #[default]
    Simplified,
}

/// Riemann sum of `density` over each time slice.
pub fn integrate_slices(density: &ScalarField) -> Vec<f64> {
    let dv = density.grid.spatial_cell_volume();
    (0..density.grid.n_slices())
        .map(|t| pairwise_sum(density.slice(t)) * dv)
        .collect()
}

/// Riemann sum over the whole spacetime grid.
pub fn integrate_spacetime(density: &ScalarField) -> Result<f64> {
    if !density.grid.has_time() {
        return Err(Error::MissingTimeAxis);
    }
    Ok(pairwise_sum(&density.data) * density.grid.cell_volume())
}

fn check_rho(rho: &ScalarField) -> Result<()> {
    match rho.data.iter().position(|r| !(*r > 0.0)) {
        Some(i) => Err(Error::DegenerateAt { index: i, density: rho.data[i] }),
        None => Ok(()),
    }
}

/// Kinetic energy of each time slice.
pub fn kinetic_energy(omega: &CovectorField, rho: &ScalarField, m: &ElasticModuli) -> Result<Vec<f64>> {
    m.validate()?;
    check_rho(rho)?;
    let dens = omega.zip_map(rho, |w, r| kinetic_per_rho(w, m) * r)?;
    Ok(integrate_slices(&dens))
}

/// Potential energy of each time slice.
pub fn potential_energy(
    st: &Rank2Field,
    rho: &ScalarField,
    m: &ElasticModuli,
    form: PotentialForm,
) -> Result<Vec<f64>> {
    m.validate()?;
    check_rho(rho)?;
    let dens = st.zip_map(rho, |s, r| {
        r * match form {
            PotentialForm::Irreducible => potential_per_rho_irreducible(s, m),
            PotentialForm::Simplified => potential_per_rho(s, m),
        }
    })?;
    Ok(integrate_slices(&dens))
}

fn lagrangian_from_measures(meas: &Field<PointMeasures>, m: &ElasticModuli) -> ScalarField {
    meas.map(|p| p.rho * lagrangian_per_rho(&p.dual_torsion, &p.omega, m))
}

/// `L` of a spinor field on a spacetime grid.
pub fn lagrangian_density(field: &SpinorField, diff: &Differentiator, m: &ElasticModuli) -> Result<ScalarField> {
    m.validate()?;
    let meas = spinor_repr::measures(field, diff)?;
    Ok(lagrangian_from_measures(&meas, m))
}

/// `L` of a coframe field and density on a spacetime grid.
pub fn lagrangian_density_coframe(
    frames: &CoframeField,
    rho: &ScalarField,
    diff: &Differentiator,
    m: &ElasticModuli,
) -> Result<ScalarField> {
    m.validate()?;
    frames.grid.ensure_same(&rho.grid)?;
    check_rho(rho)?;
    let st = deformation::dual_torsion(frames, diff)?;
    let omega = deformation::angular_velocity(frames, diff)?;
    let per_rho = st.zip_map(&omega, |s, w| lagrangian_per_rho(s, w, m))?;
    per_rho.zip_map(rho, |l, r| l * r)
}

pub fn action(field: &SpinorField, diff: &Differentiator, m: &ElasticModuli) -> Result<f64> {
    integrate_spacetime(&lagrangian_density(field, diff, m)?)
}

/// `L/ρ` pointwise.
pub fn density_el_residual(field: &SpinorField, diff: &Differentiator, m: &ElasticModuli) -> Result<ScalarField> {
    m.validate()?;
    let meas = spinor_repr::measures(field, diff)?;
    Ok(meas.map(|p| lagrangian_per_rho(&p.dual_torsion, &p.omega, m)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    /// Per time slice.
    pub kinetic: Vec<f64>,
    /// Per time slice.
    pub potential: Vec<f64>,
    pub action: f64,
    /// `max |L/ρ|` over the grid.
    pub residual_maxnorm: f64,
    /// Largest relative gap between the two potential energy formulas.
    pub potential_path_gap: f64,
}

pub fn energy_report(field: &SpinorField, diff: &Differentiator, m: &ElasticModuli) -> Result<EnergyReport> {
    m.validate()?;
    let meas = spinor_repr::measures(field, diff)?;
    let grid: GridSpec = field.grid;
    let rho = meas.map(|p| p.rho);
    let st = meas.map(|p| p.dual_torsion);
    let omega = meas.map(|p| p.omega);
    let kinetic = kinetic_energy(&omega, &rho, m)?;
    let potential = potential_energy(&st, &rho, m, PotentialForm::Simplified)?;
    let irreducible = potential_energy(&st, &rho, m, PotentialForm::Irreducible)?;
    let potential_path_gap = potential
        .iter()
        .zip(&irreducible)
        .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    let l = lagrangian_from_measures(&meas, m);
    let action = pairwise_sum(&l.data) * grid.cell_volume();
    let residual_maxnorm = max_abs(meas.data.iter().map(|p| lagrangian_per_rho(&p.dual_torsion, &p.omega, m)));
    Ok(EnergyReport { kinetic, potential, action, residual_maxnorm, potential_path_gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli_validation() {
        assert!(ElasticModuli::new(1.0, 1.0, 1.0, 1.0).is_ok());
        assert!(ElasticModuli::new(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(ElasticModuli::new(-1.0, 1.0, 1.0, 1.0).is_err());
        assert!(ElasticModuli::new(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(ElasticModuli::new(f64::NAN, 1.0, 1.0, 1.0).is_err());
        let m = ElasticModuli::purely_axial(0.75).unwrap();
        assert_eq!(m.c_kin, 1.0);
        assert!(m.is_purely_axial());
    }

    #[test]
    fn screw_potential_density() {
        let k = 0.9;
        let st = Rank2::diag([-k, -k, 0.0]);
        let m = ElasticModuli::new(0.7, 0.4, 0.3, 1.0).unwrap();
        let expected = 4.0 / 3.0 * m.c_ax * k * k + 2.0 / 3.0 * m.c_ten * k * k;
        assert!((potential_per_rho(&st, &m) - expected).abs() < 1e-14);
        assert!((potential_per_rho_irreducible(&st, &m) - expected).abs() < 1e-14);
    }

    #[test]
    fn plane_wave_kinetic_density() {
        let m = ElasticModuli::new(1.0, 1.0, 1.0, 2.5).unwrap();
        let p0 = 0.6;
        assert!((kinetic_per_rho(&[0.0, 0.0, 2.0 * p0], &m) - 2.5 * 4.0 * p0 * p0).abs() < 1e-15);
    }

    #[test]
    fn slice_integrals_are_riemann_sums() {
        let g = GridSpec::cube(4, 2.0).unwrap();
        let rho = Field::constant(g, 1.0);
        let omega = Field::constant(g, [0.0, 0.0, 1.0]);
        let m = ElasticModuli::new(1.0, 0.0, 0.0, 3.0).unwrap();
        assert_eq!(kinetic_energy(&omega, &rho, &m).unwrap(), vec![24.0]);
        let rho2 = rho.map(|r| 2.0 * r);
        assert_eq!(kinetic_energy(&omega, &rho2, &m).unwrap(), vec![48.0]);
        assert!(integrate_spacetime(&rho).is_err());
        let bad = Field::constant(GridSpec::cube(5, 2.0).unwrap(), 1.0);
        assert!(matches!(kinetic_energy(&omega, &bad, &m), Err(Error::GridMismatch(_))));
    }
}
