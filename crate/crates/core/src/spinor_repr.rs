//! Deformation measures and angular velocity written directly through a spinor field.
//!
//! With `ρ = ξ̄ξ` and `s_{βγ} = Im(ξ̄ σ_β ∂_γ ξ)`:
//!
//! ```text
//! *T_{αβ} = (−2 s_{βα} + 2 δ_{αβ} s_{γγ}) / ρ
//! f       = 4 s_{γγ} / ρ
//! v_α     = 2 ε_{βγα} s_{βγ} / ρ
//! ω_α     = −2 Im(ξ̄ σ_α ∂₀ξ) / ρ
//! ```
//!
//! All of these are invariant under `ξ → λ(x) ξ` with `λ > 0` for the spatial
//! measures, and under a constant phase for everything.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coframe_spinor::{spinor_to_coframe_with, Spinor, DEFAULT_RHO_MIN};
use crate::deformation::{CoframeField, Rank2Field};
use crate::derivative::Differentiator;
use crate::error::{Error, Result};
use crate::grid::{CovectorField, Field, ScalarField};
use crate::tensor_algebra::{eps, sigma, Rank2, Vec3};

pub type SpinorField = Field<Spinor>;

/// Spatial derivatives `[∂₁ξ, ∂₂ξ, ∂₃ξ]` at a point.
pub type SpinorGradient = [Spinor; 3];

/// `ρ` at every point, failing at the first point with `ρ ≤ rho_min`.
pub fn density_field(field: &SpinorField, rho_min: f64) -> Result<ScalarField> {
    field.grid.validate()?;
    field.try_map(|i, xi| {
        let rho = xi.norm_sq();
        if rho > rho_min {
            Ok(rho)
        } else {
            Err(Error::DegenerateAt { index: i, density: rho })
        }
    })
}

/// Coframe and density fields of a nonvanishing spinor field.
pub fn to_coframe_field(field: &SpinorField) -> Result<(CoframeField, ScalarField)> {
    let rho = density_field(field, DEFAULT_RHO_MIN)?;
    let frames = field.try_map(|_, xi| spinor_to_coframe_with(xi, DEFAULT_RHO_MIN))?;
    Ok((frames, rho))
}

/// `Im(ξ̄ σ_a η)` for the three spatial Pauli matrices.
fn im_sigma(xi: &Spinor, eta: &Spinor) -> Vec3 {
    let s = sigma();
    [0, 1, 2].map(|a| s[a].sandwich(&xi.0, &eta.0).im)
}

/// `s[β][γ] = Im(ξ̄ σ_β ∂_γ ξ)`.
fn spin_gradient(xi: &Spinor, grad: &SpinorGradient) -> Rank2 {
    let cols: [Vec3; 3] = [0, 1, 2].map(|g| im_sigma(xi, &grad[g]));
    Rank2::from_fn(|b, g| cols[g][b])
}

pub fn dual_torsion_at(xi: &Spinor, grad: &SpinorGradient) -> Rank2 {
    let rho = xi.norm_sq();
    let s = spin_gradient(xi, grad);
    let tr = s.trace();
    Rank2::from_fn(|a, b| {
        let diag = if a == b { 2.0 * tr } else { 0.0 };
        (-2.0 * s.0[b][a] + diag) / rho
    })
}

pub fn f_at(xi: &Spinor, grad: &SpinorGradient) -> f64 {
    4.0 * spin_gradient(xi, grad).trace() / xi.norm_sq()
}

pub fn v_at(xi: &Spinor, grad: &SpinorGradient) -> Vec3 {
    let rho = xi.norm_sq();
    let s = spin_gradient(xi, grad);
    let mut v = [0.0; 3];
    for (a, va) in v.iter_mut().enumerate() {
        for b in 0..3 {
            for g in 0..3 {
                *va += eps(b, g, a) * s.0[b][g];
            }
        }
        *va *= 2.0 / rho;
    }
    v
}

pub fn omega_at(xi: &Spinor, dt: &Spinor) -> Vec3 {
    let rho = xi.norm_sq();
    im_sigma(xi, dt).map(|x| -2.0 * x / rho)
}

fn gradient_field(field: &SpinorField, diff: &Differentiator) -> Result<Vec<SpinorGradient>> {
    let [d1, d2, d3] = diff.spatial_gradient(field)?;
    Ok((0..field.len())
        .into_par_iter()
        .map(|i| [d1.data[i], d2.data[i], d3.data[i]])
        .collect())
}

fn pointwise<T: Send>(
    field: &SpinorField,
    diff: &Differentiator,
    f: impl Fn(&Spinor, &SpinorGradient) -> T + Sync,
) -> Result<Field<T>> {
    density_field(field, DEFAULT_RHO_MIN)?;
    let grad = gradient_field(field, diff)?;
    let data = field.data.par_iter().zip(grad.par_iter()).map(|(x, g)| f(x, g)).collect();
    Ok(Field { grid: field.grid, data })
}

pub fn dual_torsion_from_spinor(field: &SpinorField, diff: &Differentiator) -> Result<Rank2Field> {
    pointwise(field, diff, dual_torsion_at)
}

pub fn f_from_spinor(field: &SpinorField, diff: &Differentiator) -> Result<ScalarField> {
    pointwise(field, diff, f_at)
}

pub fn v_from_spinor(field: &SpinorField, diff: &Differentiator) -> Result<CovectorField> {
    pointwise(field, diff, v_at)
}

pub fn omega_from_spinor(field: &SpinorField, diff: &Differentiator) -> Result<CovectorField> {
    if !field.grid.has_time() {
        return Err(Error::MissingTimeAxis);
    }
    density_field(field, DEFAULT_RHO_MIN)?;
    let dt = diff.diff_spinor(field, 0)?;
    field.zip_map(&dt, omega_at)
}

/// Everything needed for the Lagrangian density at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMeasures {
    pub rho: f64,
    pub dual_torsion: Rank2,
    pub omega: Vec3,
}

/// `ρ`, `*T` and `ω` at every point of a spacetime spinor field.
pub fn measures(field: &SpinorField, diff: &Differentiator) -> Result<Field<PointMeasures>> {
    if !field.grid.has_time() {
        return Err(Error::MissingTimeAxis);
    }
    density_field(field, DEFAULT_RHO_MIN)?;
    let grad = gradient_field(field, diff)?;
    let dt = diff.diff_spinor(field, 0)?;
    let data = (0..field.len())
        .into_par_iter()
        .map(|i| {
            let xi = &field.data[i];
            PointMeasures {
                rho: xi.norm_sq(),
                dual_torsion: dual_torsion_at(xi, &grad[i]),
                omega: omega_at(xi, &dt.data[i]),
            }
        })
        .collect();
    Ok(Field { grid: field.grid, data })
}
