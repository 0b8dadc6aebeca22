//! Torsion-based deformation measures of a sampled coframe field.
//!
//! With `K^j_{αβ} = ∂_α ϑ^j_β` the per-covector jets, the invariant tensors are
//!
//! ```text
//! K_{αβγ}  = δ_{jk} ϑ^j_α K^k_{βγ}          (antisymmetric in α, γ)
//! T_{αβγ}  = K_{αβγ} − K_{αγβ}              (antisymmetric in β, γ)
//! *T_{αβ}  = ½ T_α^{γδ} ε_{γδβ} = δ_{jk} ϑ^j_α (curl ϑ^k)_β
//! ```
//!
//! and `*T` splits into axial (trace), vector (antisymmetric) and tensor
//! (symmetric trace-free) parts. `f = tr *T` and `v_α = *T^{βγ} ε_{βγα}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coframe_spinor::{Coframe, COFRAME_TOL};
use crate::derivative::Differentiator;
use crate::error::{Error, Result};
use crate::grid::{CovectorField, Field, ScalarField};
use crate::tensor_algebra::{eps, inner_rank2, Rank2, Rank3, Vec3, ANTISYMMETRY_TOL};

pub type CoframeField = Field<Coframe>;
pub type Rank2Field = Field<Rank2>;
pub type Rank3Field = Field<Rank3>;

/// `jet[j][α][β] = ∂_α ϑ^j_β` at one point.
pub type Jet = [Rank2; 3];

/// Checks every point of a coframe field, naming the first offending index.
pub fn validate_coframe_field(field: &CoframeField) -> Result<()> {
    field.grid.validate()?;
    for (i, frame) in field.data.iter().enumerate() {
        frame
            .validate(COFRAME_TOL)
            .map_err(|e| Error::InvalidCoframe(format!("grid point {i}: {e}")))?;
    }
    Ok(())
}

/// Derivatives of the nine coframe components along the given spacetime axis,
/// arranged as `out[point][j][β] = ∂_axis ϑ^j_β`.
fn coframe_derivative(field: &CoframeField, diff: &Differentiator, axis: usize) -> Result<Vec<Rank2>> {
    let mut out = vec![Rank2::ZERO; field.len()];
    for j in 0..3 {
        for b in 0..3 {
            let comp: Vec<f64> = field.data.iter().map(|f| f.0 .0[j][b]).collect();
            let d = diff.diff_real(&field.grid, &comp, axis)?;
            for (o, v) in out.iter_mut().zip(d) {
                o.0[j][b] = v;
            }
        }
    }
    Ok(out)
}

/// `K^j = ∂ϑ^j` for each frame index.
pub fn coframe_jet(field: &CoframeField, diff: &Differentiator) -> Result<Field<Jet>> {
    validate_coframe_field(field)?;
    let d: Vec<Vec<Rank2>> = (1..=3)
        .map(|axis| coframe_derivative(field, diff, axis))
        .collect::<Result<_>>()?;
    let data = (0..field.len())
        .into_par_iter()
        .map(|i| {
            let mut jet = [Rank2::ZERO; 3];
            for (j, kj) in jet.iter_mut().enumerate() {
                for a in 0..3 {
                    for b in 0..3 {
                        kj.0[a][b] = d[a][i].0[j][b];
                    }
                }
            }
            jet
        })
        .collect();
    Ok(Field { grid: field.grid, data })
}

/// `K_{αβγ} = δ_{jk} ϑ^j_α K^k_{βγ}` at a point.
pub fn contortion_at(frame: &Coframe, jet: &Jet) -> Rank3 {
    Rank3::from_fn(|a, b, c| (0..3).map(|j| frame.0 .0[j][a] * jet[j].0[b][c]).sum())
}

/// Recovers `K^j_{γδ} = ϑ^{jα} K_{αγδ}`.
pub fn jet_from_contortion(frame: &Coframe, k: &Rank3) -> Jet {
    let mut jet = [Rank2::ZERO; 3];
    for (j, kj) in jet.iter_mut().enumerate() {
        *kj = Rank2::from_fn(|g, d| (0..3).map(|a| frame.0 .0[j][a] * k.0[a][g][d]).sum());
    }
    jet
}

pub fn build_k(field: &CoframeField, diff: &Differentiator) -> Result<Rank3Field> {
    let jet = coframe_jet(field, diff)?;
    field.zip_map(&jet, contortion_at)
}

pub fn build_t(field: &CoframeField, diff: &Differentiator) -> Result<Rank3Field> {
    let k = build_k(field, diff)?;
    Ok(k.map(torsion_from_contortion_unchecked))
}

fn torsion_from_contortion_unchecked(k: &Rank3) -> Rank3 {
    Rank3::from_fn(|a, b, c| k.0[a][b][c] - k.0[a][c][b])
}

fn contortion_from_torsion_unchecked(t: &Rank3) -> Rank3 {
    Rank3::from_fn(|a, b, c| 0.5 * (t.0[a][b][c] + t.0[c][a][b] - t.0[b][c][a]))
}

fn scaled_tol(tol: f64, t: &Rank3) -> f64 {
    tol * t.max_abs().max(1.0)
}

/// `T_{αβγ} = K_{αβγ} − K_{αγβ}`; `K` must be antisymmetric in its first and third slots.
pub fn t_from_k(k: &Rank3) -> Result<Rank3> {
    t_from_k_with(k, ANTISYMMETRY_TOL)
}

pub fn t_from_k_with(k: &Rank3, tol: f64) -> Result<Rank3> {
    let defect = k.antisymmetry_defect(0, 2);
    if defect > scaled_tol(tol, k) {
        return Err(Error::NotAntisymmetric(1, 3, defect));
    }
    Ok(torsion_from_contortion_unchecked(k))
}

/// `K_{αβγ} = ½(T_{αβγ} + T_{γαβ} − T_{βγα})`; `T` must be antisymmetric in its last two slots.
pub fn k_from_t(t: &Rank3) -> Result<Rank3> {
    k_from_t_with(t, ANTISYMMETRY_TOL)
}

pub fn k_from_t_with(t: &Rank3, tol: f64) -> Result<Rank3> {
    let defect = t.antisymmetry_defect(1, 2);
    if defect > scaled_tol(tol, t) {
        return Err(Error::NotAntisymmetric(2, 3, defect));
    }
    Ok(contortion_from_torsion_unchecked(t))
}

pub fn t_from_k_field(k: &Rank3Field, tol: f64) -> Result<Rank3Field> {
    k.try_map(|_, v| t_from_k_with(v, tol))
}

pub fn k_from_t_field(t: &Rank3Field, tol: f64) -> Result<Rank3Field> {
    t.try_map(|_, v| k_from_t_with(v, tol))
}

/// `*T_{αβ} = ½ T_α^{γδ} ε_{γδβ}`.
pub fn star_torsion(t: &Rank3) -> Rank2 {
    Rank2::from_fn(|a, b| {
        let mut s = 0.0;
        for g in 0..3 {
            for d in 0..3 {
                s += t.0[a][g][d] * eps(g, d, b);
            }
        }
        0.5 * s
    })
}

/// `T_{αβγ} = *T_α^δ ε_{δβγ}`.
pub fn unstar_torsion(st: &Rank2) -> Rank3 {
    Rank3::from_fn(|a, b, c| (0..3).map(|d| st.0[a][d] * eps(d, b, c)).sum())
}

fn curl_from_jet(kj: &Rank2) -> Vec3 {
    [
        kj.0[1][2] - kj.0[2][1],
        kj.0[2][0] - kj.0[0][2],
        kj.0[0][1] - kj.0[1][0],
    ]
}

/// `*T = δ_{jk} ϑ^j ⊗ curl ϑ^k` at a point.
pub fn dual_torsion_at(frame: &Coframe, jet: &Jet) -> Rank2 {
    let mut st = Rank2::ZERO;
    for (j, kj) in jet.iter().enumerate() {
        st += Rank2::outer(&frame.row(j), &curl_from_jet(kj));
    }
    st
}

/// The nine-entry component display of `*T`, transcribed term by term.
pub fn dual_torsion_explicit_at(frame: &Coframe, jet: &Jet) -> Rank2 {
    // th(j, β) = ϑ^j_β and d(j, α, β) = ∂_α ϑ^j_β, 0-based.
    let th = |j: usize, b: usize| frame.0 .0[j][b];
    let d = |j: usize, a: usize, b: usize| jet[j].0[a][b];
    let mut m = Rank2::ZERO;
    for j in 0..3 {
        for r in 0..3 {
            m.0[r][0] += th(j, r) * d(j, 1, 2) - th(j, r) * d(j, 2, 1);
            m.0[r][1] += th(j, r) * d(j, 2, 0) - th(j, r) * d(j, 0, 2);
            m.0[r][2] += th(j, r) * d(j, 0, 1) - th(j, r) * d(j, 1, 0);
        }
    }
    m
}

/// `*T` computed from curls of the coframe covectors.
pub fn dual_torsion(field: &CoframeField, diff: &Differentiator) -> Result<Rank2Field> {
    let jet = coframe_jet(field, diff)?;
    field.zip_map(&jet, dual_torsion_at)
}

pub fn dual_torsion_explicit(field: &CoframeField, diff: &Differentiator) -> Result<Rank2Field> {
    let jet = coframe_jet(field, diff)?;
    field.zip_map(&jet, dual_torsion_explicit_at)
}

pub fn star_torsion_field(t: &Rank3Field) -> Rank2Field {
    t.map(star_torsion)
}

pub fn unstar_torsion_field(st: &Rank2Field) -> Rank3Field {
    st.map(unstar_torsion)
}

/// The three `SO(3)`-irreducible pieces of a rank-2 tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrreducibleParts {
    /// `(tr P / 3) g`
    pub axial: Rank2,
    /// `(P − Pᵀ)/2`
    pub vector: Rank2,
    /// `(P + Pᵀ)/2 − (tr P / 3) g`
    pub tensor: Rank2,
}

impl IrreducibleParts {
    pub fn reconstruct(&self) -> Rank2 {
        self.axial + self.vector + self.tensor
    }
}

pub fn decompose(p: &Rank2) -> IrreducibleParts {
    let axial = Rank2::identity() * (p.trace() / 3.0);
    let pt = p.transpose();
    let vector = (*p - pt) * 0.5;
    let tensor = (*p + pt) * 0.5 - axial;
    IrreducibleParts { axial, vector, tensor }
}

pub fn decompose_field(st: &Rank2Field) -> Field<IrreducibleParts> {
    st.map(decompose)
}

/// `f = *T^α_α`.
pub fn scalar_f(st: &Rank2) -> f64 {
    st.trace()
}

/// `v_α = *T^{βγ} ε_{βγα}`.
pub fn vector_v(st: &Rank2) -> Vec3 {
    let mut v = [0.0; 3];
    for (a, va) in v.iter_mut().enumerate() {
        for b in 0..3 {
            for c in 0..3 {
                *va += st.0[b][c] * eps(b, c, a);
            }
        }
    }
    v
}

pub fn scalar_f_field(st: &Rank2Field) -> ScalarField {
    st.map(scalar_f)
}

pub fn vector_v_field(st: &Rank2Field) -> CovectorField {
    st.map(vector_v)
}

/// `f` and `v` written directly through coframe components and their derivatives.
pub fn f_v_explicit_at(frame: &Coframe, jet: &Jet) -> (f64, Vec3) {
    let th = |j: usize, b: usize| frame.0 .0[j][b];
    let d = |j: usize, a: usize, b: usize| jet[j].0[a][b];
    let mut f = 0.0;
    let mut v = [0.0; 3];
    for j in 0..3 {
        f += th(j, 0) * d(j, 1, 2) - th(j, 0) * d(j, 2, 1) + th(j, 1) * d(j, 2, 0)
            - th(j, 1) * d(j, 0, 2)
            + th(j, 2) * d(j, 0, 1)
            - th(j, 2) * d(j, 1, 0);
        v[0] += th(j, 1) * d(j, 0, 1) - th(j, 1) * d(j, 1, 0) - th(j, 2) * d(j, 2, 0)
            + th(j, 2) * d(j, 0, 2);
        v[1] += th(j, 2) * d(j, 1, 2) - th(j, 2) * d(j, 2, 1) - th(j, 0) * d(j, 0, 1)
            + th(j, 0) * d(j, 1, 0);
        v[2] += th(j, 0) * d(j, 2, 0) - th(j, 0) * d(j, 0, 2) - th(j, 1) * d(j, 1, 2)
            + th(j, 1) * d(j, 2, 1);
    }
    (f, v)
}

/// Angular velocity `ω = ½ *(δ_{jk} ϑ^j ∧ ∂₀ϑ^k)` of a coframe field with a time axis.
pub fn angular_velocity(field: &CoframeField, diff: &Differentiator) -> Result<CovectorField> {
    validate_coframe_field(field)?;
    if !field.grid.has_time() {
        return Err(Error::MissingTimeAxis);
    }
    let dt = coframe_derivative(field, diff, 0)?;
    let data = field
        .data
        .par_iter()
        .zip(dt.par_iter())
        .map(|(frame, d0)| {
            let th = |j: usize, b: usize| frame.0 .0[j][b];
            let d = |j: usize, b: usize| d0.0[j][b];
            let mut w = [0.0; 3];
            for j in 0..3 {
                w[0] += th(j, 1) * d(j, 2) - th(j, 2) * d(j, 1);
                w[1] += th(j, 2) * d(j, 0) - th(j, 0) * d(j, 2);
                w[2] += th(j, 0) * d(j, 1) - th(j, 1) * d(j, 0);
            }
            w.map(|x| 0.5 * x)
        })
        .collect();
    Ok(Field { grid: field.grid, data })
}

/// Norm identities `‖ax‖² = f²/3`, `‖vec‖² = ½‖v‖²`,
/// `‖ten‖² = ‖*T‖² − f²/3 − ½‖v‖²`, returned as the three right-hand sides.
pub fn piece_norms_from_f_v(st: &Rank2) -> [f64; 3] {
    let f = scalar_f(st);
    let v = vector_v(st);
    let vv = v.iter().map(|x| x * x).sum::<f64>();
    let total = inner_rank2(st, st);
    [f * f / 3.0, 0.5 * vv, total - f * f / 3.0 - 0.5 * vv]
}
