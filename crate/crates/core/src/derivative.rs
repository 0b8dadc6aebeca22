//! Partial derivatives of periodic sampled fields.
//!
//! Three schemes are available:
//!
//! * [`DerivativeMode::Central`]: second-order central differences with periodic wrap;
//! * [`DerivativeMode::Spectral`]: trigonometric differentiation via FFT along each line
//!   (the Nyquist mode of even-length lines is dropped);
//! * [`DerivativeMode::PlaneWaveExact`]: `∂_𝛂 → −i p_𝛂`, exact for any field of the form
//!   `e^{−ip·x}·const`. It is only meaningful for such complex fields and is rejected
//!   for real-valued input.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::coframe_spinor::Spinor;
use crate::error::{Error, Result};
use crate::grid::{Field, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMode {
    Central,
    Spectral,
    /// Exact differentiation of a plane wave with 4-momentum `(p₀, p₁, p₂, p₃)`.
    PlaneWaveExact { p: [f64; 4] },
}

impl DerivativeMode {
    pub fn name(&self) -> &'static str {
        match self {
            DerivativeMode::Central => "central",
            DerivativeMode::Spectral => "spectral",
            DerivativeMode::PlaneWaveExact { .. } => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Differentiator {
    pub mode: DerivativeMode,
}

impl Differentiator {
    pub fn new(mode: DerivativeMode) -> Self {
        Differentiator { mode }
    }

    pub fn central() -> Self {
        Self::new(DerivativeMode::Central)
    }

    pub fn spectral() -> Self {
        Self::new(DerivativeMode::Spectral)
    }

    pub fn exact(p: [f64; 4]) -> Self {
        Self::new(DerivativeMode::PlaneWaveExact { p })
    }

    fn check_axis(grid: &GridSpec, axis: usize) -> Result<()> {
        match grid.axis(axis) {
            Some(_) => Ok(()),
            None if axis == 0 => Err(Error::MissingTimeAxis),
            None => Err(Error::InvalidGrid(format!("no spacetime axis {axis}"))),
        }
    }

    /// `∂_axis` of complex samples laid out on `grid`.
    pub fn diff_complex(&self, grid: &GridSpec, values: &[C64], axis: usize) -> Result<Vec<C64>> {
        Self::check_axis(grid, axis)?;
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        Ok(match self.mode {
            DerivativeMode::Central => central(grid, values, axis),
            DerivativeMode::Spectral => spectral(grid, values, axis),
            DerivativeMode::PlaneWaveExact { p } => {
                let factor = C64::new(0.0, -p[axis]);
                values.par_iter().map(|v| v * factor).collect()
            }
        })
    }

    /// `∂_axis` of real samples. Not available in plane-wave exact mode.
    pub fn diff_real(&self, grid: &GridSpec, values: &[f64], axis: usize) -> Result<Vec<f64>> {
        Self::check_axis(grid, axis)?;
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        match self.mode {
            DerivativeMode::Central => Ok(central(grid, values, axis)),
            DerivativeMode::Spectral => {
                let z: Vec<C64> = values.iter().map(|&v| C64::new(v, 0.0)).collect();
                Ok(spectral(grid, &z, axis).into_iter().map(|c| c.re).collect())
            }
            DerivativeMode::PlaneWaveExact { .. } => Err(Error::UnsupportedDerivative {
                mode: self.mode.name(),
                reason: "real-valued fields are not plane waves".into(),
            }),
        }
    }

    pub fn diff_spinor(&self, field: &Field<Spinor>, axis: usize) -> Result<Field<Spinor>> {
        let [a, b] = split_spinor(field);
        let da = self.diff_complex(&field.grid, &a, axis)?;
        let db = self.diff_complex(&field.grid, &b, axis)?;
        Ok(Field {
            grid: field.grid,
            data: da.into_iter().zip(db).map(|(x, y)| Spinor([x, y])).collect(),
        })
    }

    /// Spatial gradient `[∂₁, ∂₂, ∂₃]` of a spinor field.
    pub fn spatial_gradient(&self, field: &Field<Spinor>) -> Result<[Field<Spinor>; 3]> {
        Ok([
            self.diff_spinor(field, 1)?,
            self.diff_spinor(field, 2)?,
            self.diff_spinor(field, 3)?,
        ])
    }

    /// `∂₀` of every component of a real multi-component field.
    pub fn diff_components<const N: usize>(
        &self,
        field: &Field<[f64; N]>,
        axis: usize,
    ) -> Result<Field<[f64; N]>> {
        let mut out = vec![[0.0; N]; field.len()];
        for c in 0..N {
            let comp: Vec<f64> = field.data.iter().map(|v| v[c]).collect();
            let d = self.diff_real(&field.grid, &comp, axis)?;
            for (o, v) in out.iter_mut().zip(d) {
                o[c] = v;
            }
        }
        Ok(Field { grid: field.grid, data: out })
    }
}

fn split_spinor(field: &Field<Spinor>) -> [Vec<C64>; 2] {
    [
        field.data.iter().map(|s| s.0[0]).collect(),
        field.data.iter().map(|s| s.0[1]).collect(),
    ]
}

fn central<T>(grid: &GridSpec, values: &[T], axis: usize) -> Vec<T>
where
    T: Copy + Send + Sync + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let h = grid.axis(axis).expect("axis checked").spacing();
    let inv = 0.5 / h;
    (0..values.len())
        .into_par_iter()
        .map(|i| {
            let fwd = grid.neighbor(i, axis, 1);
            let bwd = grid.neighbor(i, axis, -1);
            (values[fwd] - values[bwd]) * inv
        })
        .collect()
}

fn spectral(grid: &GridSpec, values: &[C64], axis: usize) -> Vec<C64> {
    let ax = grid.axis(axis).expect("axis checked");
    let n = ax.n;
    let dims = grid.dims();
    let stride = grid.strides()[axis];
    let mut planner = FftPlanner::<f64>::new();
    let forward: Arc<dyn Fft<f64>> = planner.plan_fft_forward(n);
    let inverse: Arc<dyn Fft<f64>> = planner.plan_fft_inverse(n);
    let two_pi_over_l = 2.0 * std::f64::consts::PI / ax.length;
    let multipliers: Vec<C64> = (0..n)
        .map(|m| {
            let signed = if m < n.div_ceil(2) { m as f64 } else { m as f64 - n as f64 };
            if n % 2 == 0 && m == n / 2 {
                C64::new(0.0, 0.0)
            } else {
                C64::new(0.0, signed * two_pi_over_l / n as f64)
            }
        })
        .collect();
    let bases: Vec<usize> = (0..values.len()).filter(|&i| (i / stride) % dims[axis] == 0).collect();
    let lines: Vec<Vec<C64>> = bases
        .par_iter()
        .map(|&base| {
            let mut line: Vec<C64> = (0..n).map(|k| values[base + k * stride]).collect();
            forward.process(&mut line);
            for (v, m) in line.iter_mut().zip(&multipliers) {
                *v *= m;
            }
            inverse.process(&mut line);
            line
        })
        .collect();
    let mut out = vec![C64::new(0.0, 0.0); values.len()];
    for (base, line) in bases.iter().zip(lines) {
        for (k, v) in line.into_iter().enumerate() {
            out[base + k * stride] = v;
        }
    }
    out
}
