//! Periodic grids over space or spacetime and fields sampled on them.
//!
//! Storage is row-major in `(t, x¹, x², x³)` order; grids without a time axis
//! behave as if the time dimension had a single sample. Grid point `i` along an
//! axis of length `L` sits at `i·L/n`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_POINTS_PER_AXIS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub n: usize,
    pub length: f64,
}

impl Axis {
    pub fn new(n: usize, length: f64) -> Self {
        Axis { n, length }
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub time: Option<Axis>,
    pub space: [Axis; 3],
}

impl GridSpec {
    pub fn spatial(n: [usize; 3], length: [f64; 3]) -> Result<Self> {
        let g = GridSpec {
            time: None,
            space: [0, 1, 2].map(|i| Axis::new(n[i], length[i])),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn spacetime(time: Axis, n: [usize; 3], length: [f64; 3]) -> Result<Self> {
        let g = GridSpec {
            time: Some(time),
            space: [0, 1, 2].map(|i| Axis::new(n[i], length[i])),
        };
        g.validate()?;
        Ok(g)
    }

    /// Cubic spatial grid of side `length` with `n` points per axis.
    pub fn cube(n: usize, length: f64) -> Result<Self> {
        Self::spatial([n; 3], [length; 3])
    }

    pub fn validate(&self) -> Result<()> {
        for (name, axis) in self.axes_named() {
            if axis.n < MIN_POINTS_PER_AXIS {
                return Err(Error::InvalidGrid(format!(
                    "axis {name} has {} points, need at least {MIN_POINTS_PER_AXIS}",
                    axis.n
                )));
            }
            if !(axis.length > 0.0 && axis.length.is_finite()) {
                return Err(Error::InvalidGrid(format!(
                    "axis {name} has non-positive length {}",
                    axis.length
                )));
            }
        }
        Ok(())
    }

    fn axes_named(&self) -> Vec<(&'static str, Axis)> {
        let mut v = Vec::with_capacity(4);
        if let Some(t) = self.time {
            v.push(("t", t));
        }
        v.extend(["x1", "x2", "x3"].into_iter().zip(self.space));
        v
    }

    pub fn has_time(&self) -> bool {
        self.time.is_some()
    }

    /// Spacetime axis `0` is time, `1..=3` are spatial.
    pub fn axis(&self, a: usize) -> Option<Axis> {
        match a {
            0 => self.time,
            1..=3 => Some(self.space[a - 1]),
            _ => None,
        }
    }

    /// Point counts `(n_t, n_1, n_2, n_3)` with `n_t = 1` when there is no time axis.
    pub fn dims(&self) -> [usize; 4] {
        [
            self.time.map_or(1, |t| t.n),
            self.space[0].n,
            self.space[1].n,
            self.space[2].n,
        ]
    }

    pub fn len(&self) -> usize {
        self.dims().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of points in one time slice.
    pub fn slice_len(&self) -> usize {
        self.space.iter().map(|a| a.n).product()
    }

    pub fn n_slices(&self) -> usize {
        self.dims()[0]
    }

    pub fn strides(&self) -> [usize; 4] {
        let d = self.dims();
        [d[1] * d[2] * d[3], d[2] * d[3], d[3], 1]
    }

    pub fn unflatten(&self, index: usize) -> [usize; 4] {
        let d = self.dims();
        let i3 = index % d[3];
        let r = index / d[3];
        let i2 = r % d[2];
        let r = r / d[2];
        let i1 = r % d[1];
        [r / d[1], i1, i2, i3]
    }

    pub fn flatten(&self, idx: [usize; 4]) -> usize {
        let s = self.strides();
        idx[0] * s[0] + idx[1] * s[1] + idx[2] * s[2] + idx[3] * s[3]
    }

    /// Flat index of the periodic neighbour `offset` steps along `axis`.
    pub fn neighbor(&self, index: usize, axis: usize, offset: isize) -> usize {
        let d = self.dims();
        let mut idx = self.unflatten(index);
        let n = d[axis] as isize;
        idx[axis] = (idx[axis] as isize + offset).rem_euclid(n) as usize;
        self.flatten(idx)
    }

    /// Coordinates `(x⁰, x¹, x², x³)`; `x⁰ = 0` without a time axis.
    pub fn coords(&self, index: usize) -> [f64; 4] {
        let idx = self.unflatten(index);
        let t = self.time.map_or(0.0, |a| idx[0] as f64 * a.spacing());
        [
            t,
            idx[1] as f64 * self.space[0].spacing(),
            idx[2] as f64 * self.space[1].spacing(),
            idx[3] as f64 * self.space[2].spacing(),
        ]
    }

    pub fn spatial_cell_volume(&self) -> f64 {
        self.space.iter().map(Axis::spacing).product()
    }

    /// Spacetime cell volume; equals the spatial one without a time axis.
    pub fn cell_volume(&self) -> f64 {
        self.spatial_cell_volume() * self.time.map_or(1.0, |t| t.spacing())
    }

    pub fn spatial_volume(&self) -> f64 {
        self.space.iter().map(|a| a.length).product()
    }

    pub fn spatial_part(&self) -> GridSpec {
        GridSpec { time: None, space: self.space }
    }

    pub fn ensure_same(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

/// Values of type `T` at every point of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field<T> {
    pub grid: GridSpec,
    pub data: Vec<T>,
}

impl<T: Send + Sync> Field<T> {
    pub fn new(grid: GridSpec, data: Vec<T>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                data.len(),
                grid.len()
            )));
        }
        Ok(Field { grid, data })
    }

    /// Samples `f(x)` at every grid point.
    pub fn from_fn(grid: GridSpec, f: impl Fn([f64; 4]) -> T + Sync) -> Self {
        let data = (0..grid.len()).into_par_iter().map(|i| f(grid.coords(i))).collect();
        Field { grid, data }
    }

    pub fn constant(grid: GridSpec, value: T) -> Self
    where
        T: Clone,
    {
        Field { grid, data: vec![value; grid.len()] }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn map<U: Send>(&self, f: impl Fn(&T) -> U + Sync + Send) -> Field<U> {
        Field { grid: self.grid, data: self.data.par_iter().map(f).collect() }
    }

    pub fn try_map<U: Send>(&self, f: impl Fn(usize, &T) -> Result<U> + Sync) -> Result<Field<U>> {
        let data = self
            .data
            .par_iter()
            .enumerate()
            .map(|(i, v)| f(i, v))
            .collect::<Result<Vec<U>>>()?;
        Ok(Field { grid: self.grid, data })
    }

    pub fn zip_map<U: Send + Sync, V: Send>(
        &self,
        other: &Field<U>,
        f: impl Fn(&T, &U) -> V + Sync,
    ) -> Result<Field<V>> {
        self.grid.ensure_same(&other.grid)?;
        let data = self.data.par_iter().zip(other.data.par_iter()).map(|(a, b)| f(a, b)).collect();
        Ok(Field { grid: self.grid, data })
    }

    /// Values in time slice `t`.
    pub fn slice(&self, t: usize) -> &[T] {
        let n = self.grid.slice_len();
        &self.data[t * n..(t + 1) * n]
    }
}

pub type ScalarField = Field<f64>;
pub type CovectorField = Field<[f64; 3]>;
