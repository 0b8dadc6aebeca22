#![allow(dead_code)]

use std::f64::consts::PI;

use rotelast::coframe_spinor::{spinor_to_coframe, Coframe};
use rotelast::grid::{Field, GridSpec};
use rotelast::{Rank2, Spinor};

/// ϑ¹ = (cos kx³, sin kx³, 0), ϑ² = (−sin kx³, cos kx³, 0), ϑ³ = e³ with k = 2π/L₃.
pub fn screw_field(grid: GridSpec) -> (Field<Coframe>, f64) {
    let k = 2.0 * PI / grid.space[2].length;
    let f = Field::from_fn(grid, |x| {
        let (s, c) = (k * x[3]).sin_cos();
        Coframe(Rank2([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]]))
    });
    (f, k)
}

pub fn coframes_of(field: &Field<Spinor>) -> Field<Coframe> {
    field.map(|s| spinor_to_coframe(s).unwrap())
}

pub fn max_diff_rank2(a: &Field<Rank2>, b: &Field<Rank2>) -> f64 {
    a.data.iter().zip(&b.data).map(|(x, y)| (*x - *y).max_abs()).fold(0.0, f64::max)
}

pub fn max_diff_vec3(a: &Field<[f64; 3]>, b: &Field<[f64; 3]>) -> f64 {
    a.data
        .iter()
        .zip(&b.data)
        .flat_map(|(x, y)| (0..3).map(move |i| (x[i] - y[i]).abs()))
        .fold(0.0, f64::max)
}

pub fn max_diff_scalar(a: &Field<f64>, b: &Field<f64>) -> f64 {
    a.data.iter().zip(&b.data).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
