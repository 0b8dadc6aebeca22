//! Dense tensors in three Euclidean dimensions and the Pauli-matrix algebra.
//!
//! Storage is 0-based; the `at` accessors take the 1-based indices used in
//! formulas and reject anything outside `1..=3`. Because the metric is
//! Euclidean, raising and lowering spatial indices is the identity.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used when validating antisymmetry of unit-scaled input.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;

pub type Vec3 = [f64; 3];

/// Alias kept for symmetry with [`Rank2`] and [`Rank3`].
pub type Rank1 = Vec3;

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm_sq(a: &Vec3) -> f64 {
    dot(a, a)
}

fn check_index(i: usize) -> Result<usize> {
    if (1..=3).contains(&i) {
        Ok(i - 1)
    } else {
        Err(Error::IndexOutOfRange { index: i })
    }
}

/// Levi-Civita symbol on 0-based indices.
#[inline]
pub fn eps(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Levi-Civita symbol on 1-based indices with `ε_123 = +1`.
pub fn levi_civita(a: usize, b: usize, c: usize) -> Result<i32> {
    let (a, b, c) = (check_index(a)?, check_index(b)?, check_index(c)?);
    Ok(eps(a, b, c) as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Rank2(pub [[f64; 3]; 3]);

impl Rank2 {
    pub const ZERO: Rank2 = Rank2([[0.0; 3]; 3]);

    pub fn identity() -> Self {
        Self::diag([1.0, 1.0, 1.0])
    }

    pub fn diag(d: Vec3) -> Self {
        let mut m = Self::ZERO;
        for i in 0..3 {
            m.0[i][i] = d[i];
        }
        m
    }

    /// `a ⊗ b`, i.e. `(a ⊗ b)_{αβ} = a_α b_β`.
    pub fn outer(a: &Vec3, b: &Vec3) -> Self {
        let mut m = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = a[i] * b[j];
            }
        }
        m
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    /// Bounds-checked access with 1-based indices.
    pub fn at(&self, i: usize, j: usize) -> Result<f64> {
        Ok(self.0[check_index(i)?][check_index(j)?])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn matmul(&self, other: &Rank2) -> Rank2 {
        Self::from_fn(|i, j| (0..3).map(|k| self.0[i][k] * other.0[k][j]).sum())
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        [dot(&self.0[0], v), dot(&self.0[1], v), dot(&self.0[2], v)]
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// Largest `|R_{αβ} + R_{βα}|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.0[i][j] + self.0[j][i]).abs());
            }
        }
        worst
    }

    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        self.antisymmetry_defect() <= tol
    }
}

impl Index<(usize, usize)> for Rank2 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Rank2 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Add for Rank2 {
    type Output = Rank2;
    fn add(self, rhs: Rank2) -> Rank2 {
        Rank2::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl AddAssign for Rank2 {
    fn add_assign(&mut self, rhs: Rank2) {
        *self = *self + rhs;
    }
}

impl Sub for Rank2 {
    type Output = Rank2;
    fn sub(self, rhs: Rank2) -> Rank2 {
        Rank2::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl Neg for Rank2 {
    type Output = Rank2;
    fn neg(self) -> Rank2 {
        self * -1.0
    }
}

impl Mul<f64> for Rank2 {
    type Output = Rank2;
    fn mul(self, s: f64) -> Rank2 {
        Rank2::from_fn(|i, j| self.0[i][j] * s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Rank3(pub [[[f64; 3]; 3]; 3]);

impl Rank3 {
    pub const ZERO: Rank3 = Rank3([[[0.0; 3]; 3]; 3]);

    pub fn from_fn(f: impl Fn(usize, usize, usize) -> f64) -> Self {
        let mut t = Self::ZERO;
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    t.0[a][b][c] = f(a, b, c);
                }
            }
        }
        t
    }

    /// The Levi-Civita tensor `ε_{αβγ}`.
    pub fn levi_civita() -> Self {
        Self::from_fn(eps)
    }

    pub fn at(&self, a: usize, b: usize, c: usize) -> Result<f64> {
        Ok(self.0[check_index(a)?][check_index(b)?][check_index(c)?])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().flatten().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// Largest deviation from antisymmetry in the two given 0-based slots.
    pub fn antisymmetry_defect(&self, s1: usize, s2: usize) -> f64 {
        assert!(s1 < 3 && s2 < 3 && s1 != s2, "slots must be distinct and < 3");
        let mut worst = 0.0_f64;
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let mut idx = [a, b, c];
                    let v = self.0[a][b][c];
                    idx.swap(s1, s2);
                    let w = self.0[idx[0]][idx[1]][idx[2]];
                    worst = worst.max((v + w).abs());
                }
            }
        }
        worst
    }

    pub fn is_totally_antisymmetric(&self, tol: f64) -> bool {
        self.antisymmetry_defect(0, 1) <= tol
            && self.antisymmetry_defect(1, 2) <= tol
            && self.antisymmetry_defect(0, 2) <= tol
    }
}

impl Index<(usize, usize, usize)> for Rank3 {
    type Output = f64;
    fn index(&self, (a, b, c): (usize, usize, usize)) -> &f64 {
        &self.0[a][b][c]
    }
}

impl IndexMut<(usize, usize, usize)> for Rank3 {
    fn index_mut(&mut self, (a, b, c): (usize, usize, usize)) -> &mut f64 {
        &mut self.0[a][b][c]
    }
}

impl Sub for Rank3 {
    type Output = Rank3;
    fn sub(self, rhs: Rank3) -> Rank3 {
        Rank3::from_fn(|a, b, c| self.0[a][b][c] - rhs.0[a][b][c])
    }
}

impl Add for Rank3 {
    type Output = Rank3;
    fn add(self, rhs: Rank3) -> Rank3 {
        Rank3::from_fn(|a, b, c| self.0[a][b][c] + rhs.0[a][b][c])
    }
}

impl Mul<f64> for Rank3 {
    type Output = Rank3;
    fn mul(self, s: f64) -> Rank3 {
        Rank3::from_fn(|a, b, c| self.0[a][b][c] * s)
    }
}

/// A totally antisymmetric covariant tensor of rank 0 to 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Form {
    Scalar(f64),
    Covector(Vec3),
    TwoForm(Rank2),
    ThreeForm(Rank3),
}

impl Form {
    pub fn rank(&self) -> usize {
        match self {
            Form::Scalar(_) => 0,
            Form::Covector(_) => 1,
            Form::TwoForm(_) => 2,
            Form::ThreeForm(_) => 3,
        }
    }
}

/// Hodge star `(*R)_{α_{r+1}..α_3} = (r!)^{-1} R^{α_1..α_r} ε_{α_1..α_3}`.
///
/// Rejects two- and three-forms whose antisymmetry defect exceeds
/// [`ANTISYMMETRY_TOL`]. In three Euclidean dimensions `**R = R`.
pub fn hodge_star(form: &Form) -> Result<Form> {
    Ok(match form {
        Form::Scalar(s) => Form::ThreeForm(Rank3::from_fn(|a, b, c| s * eps(a, b, c))),
        Form::Covector(v) => Form::TwoForm(Rank2::from_fn(|b, c| {
            (0..3).map(|a| v[a] * eps(a, b, c)).sum()
        })),
        Form::TwoForm(r) => {
            let defect = r.antisymmetry_defect();
            if defect > ANTISYMMETRY_TOL {
                return Err(Error::NotAntisymmetric(1, 2, defect));
            }
            let mut out = [0.0; 3];
            for (c, o) in out.iter_mut().enumerate() {
                for a in 0..3 {
                    for b in 0..3 {
                        *o += 0.5 * r.0[a][b] * eps(a, b, c);
                    }
                }
            }
            Form::Covector(out)
        }
        Form::ThreeForm(t) => {
            for (s1, s2) in [(0, 1), (1, 2), (0, 2)] {
                let defect = t.antisymmetry_defect(s1, s2);
                if defect > ANTISYMMETRY_TOL {
                    return Err(Error::NotAntisymmetric(s1 + 1, s2 + 1, defect));
                }
            }
            let mut s = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        s += t.0[a][b][c] * eps(a, b, c);
                    }
                }
            }
            Form::Scalar(s / 6.0)
        }
    })
}

/// Exterior product of two covectors, `(a∧b)_{αβ} = a_α b_β − a_β b_α`.
pub fn wedge(a: &Vec3, b: &Vec3) -> Rank2 {
    Rank2::from_fn(|i, j| a[i] * b[j] - a[j] * b[i])
}

/// `(P,Q) = P_{αβ} Q^{αβ}`.
pub fn inner_rank2(p: &Rank2, q: &Rank2) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += p.0[i][j] * q.0[i][j];
        }
    }
    s
}

pub fn norm_rank2(p: &Rank2) -> f64 {
    inner_rank2(p, p).sqrt()
}

/// Complex 2×2 matrix; the first index enumerates rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[C64::new(0.0, 0.0); 2]; 2]);

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Mat2([[one, zero], [zero, one]])
    }

    pub fn apply(&self, v: &[C64; 2]) -> [C64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    /// `ū^T M w`, the sesquilinear form used for every spinor bilinear.
    pub fn sandwich(&self, u: &[C64; 2], w: &[C64; 2]) -> C64 {
        let mw = self.apply(w);
        u[0].conj() * mw[0] + u[1].conj() * mw[1]
    }

    pub fn matmul(&self, o: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &o.0;
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }

    pub fn adjoint(&self) -> Mat2 {
        let a = &self.0;
        Mat2([[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]])
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        Mat2([
            [self.0[0][0] * s, self.0[0][1] * s],
            [self.0[1][0] * s, self.0[1][1] * s],
        ])
    }

    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - o.0[i][j]).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2([
            [self.0[0][0] + o.0[0][0], self.0[0][1] + o.0[0][1]],
            [self.0[1][0] + o.0[1][0], self.0[1][1] + o.0[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        self + o.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: f64) -> Mat2 {
        self.scale(C64::new(s, 0.0))
    }
}

/// Pauli matrices with lowered and raised spacetime index, plus the metric spinor.
///
/// `σ_0` is the identity and `σ^0 = −σ_0`; spatial matrices are unchanged by
/// raising.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliSet {
    pub lower: [Mat2; 4],
    pub upper: [Mat2; 4],
    pub metric: Mat2,
}

impl PauliSet {
    pub fn standard() -> Self {
        let o = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let lower = [
            Mat2::new(one, o, o, one),
            Mat2::new(o, one, one, o),
            Mat2::new(o, -i, i, o),
            Mat2::new(one, o, o, -one),
        ];
        let mut upper = lower;
        upper[0] = lower[0] * -1.0;
        PauliSet {
            lower,
            upper,
            metric: Mat2::new(o, -one, one, o),
        }
    }
}

/// Spatial Pauli matrices `σ_1, σ_2, σ_3`.
pub fn sigma() -> [Mat2; 3] {
    let p = PauliSet::standard();
    [p.lower[1], p.lower[2], p.lower[3]]
}

/// `σ_0`, the 2×2 identity.
pub fn sigma0() -> Mat2 {
    Mat2::identity()
}

/// `Σ_α c_α σ_α` for real coefficients.
pub fn sigma_dot(c: &Vec3) -> Mat2 {
    let s = sigma();
    s[0] * c[0] + s[1] * c[1] + s[2] * c[2]
}
