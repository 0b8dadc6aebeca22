//! JSON field files.
//!
//! ```json
//! {
//!   "grid": {"n": [nt, n1, n2, n3], "L": [Lt, L1, L2, L3]},
//!   "kind": "spinor",
//!   "data": [...]
//! }
//! ```
//!
//! `n` and `L` have three entries for spatial grids and four (time first) for
//! spacetime grids. `data` is flat in `(t, x¹, x², x³)` row-major order with the
//! component index innermost: spinors as `[[re, im], [re, im]]` per point,
//! coframes as 9 reals (row `j` is `ϑ^j`), rank-2 tensors as 9 reals, covectors
//! as 3 reals and scalars as 1 real. Coframe files may carry a `density` array
//! of one real per point. Numbers are written in shortest round-trip form, so
//! reading a written file reproduces every value bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coframe_spinor::{Coframe, Spinor};
use crate::error::{Error, Result};
use crate::grid::{Axis, Field, GridSpec};
use crate::tensor_algebra::Rank2;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub enum FieldData {
    Spinor(Field<Spinor>),
    Coframe { frames: Field<Coframe>, density: Option<Field<f64>> },
    Rank2(Field<Rank2>),
    Covector(Field<[f64; 3]>),
    Scalar(Field<f64>),
}

impl FieldData {
    pub fn kind(&self) -> &'static str {
        match self {
            FieldData::Spinor(_) => "spinor",
            FieldData::Coframe { .. } => "coframe",
            FieldData::Rank2(_) => "rank2",
            FieldData::Covector(_) => "covector",
            FieldData::Scalar(_) => "scalar",
        }
    }

    pub fn grid(&self) -> GridSpec {
        match self {
            FieldData::Spinor(f) => f.grid,
            FieldData::Coframe { frames, .. } => frames.grid,
            FieldData::Rank2(f) => f.grid,
            FieldData::Covector(f) => f.grid,
            FieldData::Scalar(f) => f.grid,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridJson {
    n: Vec<usize>,
    #[serde(rename = "L")]
    l: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileJson {
    grid: GridJson,
    kind: String,
    data: Vec<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    density: Option<Vec<f64>>,
}

fn grid_to_json(g: &GridSpec) -> GridJson {
    let mut n = Vec::new();
    let mut l = Vec::new();
    if let Some(t) = g.time {
        n.push(t.n);
        l.push(t.length);
    }
    for a in g.space {
        n.push(a.n);
        l.push(a.length);
    }
    GridJson { n, l }
}

fn grid_from_json(g: &GridJson) -> Result<GridSpec> {
    if g.n.len() != g.l.len() {
        return Err(Error::FieldFile(format!("grid has {} sizes but {} lengths", g.n.len(), g.l.len())));
    }
    match g.n.len() {
        3 => GridSpec::spatial([g.n[0], g.n[1], g.n[2]], [g.l[0], g.l[1], g.l[2]]),
        4 => GridSpec::spacetime(Axis::new(g.n[0], g.l[0]), [g.n[1], g.n[2], g.n[3]], [g.l[1], g.l[2], g.l[3]]),
        k => Err(Error::FieldFile(format!("grid must have 3 or 4 axes, got {k}"))),
    }
}

fn finite(x: f64) -> Result<serde_json::Value> {
    serde_json::Number::from_f64(x)
        .map(serde_json::Value::Number)
        .ok_or_else(|| Error::FieldFile(format!("non-finite value {x}")))
}

fn pair(z: C64) -> Result<serde_json::Value> {
    Ok(serde_json::Value::Array(vec![finite(z.re)?, finite(z.im)?]))
}

fn reals(values: impl IntoIterator<Item = f64>) -> Result<Vec<serde_json::Value>> {
    values.into_iter().map(finite).collect()
}

pub fn to_json_string(field: &FieldData) -> Result<String> {
    let grid = grid_to_json(&field.grid());
    let mut density = None;
    let data = match field {
        FieldData::Spinor(f) => f
            .data
            .iter()
            .flat_map(|s| [s.0[0], s.0[1]])
            .map(pair)
            .collect::<Result<Vec<_>>>()?,
        FieldData::Coframe { frames, density: d } => {
            if let Some(d) = d {
                frames.grid.ensure_same(&d.grid)?;
                reals(d.data.iter().copied())?;
                density = Some(d.data.clone());
            }
            reals(frames.data.iter().flat_map(|c| c.0 .0.into_iter().flatten()))?
        }
        FieldData::Rank2(f) => reals(f.data.iter().flat_map(|m| m.0.into_iter().flatten()))?,
        FieldData::Covector(f) => reals(f.data.iter().flat_map(|v| v.iter().copied()))?,
        FieldData::Scalar(f) => reals(f.data.iter().copied())?,
    };
    let file = FileJson { grid, kind: field.kind().to_string(), data, density };
    serde_json::to_string(&file).map_err(|e| Error::FieldFile(e.to_string()))
}

fn as_f64(v: &serde_json::Value, at: usize) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::FieldFile(format!("data[{at}] is not a number")))
}

fn as_pair(v: &serde_json::Value, at: usize) -> Result<C64> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => Ok(C64::new(as_f64(re, at)?, as_f64(im, at)?)),
        _ => Err(Error::FieldFile(format!("data[{at}] is not a [re, im] pair"))),
    }
}

fn expect_len(data: &[serde_json::Value], want: usize, kind: &str) -> Result<()> {
    if data.len() == want {
        Ok(())
    } else {
        Err(Error::FieldFile(format!("{kind} data has {} entries, expected {want}", data.len())))
    }
}

fn read_reals(data: &[serde_json::Value]) -> Result<Vec<f64>> {
    data.iter().enumerate().map(|(i, v)| as_f64(v, i)).collect()
}

fn nine(chunk: &[f64]) -> Rank2 {
    Rank2::from_fn(|a, b| chunk[3 * a + b])
}

pub fn from_json_str(text: &str) -> Result<FieldData> {
    let file: FileJson = serde_json::from_str(text).map_err(|e| Error::FieldFile(e.to_string()))?;
    let grid = grid_from_json(&file.grid)?;
    let n = grid.len();
    if file.density.is_some() && file.kind != "coframe" {
        return Err(Error::FieldFile("only coframe files carry a density".into()));
    }
    let out = match file.kind.as_str() {
        "spinor" => {
            expect_len(&file.data, 2 * n, "spinor")?;
            let z: Vec<C64> = file.data.iter().enumerate().map(|(i, v)| as_pair(v, i)).collect::<Result<_>>()?;
            FieldData::Spinor(Field::new(grid, z.chunks(2).map(|c| Spinor([c[0], c[1]])).collect())?)
        }
        "coframe" => {
            expect_len(&file.data, 9 * n, "coframe")?;
            let r = read_reals(&file.data)?;
            let frames: Vec<Coframe> = r.chunks(9).map(|c| Coframe(nine(c))).collect();
            for (i, f) in frames.iter().enumerate() {
                f.validate(crate::coframe_spinor::COFRAME_TOL)
                    .map_err(|e| Error::FieldFile(format!("point {i}: {e}")))?;
            }
            let density = match file.density {
                Some(d) => {
                    if let Some(i) = d.iter().position(|r| !(*r > 0.0)) {
                        return Err(Error::FieldFile(format!("density[{i}] = {} is not positive", d[i])));
                    }
                    Some(Field::new(grid, d)?)
                }
                None => None,
            };
            FieldData::Coframe { frames: Field::new(grid, frames)?, density }
        }
        "rank2" => {
            expect_len(&file.data, 9 * n, "rank2")?;
            let r = read_reals(&file.data)?;
            FieldData::Rank2(Field::new(grid, r.chunks(9).map(nine).collect())?)
        }
        "covector" => {
            expect_len(&file.data, 3 * n, "covector")?;
            let r = read_reals(&file.data)?;
            FieldData::Covector(Field::new(grid, r.chunks(3).map(|c| [c[0], c[1], c[2]]).collect())?)
        }
        "scalar" => {
            expect_len(&file.data, n, "scalar")?;
            FieldData::Scalar(Field::new(grid, read_reals(&file.data)?)?)
        }
        other => return Err(Error::FieldFile(format!("unknown field kind {other:?}"))),
    };
    Ok(out)
}

pub fn read_field(path: &Path) -> Result<FieldData> {
    let text = fs::read_to_string(path).map_err(|e| Error::FieldFile(format!("{}: {e}", path.display())))?;
    from_json_str(&text)
}

pub fn write_field(path: &Path, field: &FieldData) -> Result<()> {
    let text = to_json_string(field)?;
    fs::write(path, text).map_err(|e| Error::FieldFile(format!("{}: {e}", path.display())))
}
