//! Flat `key = value` run configuration.
//!
//! A config file holds one `key = value` pair per line; `#` starts a comment.
//! Entries given on the command line replace file entries with the same key.
//! Unknown keys, duplicate keys and malformed lines are rejected with the
//! offending line.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rotelast::{Axis, DerivativeMode, Differentiator, ElasticModuli, GridSpec, Spinor};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const KEYS: &[(&str, &str)] = &[
    ("c_ax", "axial modulus"),
    ("c_vec", "vector modulus"),
    ("c_ten", "tensor modulus"),
    ("c_kin", "kinetic modulus"),
    ("derivative", "central | spectral | exact"),
    ("n", "spatial points per axis, one value or three"),
    ("L", "spatial box length, one value or three"),
    ("n_t", "time points"),
    ("L_t", "time period"),
    ("p0", "frequency"),
    ("p", "spatial momentum p1,p2,p3"),
    ("zeta", "constant spinor re1,im1,re2,im2"),
    ("seed", "random seed"),
    ("count", "number of random samples"),
    ("samples", "sampled momenta per solution family"),
    ("lattice", "momentum lattice points per axis (odd)"),
    ("tol", "pass threshold"),
    ("fd_step", "finite-difference step"),
    ("mask_fraction", "density mask as a fraction of max density"),
    ("sign", "plus | minus"),
    ("waves", "dx,dy,dz,re,im per wave, waves separated by ';'"),
    ("input", "input field file"),
    ("output", "report file (stdout if absent)"),
    ("field_output", "output field file"),
    ("csv_output", "CSV table output"),
    ("sweep_param", "c_ax | c_vec | c_ten | c_kin"),
    ("sweep_values", "start,stop,count"),
];

fn known(key: &str) -> bool {
    KEYS.iter().any(|(k, _)| *k == key)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    entries: BTreeMap<String, String>,
}

fn split_entry(text: &str) -> Option<(String, String)> {
    let (k, v) = text.split_once('=')?;
    let (k, v) = (k.trim(), v.trim());
    if k.is_empty() || v.is_empty() {
        return None;
    }
    Some((k.to_string(), v.to_string()))
}

impl RunConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = format!("{origin}:{}", i + 1);
            let (k, v) = split_entry(line)
                .ok_or_else(|| CliError::Config(format!("{at}: expected `key = value`, got {line:?}")))?;
            if !known(&k) {
                return Err(CliError::Config(format!("{at}: unknown key {k:?}")));
            }
            if entries.insert(k.clone(), v).is_some() {
                return Err(CliError::Config(format!("{at}: duplicate key {k:?}")));
            }
        }
        Ok(RunConfig { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Applies a `key=value` override from the command line.
    pub fn set(&mut self, entry: &str) -> Result<(), CliError> {
        let (k, v) =
            split_entry(entry).ok_or_else(|| CliError::Config(format!("--set {entry:?}: expected key=value")))?;
        if !known(&k) {
            return Err(CliError::Config(format!("--set {entry:?}: unknown key {k:?}")));
        }
        self.entries.insert(k, v);
        Ok(())
    }

    pub fn insert(&mut self, key: &str, value: String) {
        debug_assert!(known(key));
        self.entries.insert(key.to_string(), value);
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// SHA-256 of the sorted `key=value` lines.
    pub fn sha256(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in &self.entries {
            h.update(format!("{k}={v}\n").as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn bad(key: &str, value: &str, what: &str) -> CliError {
        CliError::Config(format!("key {key:?}: expected {what}, got {value:?}"))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => match v.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(Self::bad(key, v, "a finite number")),
            },
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Self::bad(key, v, "a nonnegative integer")),
        }
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Self::bad(key, v, "a nonnegative integer")),
        }
    }

    pub fn list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        let Some(v) = self.raw(key) else { return Ok(None) };
        v.split(',')
            .map(|s| s.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
            .collect::<Option<Vec<_>>>()
            .map(Some)
            .ok_or_else(|| Self::bad(key, v, "a comma-separated list of numbers"))
    }

    fn fixed<const N: usize>(&self, key: &str, default: [f64; N]) -> Result<[f64; N], CliError> {
        match self.list(key)? {
            None => Ok(default),
            Some(v) => v.try_into().map_err(|_| Self::bad(key, self.raw(key).unwrap_or(""), &format!("{N} numbers"))),
        }
    }

    /// One value for all axes or one per axis.
    fn per_axis(&self, key: &str, default: f64) -> Result<[f64; 3], CliError> {
        match self.list(key)?.as_deref() {
            None => Ok([default; 3]),
            Some([x]) => Ok([*x; 3]),
            Some([a, b, c]) => Ok([*a, *b, *c]),
            Some(_) => Err(Self::bad(key, self.raw(key).unwrap_or(""), "one or three numbers")),
        }
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.raw(key).map(PathBuf::from)
    }

    pub fn required_path(&self, key: &str) -> Result<PathBuf, CliError> {
        self.path(key).ok_or_else(|| CliError::Config(format!("key {key:?} is required for this command")))
    }

    /// Moduli from `c_ax`, `c_vec`, `c_ten`, `c_kin`, each defaulting to 1.
    pub fn moduli(&self) -> Result<ElasticModuli, CliError> {
        Ok(ElasticModuli::new(
            self.f64_or("c_ax", 1.0)?,
            self.f64_or("c_vec", 1.0)?,
            self.f64_or("c_ten", 1.0)?,
            self.f64_or("c_kin", 1.0)?,
        )?)
    }

    pub fn has_moduli(&self) -> bool {
        ["c_ax", "c_vec", "c_ten", "c_kin"].iter().any(|k| self.raw(k).is_some())
    }

    pub fn p0(&self, default: f64) -> Result<f64, CliError> {
        self.f64_or("p0", default)
    }

    pub fn momentum(&self) -> Result<[f64; 3], CliError> {
        self.fixed("p", [0.0, 0.0, 1.0])
    }

    pub fn zeta(&self) -> Result<Spinor, CliError> {
        let [a, b, c, d] = self.fixed("zeta", [1.0, 0.0, 0.0, 0.0])?;
        Ok(Spinor::from_reals(a, b, c, d))
    }

    /// Grid from `n`, `L`, and, when `n_t > 0`, `n_t` and `L_t`.
    pub fn grid(&self, n: usize, length: f64, n_t: usize, length_t: f64) -> Result<GridSpec, CliError> {
        let ns = self.per_axis("n", n as f64)?;
        if ns.iter().any(|x| x.fract() != 0.0 || *x < 0.0) {
            return Err(Self::bad("n", self.raw("n").unwrap_or(""), "integer sizes"));
        }
        let ns = ns.map(|x| x as usize);
        let ls = self.per_axis("L", length)?;
        let nt = self.usize_or("n_t", n_t)?;
        let grid = if nt == 0 {
            GridSpec::spatial(ns, ls)?
        } else {
            GridSpec::spacetime(Axis::new(nt, self.f64_or("L_t", length_t)?), ns, ls)?
        };
        Ok(grid)
    }

    pub fn derivative(&self, default: &str, p: Option<[f64; 4]>) -> Result<Differentiator, CliError> {
        let name = self.raw("derivative").unwrap_or(default);
        match name {
            "central" => Ok(Differentiator::central()),
            "spectral" => Ok(Differentiator::spectral()),
            "exact" => {
                let p = match p {
                    Some(p) => p,
                    None => {
                        let [p1, p2, p3] = self.momentum()?;
                        [self.p0(1.0)?, p1, p2, p3]
                    }
                };
                Ok(Differentiator::new(DerivativeMode::PlaneWaveExact { p }))
            }
            other => Err(Self::bad("derivative", other, "central, spectral or exact")),
        }
    }
}
