//! Rotational elasticity on a periodic box.
//!
//! The dynamical variables are a coframe (a field of `SO(3)` matrices) together
//! with a positive density, or equivalently a nonvanishing two-component complex
//! spinor field. The crate provides:
//!
//! * exact small tensor and Pauli-matrix primitives ([`tensor_algebra`]),
//! * the spinor to coframe/density map and its inverse ([`coframe_spinor`]),
//! * torsion based deformation measures on sampled fields ([`deformation`]),
//! * the same measures written directly through the spinor ([`spinor_repr`]),
//! * kinetic/potential energy, Lagrangian density and action ([`energetics`]),
//! * closed-form plane waves and their dispersion classification ([`planewave`]),
//! * the Euler–Lagrange operator and its independent oracles ([`variational`]),
//! * the Weyl operator and checks for purely axial materials ([`weyl`]).
//!
//! Index convention: components carry indices `1..=3` in the public
//! bounds-checked accessors and `0..3` in the underlying arrays. Spacetime axis
//! `0` is time and `1..=3` are the spatial axes.

pub mod coframe_spinor;
pub mod deformation;
pub mod derivative;
pub mod energetics;
pub mod error;
pub mod field_io;
pub mod grid;
pub mod planewave;
pub mod reduce;
pub mod sampling;
pub mod spinor_repr;
pub mod tensor_algebra;
pub mod variational;
pub mod weyl;

pub use num_complex::Complex64 as C64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use coframe_spinor::{Coframe, Density, Spinor, DEFAULT_RHO_MIN};
pub use derivative::{DerivativeMode, Differentiator};
pub use energetics::ElasticModuli;
pub use error::{Error, Result};
pub use grid::{Axis, Field, GridSpec};
pub use planewave::{FourMomentum, PlaneWave, WaveSpeeds};
pub use tensor_algebra::{Rank2, Rank3, Vec3};
