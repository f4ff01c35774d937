//! Compile multivariate polynomials into two-layer ReLU networks.
//!
//! The pipeline splits a polynomial into harmonic pieces, inverts the ReLU
//! operator on each piece, builds an integral representation over
//! `(direction, bias)` pairs, and samples a finite network from it. Error
//! bounds and independent numerical oracles live alongside.
//!
//! The algebraic layers are generic over [`Scalar`] (`f32` or `f64`). The
//! Monte Carlo layers work in `f64`.

pub mod bounds;
pub mod error;
pub mod funkhecke;
pub mod gen;
pub mod heatlift;
pub mod io;
pub mod polycore;
pub mod repr;
pub mod rng;
pub mod sampler;
pub mod scalar;
pub mod special;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use polycore::{CompiledPoly, HomogeneousComponent, MultiIndex, Polynomial};
pub use scalar::Scalar;
pub use spectral::{RadialKind, RadialLaw};

/// Double-precision polynomial.
pub type Poly = Polynomial<f64>;
/// Single-precision polynomial.
pub type Poly32 = Polynomial<f32>;
/// Double-precision direction law.
pub type Law = RadialLaw<f64>;
