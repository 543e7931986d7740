//! Numerical laboratory for r-variation of spherical means.
//!
//! The crate is organised by subsystem:
//!
//! * [`geometry`]: exact type-set polygons in the `(1/p, 1/q)` square and
//!   classification of exponent pairs.
//! * [`signal`]: periodic grids, unitary FFTs, the sphere multiplier,
//!   Littlewood–Paley cutoffs, spherical averages and discrete norms.
//! * [`variation`]: exact r-variation of sampled paths, discrete Besov
//!   norms and the long/short split.
//! * [`operators`]: the space-time operator `χ(t) A_t f`, its frequency
//!   pieces, kernels, variation operators and norm probes.
//! * [`counterexamples`]: the lower-bound test functions and a scaling
//!   harness fitting their growth exponents.
//! * [`sparse`]: sparse families of cubes, the sparse bilinear form and a
//!   stopping-time construction.

pub mod counterexamples;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod operators;
pub mod quadrature;
pub mod serde_exponent;
pub mod signal;
pub mod sparse;
pub mod variation;

pub use error::{Error, Result};
pub use num_complex::Complex64;
