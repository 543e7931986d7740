//! Grids, transforms, the sphere multiplier, cutoffs, averages and norms.

pub mod average;
pub mod bessel;
pub mod cutoff;
pub mod fft;
pub mod grid;
pub mod io;
pub mod norms;

pub use average::{
    lp_piece, spherical_average_quadrature, spherical_average_quadrature_grid, spherical_average_quadrature_with,
    spherical_average_spectral, FnEval, PointEval, SpectralAverager, SphereRule,
};
pub use bessel::{bessel_j, sphere_multiplier, sphere_profile, sphere_profile_derivative};
pub use cutoff::{beta0, beta_j, chi, chi_derivative, CutoffKind, CutoffProfile};
pub use fft::{apply_radial_multiplier, dft, idft};
pub use grid::{Domain, GridFunction, GridSpec, RadialIndex, MIN_HALF_EXTENT};
pub use norms::{mixed_norm_slices, norm, weak_norm, MixedNormAccumulator};
