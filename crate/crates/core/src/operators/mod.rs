//! The space-time operator `𝒜f(x,t) = χ(t) A_t f(x)`, its frequency pieces,
//! kernels, variation operators and empirical norm probes.

mod kernel;
mod probe;
mod variation_ops;

pub use kernel::{kernel_k, kernel_radial_mass};
pub use probe::{
    l2_space_time_norm, operator_norm_probe, probe_ratio, probe_times, trial_function, trial_inputs, ProbeConfig,
    ProbeNorm, ProbeReport,
    TrialKind,
};
pub use variation_ops::{
    dyadic_times, global_variation_operator, local_variation_masked, local_variation_operator, uniform_times,
    GlobalVariation, DEFAULT_TIME_SAMPLES,
};

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::signal::bessel::{sphere_profile, sphere_profile_derivative};
use crate::signal::cutoff::{beta_j, chi, chi_derivative, CutoffProfile};
use crate::signal::grid::{GridFunction, GridSpec};
use crate::signal::io::{read_f64, read_header, read_samples, read_u32, write_f64, write_header, write_samples, write_u32};
use crate::signal::norms::{mixed_norm_slices, trapezoid_weights};
use crate::signal::SpectralAverager;
use crate::{Error, Result};

pub const SPACE_TIME_MAGIC: &[u8; 4] = b"SPHT";

/// Samples of a function of `(t, x)`; stored time-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceTimeField {
    pub spec: GridSpec,
    pub tgrid: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl SpaceTimeField {
    pub fn new(spec: GridSpec, tgrid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if tgrid.len() < 2 || tgrid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::ShapeMismatch("need at least two increasing sample times".into()));
        }
        if values.len() != tgrid.len() * spec.len() {
            return Err(Error::ShapeMismatch("value count differs from |tgrid|·n^d".into()));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::ShapeMismatch("non-finite sample".into()));
        }
        Ok(Self { spec, tgrid, values })
    }

    pub fn slice(&self, i: usize) -> &[Complex64] {
        let n = self.spec.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn slice_function(&self, i: usize) -> GridFunction {
        GridFunction { spec: self.spec, values: self.slice(i).to_vec(), domain: crate::signal::Domain::Space }
    }

    /// The time path at grid point `flat`.
    pub fn path_at(&self, flat: usize) -> Vec<Complex64> {
        (0..self.tgrid.len()).map(|i| self.slice(i)[flat]).collect()
    }

    /// `‖F‖_{L^q_x(L^r_t)}`, trapezoid rule in time.
    pub fn mixed_norm(&self, q: f64, r: f64) -> Result<f64> {
        let slices: Vec<Vec<Complex64>> = (0..self.tgrid.len()).map(|i| self.slice(i).to_vec()).collect();
        mixed_norm_slices(&slices, &self.tgrid, self.spec.cell_volume(), q, r)
    }

    pub fn write(&self, w: &mut impl Write) -> Result<()> {
        write_header(w, SPACE_TIME_MAGIC, &self.spec)?;
        write_u32(w, self.tgrid.len() as u32)?;
        for &t in &self.tgrid {
            write_f64(w, t)?;
        }
        write_samples(w, &self.values)
    }

    pub fn read(r: &mut impl Read) -> Result<Self> {
        let spec = read_header(r, SPACE_TIME_MAGIC)?;
        let nt = read_u32(r)? as usize;
        let tgrid = (0..nt).map(|_| read_f64(r)).collect::<Result<Vec<_>>>()?;
        let values = read_samples(r, nt * spec.len())?;
        Self::new(spec, tgrid, values)
    }
}

fn check_tgrid(tgrid: &[f64]) -> Result<()> {
    let (lo, hi) = CutoffProfile::CHI_SUPPORT;
    if tgrid.iter().any(|&t| !(lo..=hi).contains(&t)) {
        return Err(Error::OutOfDomain(format!("sample times must lie in [{lo}, {hi}]")));
    }
    Ok(())
}

/// Space-time field whose slice at `t` is the multiplier `m(t, |ξ|)`
/// applied to `f`.
pub fn space_time_multiplier(f: &GridFunction, tgrid: &[f64], m: impl Fn(f64, f64) -> f64) -> Result<SpaceTimeField> {
    let avg = SpectralAverager::new(f)?;
    let mut values = Vec::with_capacity(tgrid.len() * f.len());
    for &t in tgrid {
        values.extend(avg.apply(|rho| m(t, rho))?.values);
    }
    SpaceTimeField::new(f.spec, tgrid.to_vec(), values)
}

/// `𝒜f(x,t) = χ(t) A_t f(x)`.
pub fn cal_a(f: &GridFunction, tgrid: &[f64]) -> Result<SpaceTimeField> {
    check_tgrid(tgrid)?;
    let d = f.spec.d;
    space_time_multiplier(f, tgrid, |t, rho| chi(t) * sphere_profile(d, t * rho))
}

/// `𝒜_j f = 𝒜 L_j f`.
pub fn cal_a_j(f: &GridFunction, j: u32, tgrid: &[f64]) -> Result<SpaceTimeField> {
    check_tgrid(tgrid)?;
    let d = f.spec.d;
    space_time_multiplier(f, tgrid, |t, rho| beta_j(j, rho) * chi(t) * sphere_profile(d, t * rho))
}

/// Multiplier of `∂_t 𝒜`: `χ'(t) m_d(tρ) + χ(t) ρ m_d'(tρ)`.
pub fn dt_multiplier(d: usize, t: f64, rho: f64) -> f64 {
    chi_derivative(t) * sphere_profile(d, t * rho) + chi(t) * rho * sphere_profile_derivative(d, t * rho)
}

/// `∂_t 𝒜 f`, spectrally.
pub fn dt_cal_a(f: &GridFunction, tgrid: &[f64]) -> Result<SpaceTimeField> {
    check_tgrid(tgrid)?;
    let d = f.spec.d;
    space_time_multiplier(f, tgrid, |t, rho| dt_multiplier(d, t, rho))
}

/// `∂_t 𝒜_j f`.
pub fn dt_cal_a_j(f: &GridFunction, j: u32, tgrid: &[f64]) -> Result<SpaceTimeField> {
    check_tgrid(tgrid)?;
    let d = f.spec.d;
    space_time_multiplier(f, tgrid, |t, rho| beta_j(j, rho) * dt_multiplier(d, t, rho))
}

/// Trapezoid weights, re-exported for callers integrating over `tgrid`.
pub fn time_weights(tgrid: &[f64]) -> Vec<f64> {
    trapezoid_weights(tgrid)
}
