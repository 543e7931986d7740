//! Discrete Lebesgue norms with cell weights.
//!
//! Exponents are `f64` in `[1, ∞]`, with `f64::INFINITY` for `∞`.

use num_complex::Complex64;

use super::grid::GridFunction;
use crate::{Error, Result};

pub fn check_exponent(p: f64, name: &str) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        Err(Error::InvalidExponent(format!("{name} = {p} must lie in [1, ∞]")))
    } else {
        Ok(())
    }
}

/// Pairwise (cascade) summation; deterministic and accurate.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `(Σ w |a_i|^p)^{1/p}` (or `max |a_i|` for `p = ∞`).
pub fn weighted_lp(abs_values: &[f64], weight: f64, p: f64) -> Result<f64> {
    check_exponent(p, "p")?;
    if p.is_infinite() {
        return Ok(abs_values.iter().copied().fold(0.0, f64::max));
    }
    let peak = abs_values.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    // Scale by the peak to avoid overflow for large p.
    let powers: Vec<f64> = abs_values.iter().map(|&a| (a / peak).powf(p)).collect();
    Ok(peak * (weight * pairwise_sum(&powers)).powf(1.0 / p))
}

/// `‖f‖_p` with cell weight `h^d`.
pub fn norm(f: &GridFunction, p: f64) -> Result<f64> {
    weighted_lp(&f.abs_values(), f.spec.cell_volume(), p)
}

/// Weak quasinorm `sup_λ λ |{|a| > λ}|^{1/p}`, computed exactly for a step
/// function with cells of measure `weight`: after sorting decreasingly it is
/// `max_k a_(k) (k·weight)^{1/p}`.
pub fn weighted_weak_lp(abs_values: &[f64], weight: f64, p: f64) -> Result<f64> {
    check_exponent(p, "p")?;
    if p.is_infinite() {
        return Ok(abs_values.iter().copied().fold(0.0, f64::max));
    }
    let mut sorted = abs_values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(k, &a)| a * ((k + 1) as f64 * weight).powf(1.0 / p))
        .fold(0.0, f64::max))
}

pub fn weak_norm(f: &GridFunction, p: f64) -> Result<f64> {
    weighted_weak_lp(&f.abs_values(), f.spec.cell_volume(), p)
}

/// Trapezoid weights for a (possibly nonuniform) increasing time grid.
pub fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let n = times.len();
    let mut w = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let dt = times[i + 1] - times[i];
        w[i] += dt / 2.0;
        w[i + 1] += dt / 2.0;
    }
    w
}

/// Streaming accumulator for `‖F‖_{L^q_x(L^r_t)}`: slices are added one
/// time sample at a time so no space-time array needs to be stored.
#[derive(Clone, Debug)]
pub struct MixedNormAccumulator {
    r: f64,
    acc: Vec<f64>,
}

impl MixedNormAccumulator {
    pub fn new(len: usize, r: f64) -> Result<Self> {
        check_exponent(r, "r")?;
        Ok(Self { r, acc: vec![0.0; len] })
    }

    /// Adds `weight · |slice|^r` (or a running max for `r = ∞`).
    pub fn add_slice(&mut self, slice: &[Complex64], weight: f64) {
        assert_eq!(slice.len(), self.acc.len());
        if self.r.is_infinite() {
            for (a, v) in self.acc.iter_mut().zip(slice) {
                *a = a.max(v.norm());
            }
        } else if self.r == 2.0 {
            for (a, v) in self.acc.iter_mut().zip(slice) {
                *a += weight * v.norm_sqr();
            }
        } else {
            for (a, v) in self.acc.iter_mut().zip(slice) {
                *a += weight * v.norm().powf(self.r);
            }
        }
    }

    /// Per-point `‖F(x, ·)‖_{L^r_t}`.
    pub fn time_norms(&self) -> Vec<f64> {
        if self.r.is_infinite() {
            self.acc.clone()
        } else {
            self.acc.iter().map(|a| a.powf(1.0 / self.r)).collect()
        }
    }

    pub fn finish(&self, cell_volume: f64, q: f64) -> Result<f64> {
        weighted_lp(&self.time_norms(), cell_volume, q)
    }
}

/// `L^q_x(L^r_t)` of time slices on a shared grid, trapezoid in `t`.
pub fn mixed_norm_slices(slices: &[Vec<Complex64>], times: &[f64], cell_volume: f64, q: f64, r: f64) -> Result<f64> {
    check_exponent(q, "q")?;
    if slices.len() != times.len() || slices.is_empty() {
        return Err(Error::ShapeMismatch("one slice per time sample required".into()));
    }
    let w = trapezoid_weights(times);
    let mut acc = MixedNormAccumulator::new(slices[0].len(), r)?;
    for (s, &wt) in slices.iter().zip(&w) {
        acc.add_slice(s, wt);
    }
    acc.finish(cell_volume, q)
}
