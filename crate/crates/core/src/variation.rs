//! r-variation of sampled paths, discrete Besov norms and the long/short
//! split of the global variation.
//!
//! Exponents are `f64` in `[1, ∞]` with `f64::INFINITY` standing for `∞`.
//! Increments of complex paths are measured in modulus.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::signal::cutoff::beta_j;
use crate::signal::norms::check_exponent;
use crate::{Error, Result};

/// Largest path accepted by [`variation_bruteforce`].
pub const BRUTEFORCE_MAX_LEN: usize = 16;

/// Samples `(t_i, a_i)` with strictly increasing times.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledPath {
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl SampledPath {
    pub fn new(times: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if times.is_empty() || times.len() != values.len() {
            return Err(Error::InvalidPath(format!(
                "{} times and {} values; need equal, non-zero lengths",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidPath("times must be strictly increasing".into()));
        }
        if times.iter().any(|t| !t.is_finite()) || values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidPath("non-finite sample".into()));
        }
        Ok(Self { times, values })
    }

    /// Real values at times `0, 1, 2, …`.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(
            (0..values.len()).map(|i| i as f64).collect(),
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Linear interpolation at `t` (clamped to the sampled interval).
    pub fn interpolate(&self, t: f64) -> Complex64 {
        let n = self.len();
        if n == 1 || t <= self.times[0] {
            return self.values[0];
        }
        if t >= self.times[n - 1] {
            return self.values[n - 1];
        }
        let k = self.times.partition_point(|&s| s <= t) - 1;
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let s = (t - t0) / (t1 - t0);
        self.values[k] * (1.0 - s) + self.values[k + 1] * s
    }
}

/// `|b − a|^r`; shared by every routine that must agree bit-for-bit.
#[inline]
fn increment_power(a: Complex64, b: Complex64, r: f64) -> f64 {
    let z = b - a;
    if r == 2.0 {
        z.norm_sqr()
    } else if r == 1.0 {
        z.norm()
    } else {
        z.norm().powf(r)
    }
}

#[inline]
fn finish(total: f64, r: f64) -> f64 {
    if r == 1.0 {
        total
    } else if r == 2.0 {
        total.sqrt()
    } else {
        total.powf(1.0 / r)
    }
}

/// Exact r-variation seminorm of a sequence (the time stamps only fix the
/// order).
///
/// `r = 1`: sum of consecutive increments; `r = ∞`: largest pairwise
/// difference; otherwise the `O(N²)` dynamic program
/// `best[j] = max_{i<j} (best[i] + |a_j − a_i|^r)`.
pub fn variation_of_values(values: &[Complex64], r: f64) -> Result<f64> {
    check_exponent(r, "r")?;
    Ok(variation_unchecked(values, r, &mut Vec::new()))
}

/// Same as [`variation_of_values`] without the exponent check, reusing a
/// scratch buffer; for hot loops.
pub fn variation_unchecked(values: &[Complex64], r: f64, best: &mut Vec<f64>) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    if r.is_infinite() {
        let mut m = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                m = m.max((values[j] - values[i]).norm());
            }
        }
        return m;
    }
    if r == 1.0 {
        return values.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, |acc, x| acc + x);
    }
    best.clear();
    best.resize(n, 0.0);
    for j in 1..n {
        let aj = values[j];
        let mut m = 0.0f64;
        for i in 0..j {
            let cand = best[i] + increment_power(values[i], aj, r);
            if cand > m {
                m = cand;
            }
        }
        best[j] = m;
    }
    finish(best.iter().copied().fold(0.0, f64::max), r)
}

pub fn variation_exact(path: &SampledPath, r: f64) -> Result<f64> {
    variation_of_values(&path.values, r)
}

/// The variation norm `‖a‖_∞ + |a|_{V_r}`.
pub fn variation_norm(path: &SampledPath, r: f64) -> Result<f64> {
    Ok(path.sup_norm() + variation_exact(path, r)?)
}

/// Enumerates every subsequence; the reference for [`variation_exact`].
pub fn variation_bruteforce(path: &SampledPath, r: f64) -> Result<f64> {
    check_exponent(r, "r")?;
    let n = path.len();
    if n > BRUTEFORCE_MAX_LEN {
        return Err(Error::TooLarge(format!("{n} samples; brute force handles at most {BRUTEFORCE_MAX_LEN}")));
    }
    let v = &path.values;
    let mut best = 0.0f64;
    for mask in 1u32..(1u32 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let mut prev: Option<usize> = None;
        let mut acc = 0.0f64;
        for i in 0..n {
            if mask & (1 << i) == 0 {
                continue;
            }
            if let Some(p) = prev {
                if r.is_infinite() {
                    acc = acc.max((v[i] - v[p]).norm());
                } else {
                    acc += increment_power(v[p], v[i], r);
                }
            }
            prev = Some(i);
        }
        best = best.max(acc);
    }
    Ok(if r.is_infinite() { best } else { finish(best, r) })
}

/// Which Besov norm [`besov_norm`] computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesovFlavor {
    /// `B^{1/r}_{r,1}`: `Σ_l 2^{l/r} ‖Λ_l u‖_r`.
    Sum,
    /// `B^{1/r}_{r,∞}`: `sup_l 2^{l/r} ‖Λ_l u‖_r`.
    Sup,
}

/// Number of uniform samples a path is resampled to for [`besov_norm`].
pub const BESOV_SAMPLES: usize = 1 << 10;

/// Per-level norms `‖Λ_l u‖_r`, `l = 0, 1, …`, of the path resampled
/// linearly to [`BESOV_SAMPLES`] points on its time interval.
///
/// The resampled path is treated as periodic on its interval; `Λ_l` is the
/// multiplier `β_l(|τ|)` in angular frequency `τ`.
pub fn besov_levels(path: &SampledPath, r: f64) -> Result<Vec<f64>> {
    check_exponent(r, "r")?;
    let n = BESOV_SAMPLES;
    let (t0, t1) = (path.times[0], path.times[path.len() - 1]);
    if t1 <= t0 {
        return Ok(vec![]);
    }
    let dt = (t1 - t0) / n as f64;
    let samples: Vec<Complex64> = (0..n).map(|i| path.interpolate(t0 + i as f64 * dt)).collect();
    let mut spectrum = samples;
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut spectrum);
    let inverse = planner.plan_fft_inverse(n);
    let period = n as f64 * dt;
    let tau = |k: usize| {
        let kk = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
        2.0 * std::f64::consts::PI * kk.abs() / period
    };
    let tau_max = tau(n / 2);
    let mut levels = Vec::new();
    let mut l = 0u32;
    while l == 0 || 2f64.powi(l as i32 - 2) <= tau_max {
        let mut piece: Vec<Complex64> = spectrum.iter().enumerate().map(|(k, &v)| v * beta_j(l, tau(k))).collect();
        inverse.process(&mut piece);
        let abs: Vec<f64> = piece.iter().map(|v| v.norm() / n as f64).collect();
        levels.push(crate::signal::norms::weighted_lp(&abs, dt, r)?);
        l += 1;
    }
    Ok(levels)
}

/// Discrete `B^{1/r}_{r,1}` or `B^{1/r}_{r,∞}` norm of a path.
pub fn besov_norm(path: &SampledPath, r: f64, flavor: BesovFlavor) -> Result<f64> {
    let levels = besov_levels(path, r)?;
    let weighted = levels.iter().enumerate().map(|(l, &v)| {
        let w = if r.is_infinite() { 1.0 } else { 2f64.powf(l as f64 / r) };
        w * v
    });
    Ok(match flavor {
        BesovFlavor::Sum => weighted.sum(),
        BesovFlavor::Sup => weighted.fold(0.0, f64::max),
    })
}

/// Long (dyadic endpoint) and short (within-interval) variation.
///
/// `endpoints` are the values at the dyadic points `2^k` (one more than the
/// number of intervals is typical, but any sequence is accepted); `paths`
/// holds one path per dyadic interval.
pub fn long_short_split(paths: &[SampledPath], endpoints: &[Complex64], r: f64) -> Result<(f64, f64)> {
    let long = variation_of_values(endpoints, r)?;
    let per: Vec<f64> = paths.iter().map(|p| variation_exact(p, r)).collect::<Result<_>>()?;
    let short = if r.is_infinite() {
        per.iter().copied().fold(0.0, f64::max)
    } else {
        per.iter().map(|v| v.powf(r)).sum::<f64>().powf(1.0 / r)
    };
    Ok((long, short))
}

/// Constant `c_r` in `V_r ≤ long + c_r · short`.
///
/// A chain of sample points is split at the dyadic endpoints; increments
/// straddling an endpoint are bounded by a long increment plus two short
/// ones, which costs `2^{1−1/r}` on the short part (sharp for `r = 2`).
pub fn long_short_constant(r: f64) -> f64 {
    if r.is_infinite() {
        2.0
    } else {
        2f64.powf(1.0 - 1.0 / r)
    }
}
