//! Local (`t ∈ [1,2]`) and global (dyadic ranges) variation operators.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::signal::bessel::sphere_profile;
use crate::signal::grid::{Domain, GridFunction};
use crate::signal::norms::check_exponent;
use crate::signal::SpectralAverager;
use crate::variation::{long_short_constant, variation_unchecked};
use crate::{Error, Result};

/// Default number of uniform samples of `[1, 2]`.
pub const DEFAULT_TIME_SAMPLES: usize = 65;

/// `m` equispaced points from `a` to `b` inclusive.
pub fn uniform_times(a: f64, b: f64, m: usize) -> Vec<f64> {
    assert!(m >= 2);
    (0..m).map(|i| a + (b - a) * i as f64 / (m - 1) as f64).collect()
}

/// `m` equispaced samples in every `[2^k, 2^{k+1}]`, `k ∈ ks`, sharing
/// endpoints; returns the pooled increasing time list.
pub fn dyadic_times(ks: std::ops::RangeInclusive<i32>, m: usize) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for k in ks {
        let a = 2f64.powi(k);
        for t in uniform_times(a, 2.0 * a, m) {
            if out.last().map_or(true, |&l| t > l) {
                out.push(t);
            }
        }
    }
    out
}

/// Paths `t ↦ A_t f(x)` at the masked points, laid out point-major.
fn collect_paths(avg: &SpectralAverager, times: &[f64], mask: &[usize]) -> Result<Vec<Complex64>> {
    let d = avg.spec().d;
    let nt = times.len();
    let mut paths = vec![Complex64::new(0.0, 0.0); mask.len() * nt];
    for (ti, &t) in times.iter().enumerate() {
        let field = avg.apply(|rho| sphere_profile(d, t * rho))?;
        for (pi, &flat) in mask.iter().enumerate() {
            paths[pi * nt + ti] = field.values[flat];
        }
    }
    Ok(paths)
}

fn all_points(f: &GridFunction) -> Vec<usize> {
    (0..f.len()).collect()
}

/// `V_r` of `t ↦ A_t f(x)` over the given times, at each masked point.
pub fn local_variation_masked(f: &GridFunction, r: f64, times: &[f64], mask: &[usize]) -> Result<Vec<f64>> {
    check_exponent(r, "r")?;
    f.require(Domain::Space)?;
    if times.len() < 2 {
        return Err(Error::ShapeMismatch("need at least two sample times".into()));
    }
    let avg = SpectralAverager::new(f)?;
    let paths = collect_paths(&avg, times, mask)?;
    Ok(paths
        .par_chunks(times.len())
        .map_init(Vec::new, |scratch, p| variation_unchecked(p, r, scratch))
        .collect())
}

/// `V_r^I A f` on the whole grid with `m` uniform samples of `[1, 2]`.
pub fn local_variation_operator(f: &GridFunction, r: f64, m: usize) -> Result<GridFunction> {
    if m < 2 {
        return Err(Error::ShapeMismatch("M must be at least 2".into()));
    }
    let v = local_variation_masked(f, r, &uniform_times(1.0, 2.0, m), &all_points(f))?;
    Ok(GridFunction { spec: f.spec, values: v.into_iter().map(|x| Complex64::new(x, 0.0)).collect(), domain: Domain::Space })
}

/// Per-point pieces of the global variation over dyadic ranges.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalVariation {
    pub mask: Vec<usize>,
    /// Variation of the endpoint sequence `A_{2^k} f(x)`.
    pub long: Vec<f64>,
    /// `ℓ^r` sum over `k` of the variation inside `[2^k, 2^{k+1}]`.
    pub short: Vec<f64>,
    /// `long + 2^{1−1/r} short`, a guaranteed upper bound for `pooled`.
    pub upper: Vec<f64>,
    /// Exact `V_r` over all pooled samples.
    pub pooled: Vec<f64>,
}

/// Global variation over `t ∈ [2^{k_0}, 2^{k_1+1}]` with `m` samples per
/// dyadic interval, evaluated at `mask` (all points when `None`).
///
/// Rescaled averages `A_{2^k t}` are multiplier dilations. Errors with
/// `OutOfDomain` when a sphere about an evaluation point could reach a
/// periodic copy of the support of `f`.
pub fn global_variation_operator(
    f: &GridFunction,
    r: f64,
    ks: std::ops::RangeInclusive<i32>,
    m: usize,
    mask: Option<&[usize]>,
) -> Result<GlobalVariation> {
    check_exponent(r, "r")?;
    f.require(Domain::Space)?;
    if m < 2 || ks.is_empty() {
        return Err(Error::ShapeMismatch("need M ≥ 2 and a non-empty dyadic range".into()));
    }
    let owned;
    let mask = match mask {
        Some(m) => m,
        None => {
            owned = all_points(f);
            &owned
        }
    };
    let spec = f.spec;
    let sup_inf = |flat: usize| spec.point(flat).iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let support_radius = f
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(i, _)| sup_inf(i))
        .fold(0.0f64, f64::max);
    let eval_radius = mask.iter().map(|&i| sup_inf(i)).fold(0.0f64, f64::max);
    let t_max = 2f64.powi(*ks.end() + 1);
    if t_max + support_radius + eval_radius >= 2.0 * spec.l - spec.h() {
        return Err(Error::OutOfDomain(format!(
            "radius {t_max} spheres about points within {eval_radius} of the origin reach periodic images of a support of radius {support_radius} (L = {})",
            spec.l
        )));
    }

    let times = dyadic_times(ks.clone(), m);
    let nt = times.len();
    let avg = SpectralAverager::new(f)?;
    let paths = collect_paths(&avg, &times, mask)?;
    let n_intervals = ks.clone().count();
    let c_r = long_short_constant(r);

    let per_point: Vec<(f64, f64, f64)> = paths
        .par_chunks(nt)
        .map_init(Vec::new, |scratch, p| {
            let endpoints: Vec<Complex64> = (0..=n_intervals).map(|k| p[k * (m - 1)]).collect();
            let long = variation_unchecked(&endpoints, r, scratch);
            let pieces: Vec<f64> =
                (0..n_intervals).map(|k| variation_unchecked(&p[k * (m - 1)..=(k + 1) * (m - 1)], r, scratch)).collect();
            let short = if r.is_infinite() {
                pieces.iter().copied().fold(0.0, f64::max)
            } else {
                pieces.iter().map(|v| v.powf(r)).sum::<f64>().powf(1.0 / r)
            };
            let pooled = variation_unchecked(p, r, scratch);
            (long, short, pooled)
        })
        .collect();

    Ok(GlobalVariation {
        mask: mask.to_vec(),
        long: per_point.iter().map(|v| v.0).collect(),
        short: per_point.iter().map(|v| v.1).collect(),
        upper: per_point.iter().map(|v| v.0 + c_r * v.1).collect(),
        pooled: per_point.iter().map(|v| v.2).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{spherical_average_spectral, GridSpec};

    fn spec() -> GridSpec {
        GridSpec::new(2, 64, 8.0).unwrap()
    }

    fn bump(c: f64) -> GridFunction {
        GridFunction::from_real_fn(spec(), move |x| {
            let s = (x[0] - c).powi(2) + x[1] * x[1];
            if s < 0.25 {
                (-1.0 / (1.0 - 4.0 * s)).exp()
            } else {
                0.0
            }
        })
    }

    #[test]
    fn constant_gives_zero() {
        let f = GridFunction::constant(spec(), Complex64::new(2.0, 0.0));
        let v = local_variation_operator(&f, 2.0, 9).unwrap();
        assert!(v.max_abs() < 1e-12);
    }

    #[test]
    fn refinement_is_monotone() {
        let f = bump(0.2);
        let a = local_variation_operator(&f, 2.5, 9).unwrap();
        let b = local_variation_operator(&f, 2.5, 17).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!(y.re >= x.re - 1e-12);
        }
    }

    #[test]
    fn dominates_oscillation() {
        let f = bump(0.0);
        let times = uniform_times(1.0, 2.0, 9);
        let mask: Vec<usize> = (0..f.len()).step_by(37).collect();
        let v = local_variation_masked(&f, 3.0, &times, &mask).unwrap();
        let a0 = spherical_average_spectral(&f, 1.0).unwrap();
        for &t in &times {
            let at = spherical_average_spectral(&f, t).unwrap();
            for (k, &flat) in mask.iter().enumerate() {
                assert!(v[k] >= (at.values[flat] - a0.values[flat]).norm() - 1e-12);
            }
        }
    }

    #[test]
    fn global_bounds_and_single_interval() {
        let f = bump(0.3);
        let mask: Vec<usize> = (0..f.len()).step_by(11).collect();
        let g = global_variation_operator(&f, 2.0, 0..=1, 9, Some(&mask)).unwrap();
        for i in 0..mask.len() {
            assert!(g.pooled[i] <= g.upper[i] + 1e-12);
            assert!(g.pooled[i] >= g.long[i] - 1e-12);
        }
        let single = global_variation_operator(&f, 2.0, 0..=0, 9, Some(&mask)).unwrap();
        let local = local_variation_masked(&f, 2.0, &uniform_times(1.0, 2.0, 9), &mask).unwrap();
        assert_eq!(single.pooled, local);
        assert_eq!(single.short, local);
    }

    #[test]
    fn global_rejects_wrapping() {
        let f = bump(0.0);
        assert!(matches!(global_variation_operator(&f, 2.0, 0..=3, 5, None), Err(Error::OutOfDomain(_))));
    }
}
