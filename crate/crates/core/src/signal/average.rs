//! Spherical averages `A_t f`, spectrally and by direct quadrature.

use std::sync::Arc;

use num_complex::Complex64;

use super::bessel::sphere_profile;
use super::cutoff::beta_j;
use super::fft::{apply_radial_table, dft};
use super::grid::{Domain, GridFunction, GridSpec, RadialIndex};
use crate::quadrature::gauss_legendre;
use crate::{Error, Result};

/// Holds the spectrum of `f` so that many radial multipliers (one per `t`)
/// cost one inverse transform each.
#[derive(Clone, Debug)]
pub struct SpectralAverager {
    pub spectrum: GridFunction,
    pub index: Arc<RadialIndex>,
}

impl SpectralAverager {
    pub fn new(f: &GridFunction) -> Result<Self> {
        Self::with_index(f, Arc::new(RadialIndex::new(f.spec)))
    }

    pub fn with_index(f: &GridFunction, index: Arc<RadialIndex>) -> Result<Self> {
        if index.spec != f.spec {
            return Err(Error::ShapeMismatch("radial index built for another grid".into()));
        }
        Ok(Self { spectrum: dft(f)?, index })
    }

    pub fn spec(&self) -> GridSpec {
        self.spectrum.spec
    }

    /// Applies the radial multiplier `m(|ξ|)`.
    pub fn apply(&self, m: impl Fn(f64) -> f64) -> Result<GridFunction> {
        let table = self.index.table(m);
        apply_radial_table(&self.spectrum, &self.index, &table)
    }

    /// `A_t f`.
    pub fn average(&self, t: f64) -> Result<GridFunction> {
        let d = self.spec().d;
        self.apply(|rho| sphere_profile(d, t * rho))
    }

    /// `A_t L_j f`.
    pub fn average_piece(&self, t: f64, j: u32) -> Result<GridFunction> {
        let d = self.spec().d;
        self.apply(|rho| beta_j(j, rho) * sphere_profile(d, t * rho))
    }
}

/// `A_t f` by the multiplier `m_d(t|ξ|)`.
pub fn spherical_average_spectral(f: &GridFunction, t: f64) -> Result<GridFunction> {
    f.require(Domain::Space)?;
    SpectralAverager::new(f)?.average(t)
}

/// Littlewood–Paley piece `L_j f`, multiplier `β_j(|ξ|)`.
pub fn lp_piece(f: &GridFunction, j: u32) -> Result<GridFunction> {
    f.require(Domain::Space)?;
    SpectralAverager::new(f)?.apply(|rho| beta_j(j, rho))
}

/// Anything that can be evaluated at an arbitrary point of `R^d`.
pub trait PointEval {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Result<Complex64>;
}

/// Multilinear interpolation of grid samples; only points with every
/// coordinate in `[−L, L − h]` are accepted (no wrap-around).
///
/// Interpolation error is `O(h² |∇²f|)`; for band-limited data this limits
/// the oracle to modes well below the Nyquist frequency.
impl PointEval for GridFunction {
    fn dim(&self) -> usize {
        self.spec.d
    }

    fn eval(&self, x: &[f64]) -> Result<Complex64> {
        let s = self.spec;
        let h = s.h();
        let mut base = [0usize; 4];
        let mut frac = [0.0; 4];
        for a in 0..s.d {
            let u = (x[a] + s.l) / h;
            if !(u >= 0.0 && u <= (s.n - 1) as f64) {
                return Err(Error::OutOfDomain(format!("point {x:?} outside the sampled box")));
            }
            let i = (u.floor() as usize).min(s.n - 2);
            base[a] = i;
            frac[a] = u - i as f64;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = [0usize; 4];
        for corner in 0..(1usize << s.d) {
            let mut w = 1.0;
            for a in 0..s.d {
                let bit = (corner >> a) & 1;
                idx[a] = base[a] + bit;
                w *= if bit == 1 { frac[a] } else { 1.0 - frac[a] };
            }
            if w != 0.0 {
                acc += self.values[s.ravel(&idx[..s.d])] * w;
            }
        }
        Ok(acc)
    }
}

/// Wraps a closure as a [`PointEval`].
pub struct FnEval<F> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&[f64]) -> Complex64> PointEval for FnEval<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> Result<Complex64> {
        Ok((self.f)(x))
    }
}

/// Product quadrature rule on `S^{dim−1}` with weights summing to 1.
///
/// `S¹` uses the trapezoid rule with `m` equispaced angles (exact for
/// trigonometric polynomials of degree `< m`); `S²` and `S³` are products
/// of a Gauss rule in the last coordinate with the rule on the equatorial
/// sphere.
#[derive(Clone, Debug)]
pub struct SphereRule {
    pub dim: usize,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(dim: usize, m: usize) -> Self {
        assert!(dim >= 2 && m >= 2);
        if dim == 2 {
            let mut points = Vec::with_capacity(2 * m);
            for k in 0..m {
                let th = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                points.extend([th.cos(), th.sin()]);
            }
            return Self { dim, points, weights: vec![1.0 / m as f64; m] };
        }
        let lower = Self::new(dim - 1, m);
        // Polar coordinate u = y_dim ∈ [−1, 1] carries the weight
        // (1 − u²)^{(dim−3)/2}: Gauss–Legendre for S², Chebyshev of the
        // second kind for S³; both exact for polynomials in u.
        let k = m.div_ceil(2).max(2);
        let polar: Vec<(f64, f64)> = match dim {
            3 => {
                let (nodes, gw) = gauss_legendre(k);
                nodes.into_iter().zip(gw).collect()
            }
            4 => (1..=k)
                .map(|i| {
                    let a = i as f64 * std::f64::consts::PI / (k + 1) as f64;
                    (a.cos(), a.sin().powi(2))
                })
                .collect(),
            _ => panic!("sphere rules only for dimensions 2..=4"),
        };
        let total: f64 = polar.iter().map(|p| p.1).sum();
        let mut points = Vec::with_capacity(dim * polar.len() * lower.len());
        let mut weights = Vec::with_capacity(polar.len() * lower.len());
        for &(c, w) in &polar {
            let s = (1.0 - c * c).max(0.0).sqrt();
            for (k, &lw) in lower.weights.iter().enumerate() {
                points.extend(lower.points[k * (dim - 1)..(k + 1) * (dim - 1)].iter().map(|&y| s * y));
                points.push(c);
                weights.push(w / total * lw);
            }
        }
        Self { dim, points, weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.points[k * self.dim..(k + 1) * self.dim]
    }
}

/// `A_t f(x) = ∫_{S^{d−1}} f(x − t y) dσ(y)` by the given sphere rule.
pub fn spherical_average_quadrature_with(f: &impl PointEval, t: f64, x: &[f64], rule: &SphereRule) -> Result<Complex64> {
    let d = f.dim();
    if rule.dim != d || x.len() != d {
        return Err(Error::ShapeMismatch("dimension of rule, point and function differ".into()));
    }
    let mut y = vec![0.0; d];
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..rule.len() {
        for (a, (ya, &pa)) in y.iter_mut().zip(rule.point(k)).enumerate() {
            *ya = x[a] - t * pa;
        }
        acc += f.eval(&y)? * rule.weights[k];
    }
    Ok(acc)
}

/// Quadrature average with a default rule resolving angular frequencies up
/// to about 64 per unit radius.
pub fn spherical_average_quadrature(f: &impl PointEval, t: f64, x: &[f64]) -> Result<Complex64> {
    let m = ((64.0 * t).ceil() as usize).clamp(32, 512);
    spherical_average_quadrature_with(f, t, x, &SphereRule::new(f.dim(), m))
}

/// Same, but first checks that the sphere stays inside the sampled box.
pub fn spherical_average_quadrature_grid(f: &GridFunction, t: f64, x: &[f64]) -> Result<Complex64> {
    let s = f.spec;
    if x.iter().any(|&xa| xa.abs() + t > s.l - s.h()) {
        return Err(Error::OutOfDomain(format!("sphere of radius {t} about {x:?} leaves the box")));
    }
    spherical_average_quadrature(f, t, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_rule_weights_and_moments() {
        for dim in 2..=4 {
            let rule = SphereRule::new(dim, 16);
            let w: f64 = rule.weights.iter().sum();
            assert!((w - 1.0).abs() < 1e-13);
            // ∫ y_1² dσ = 1/dim
            let m2: f64 = (0..rule.len()).map(|k| rule.point(k)[0].powi(2) * rule.weights[k]).sum();
            assert!((m2 - 1.0 / dim as f64).abs() < 1e-13, "dim {dim}");
        }
    }

    #[test]
    fn quadrature_constant_and_odd() {
        let one = FnEval { dim: 3, f: |_: &[f64]| Complex64::new(1.0, 0.0) };
        let v = spherical_average_quadrature(&one, 1.3, &[0.1, 0.2, 0.3]).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
        let x1 = FnEval { dim: 2, f: |x: &[f64]| Complex64::new(x[0], 0.0) };
        assert!(spherical_average_quadrature(&x1, 2.0, &[0.0, 0.0]).unwrap().norm() < 1e-12);
    }

    #[test]
    fn gaussian_at_origin() {
        let g = FnEval { dim: 3, f: |x: &[f64]| Complex64::new((-x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0) };
        let v = spherical_average_quadrature(&g, 1.0, &[0.0; 3]).unwrap();
        assert!((v.re - (-1f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn spectral_constant_is_preserved() {
        let spec = GridSpec::new(2, 32, 8.0).unwrap();
        let f = GridFunction::constant(spec, Complex64::new(1.0, 0.0));
        let a = spherical_average_spectral(&f, 1.7).unwrap();
        assert!(a.values.iter().all(|v| (v - 1.0).norm() < 1e-12));
    }

    #[test]
    fn gaussian_spectral_at_origin() {
        // d = 3 with a narrow enough Gaussian that the torus is irrelevant.
        let spec = GridSpec::new(3, 64, 8.0).unwrap();
        let f = GridFunction::from_real_fn(spec, |x| (-x.iter().map(|v| v * v).sum::<f64>()).exp());
        for &t in &[0.5, 1.0, 2.0] {
            let a = spherical_average_spectral(&f, t).unwrap();
            assert!((a.at_origin().re - (-t * t).exp()).abs() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn interpolation_is_exact_for_affine_data() {
        let spec = GridSpec::new(2, 32, 8.0).unwrap();
        let f = GridFunction::from_real_fn(spec, |x| 2.0 * x[0] - x[1] + 0.5);
        let v = f.eval(&[0.123, -1.77]).unwrap();
        assert!((v.re - (2.0 * 0.123 + 1.77 + 0.5)).abs() < 1e-12);
        assert!(spherical_average_quadrature_grid(&f, 7.9, &[0.0, 0.0]).is_err());
    }
}
