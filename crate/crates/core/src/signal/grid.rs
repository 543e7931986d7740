use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Smallest admissible half-extent of the periodic box.
///
/// Averages of data supported in `|x| ≤ 1/2` at radii `t ≤ 4` stay inside
/// `|x| ≤ 4.5`, so this is the no-wrap threshold for the local operator.
pub const MIN_HALF_EXTENT: f64 = 4.5;

/// Periodic box `[−L, L)^d` sampled with `n` points per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub d: usize,
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
}

impl GridSpec {
    pub fn new(d: usize, n: usize, l: f64) -> Result<Self> {
        if !(2..=4).contains(&d) {
            return Err(Error::InvalidGrid(format!("d = {d} not in {{2, 3, 4}}")));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n = {n} must be a power of two ≥ 16")));
        }
        if !(l.is_finite() && l >= MIN_HALF_EXTENT) {
            return Err(Error::InvalidGrid(format!("L = {l} must be at least {MIN_HALF_EXTENT}")));
        }
        if (n as u64).checked_pow(d as u32).map_or(true, |c| c > 1 << 28) {
            return Err(Error::InvalidGrid(format!("{n}^{d} samples exceed the memory budget")));
        }
        Ok(Self { d, n, l })
    }

    /// A grid on a box of any half-width `l > 0`, for rasterising and
    /// inspecting localised data. Averages computed on such a grid are
    /// averages on the small torus: spheres of radius above `l` wrap.
    pub fn window(d: usize, n: usize, l: f64) -> Result<Self> {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::InvalidGrid(format!("L = {l} must be positive")));
        }
        Self::new(d, n, MIN_HALF_EXTENT).map(|s| Self { l, ..s })
    }

    /// Default resolution per dimension: 256, 64 and 32 points per axis.
    pub fn default_for(d: usize) -> Result<Self> {
        let n = match d {
            2 => 256,
            3 => 64,
            _ => 32,
        };
        Self::new(d, n, 8.0)
    }

    pub fn h(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    /// Cell volume `h^d`.
    pub fn cell_volume(&self) -> f64 {
        self.h().powi(self.d as i32)
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of sample `i` along an axis: `−L + i h`.
    pub fn coord(&self, i: usize) -> f64 {
        -self.l + i as f64 * self.h()
    }

    /// Signed wavenumber of DFT bin `i` (FFT ordering).
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Angular frequency per unit wavenumber, `π / L`.
    pub fn frequency_step(&self) -> f64 {
        std::f64::consts::PI / self.l
    }

    /// Largest frequency magnitude representable along an axis.
    pub fn nyquist(&self) -> f64 {
        self.frequency_step() * (self.n / 2) as f64
    }

    /// Row-major multi-index of a flat index.
    pub fn unravel(&self, mut flat: usize, out: &mut [usize]) {
        for a in (0..self.d).rev() {
            out[a] = flat % self.n;
            flat /= self.n;
        }
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    /// Spatial coordinates of a flat index.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut idx = vec![0; self.d];
        self.unravel(flat, &mut idx);
        idx.iter().map(|&i| self.coord(i)).collect()
    }

    /// Flat index of the sample nearest to the origin (exactly the origin).
    pub fn origin_index(&self) -> usize {
        self.ravel(&vec![self.n / 2; self.d])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Space,
    Frequency,
}

/// Complex samples on a [`GridSpec`], row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub spec: GridSpec,
    pub values: Vec<Complex64>,
    pub domain: Domain,
}

impl GridFunction {
    pub fn new(spec: GridSpec, values: Vec<Complex64>, domain: Domain) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                spec.len()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::ShapeMismatch("non-finite sample".into()));
        }
        Ok(Self { spec, values, domain })
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self { spec, values: vec![Complex64::new(0.0, 0.0); spec.len()], domain: Domain::Space }
    }

    pub fn constant(spec: GridSpec, c: Complex64) -> Self {
        Self { spec, values: vec![c; spec.len()], domain: Domain::Space }
    }

    /// Samples `f` at every grid point (space domain).
    pub fn from_fn(spec: GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let mut idx = vec![0; spec.d];
        let mut x = vec![0.0; spec.d];
        let values = (0..spec.len())
            .map(|flat| {
                spec.unravel(flat, &mut idx);
                for (xa, &ia) in x.iter_mut().zip(&idx) {
                    *xa = spec.coord(ia);
                }
                f(&x)
            })
            .collect();
        Self { spec, values, domain: Domain::Space }
    }

    pub fn from_real_fn(spec: GridSpec, f: impl Fn(&[f64]) -> f64) -> Self {
        Self::from_fn(spec, |x| Complex64::new(f(x), 0.0))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn require(&self, domain: Domain) -> Result<()> {
        if self.domain == domain {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("expected {domain:?} data, got {:?}", self.domain)))
        }
    }

    pub fn same_shape(&self, other: &Self) -> Result<()> {
        if self.spec == other.spec && self.domain == other.domain {
            Ok(())
        } else {
            Err(Error::ShapeMismatch("grids or domains differ".into()))
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { spec: self.spec, values: self.values.iter().map(|&v| f(v)).collect(), domain: self.domain }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn abs_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Cyclic lattice shift: `out(x) = self(x − shift·h)`.
    pub fn roll(&self, shift: &[isize]) -> Self {
        let s = self.spec;
        let n = s.n as isize;
        let mut out = vec![Complex64::new(0.0, 0.0); s.len()];
        let mut idx = vec![0; s.d];
        for (flat, v) in self.values.iter().enumerate() {
            s.unravel(flat, &mut idx);
            for (i, &sh) in idx.iter_mut().zip(shift) {
                *i = ((*i as isize + sh).rem_euclid(n)) as usize;
            }
            out[s.ravel(&idx)] = *v;
        }
        Self { spec: s, values: out, domain: self.domain }
    }

    /// Value at a grid point given by its multi-index.
    pub fn at(&self, idx: &[usize]) -> Complex64 {
        self.values[self.spec.ravel(idx)]
    }

    pub fn at_origin(&self) -> Complex64 {
        self.values[self.spec.origin_index()]
    }
}

fn zip_with(a: &GridFunction, b: &GridFunction, f: impl Fn(Complex64, Complex64) -> Complex64) -> GridFunction {
    assert!(a.spec == b.spec && a.domain == b.domain, "grid shape mismatch");
    GridFunction {
        spec: a.spec,
        values: a.values.iter().zip(&b.values).map(|(&x, &y)| f(x, y)).collect(),
        domain: a.domain,
    }
}

impl Add for &GridFunction {
    type Output = GridFunction;
    fn add(self, rhs: Self) -> GridFunction {
        zip_with(self, rhs, |a, b| a + b)
    }
}

impl Sub for &GridFunction {
    type Output = GridFunction;
    fn sub(self, rhs: Self) -> GridFunction {
        zip_with(self, rhs, |a, b| a - b)
    }
}

impl Mul<Complex64> for &GridFunction {
    type Output = GridFunction;
    fn mul(self, rhs: Complex64) -> GridFunction {
        self.scale(rhs)
    }
}

/// Per-point integer `Σ k_a²` and the distinct values it takes, so that
/// radial multipliers are evaluated once per distinct radius.
#[derive(Clone, Debug)]
pub struct RadialIndex {
    pub spec: GridSpec,
    /// Index into `radii` for every frequency bin.
    pub ids: Vec<u32>,
    /// Distinct frequency magnitudes `|ξ|`, increasing.
    pub radii: Vec<f64>,
}

impl RadialIndex {
    pub fn new(spec: GridSpec) -> Self {
        let n = spec.n;
        let ksq_axis: Vec<u64> = (0..n).map(|i| (spec.wavenumber(i) * spec.wavenumber(i)) as u64).collect();
        let max_k = spec.d as u64 * (n as u64 / 2).pow(2);
        let mut present = vec![false; max_k as usize + 1];
        let mut ksq = vec![0u32; spec.len()];
        let mut idx = vec![0; spec.d];
        for (flat, slot) in ksq.iter_mut().enumerate() {
            spec.unravel(flat, &mut idx);
            let k: u64 = idx.iter().map(|&i| ksq_axis[i]).sum();
            *slot = k as u32;
            present[k as usize] = true;
        }
        let mut id_of = vec![u32::MAX; present.len()];
        let mut radii = Vec::new();
        for (k, &p) in present.iter().enumerate() {
            if p {
                id_of[k] = radii.len() as u32;
                radii.push(spec.frequency_step() * (k as f64).sqrt());
            }
        }
        let ids = ksq.into_iter().map(|k| id_of[k as usize]).collect();
        Self { spec, ids, radii }
    }

    /// Evaluates `m` once per distinct radius.
    pub fn table(&self, m: impl Fn(f64) -> f64) -> Vec<f64> {
        self.radii.iter().map(|&rho| m(rho)).collect()
    }

    /// `|ξ|` of a frequency bin.
    pub fn radius(&self, flat: usize) -> f64 {
        self.radii[self.ids[flat] as usize]
    }
}
