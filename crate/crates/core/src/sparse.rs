//! Sparse families of dyadic cubes, the sparse bilinear form
//! `Σ |Q| ⟨f_1⟩_{Q,p} ⟨f_2⟩_{Q,q'}`, a stopping-time construction and the
//! domination/sharpness checks for the global variation operator.
//!
//! Cubes live on the cell lattice of a [`GridSpec`]: cell `i` along an axis
//! is `[−L + i h, −L + (i+1) h)`, and every measure is an exact cell count.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::counterexamples::{example_norm, sphere_average, variation_lq, EvalRegion, ExampleKind, ExampleSpec, Piece};
use crate::fit::log2_slope;
use crate::geometry::{sparse_region_interior, ExponentPoint, RegionSpec, VariationExponent};
use crate::operators::global_variation_operator;
use crate::signal::cutoff::smooth_step;
use crate::signal::grid::{Domain, GridFunction, GridSpec};
use crate::signal::norms::check_exponent;
use crate::{Error, Result};

/// Axis-parallel dyadic cube of `side` cells with lower corner `corner`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cube {
    pub corner: Vec<usize>,
    pub side: usize,
}

impl Cube {
    pub fn new(corner: Vec<usize>, side: usize) -> Self {
        Self { corner, side }
    }

    pub fn cell_count(&self) -> usize {
        self.side.pow(self.corner.len() as u32)
    }

    pub fn fits(&self, grid: &GridSpec) -> bool {
        self.side > 0 && self.corner.len() == grid.d && self.corner.iter().all(|&c| c + self.side <= grid.n)
    }

    pub fn contains_cell(&self, idx: &[usize]) -> bool {
        idx.iter().zip(&self.corner).all(|(&i, &c)| i >= c && i < c + self.side)
    }

    /// Flat indices of the cells, in lexicographic order of the local
    /// offsets (which is increasing flat order).
    pub fn cells(&self, grid: &GridSpec) -> Vec<usize> {
        let d = self.corner.len();
        let mut out = Vec::with_capacity(self.cell_count());
        let mut off = vec![0usize; d];
        let mut idx = vec![0usize; d];
        loop {
            for a in 0..d {
                idx[a] = self.corner[a] + off[a];
            }
            out.push(grid.ravel(&idx));
            let mut a = d;
            loop {
                if a == 0 {
                    return out;
                }
                a -= 1;
                off[a] += 1;
                if off[a] < self.side {
                    break;
                }
                off[a] = 0;
            }
        }
    }

    /// The `2^d` dyadic children.
    pub fn children(&self) -> Vec<Cube> {
        let d = self.corner.len();
        let half = self.side / 2;
        (0..1usize << d)
            .map(|m| Cube::new((0..d).map(|a| self.corner[a] + ((m >> a) & 1) * half).collect(), half))
            .collect()
    }

    /// Physical side length.
    pub fn length(&self, grid: &GridSpec) -> f64 {
        self.side as f64 * grid.h()
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cube {:?}+{}", self.corner, self.side)
    }
}

/// Cubes with their certificate sets `E_Q` (sorted flat cell indices).
#[derive(Clone, Debug, PartialEq)]
pub struct SparseFamily {
    pub grid: GridSpec,
    pub cubes: Vec<Cube>,
    pub certificates: Vec<Vec<usize>>,
}

/// Why a family fails to be sparse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    CubeOutsideGrid { cube: usize },
    CertificateOutsideCube { cube: usize, cell: usize },
    SmallCertificate { cube: usize, cells: usize, required: usize },
    Overlap { first: usize, second: usize, cell: usize },
    Shape { detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CubeOutsideGrid { cube } => write!(f, "cube {cube} leaves the grid"),
            Violation::CertificateOutsideCube { cube, cell } => write!(f, "certificate of cube {cube} contains cell {cell} outside it"),
            Violation::SmallCertificate { cube, cells, required } => {
                write!(f, "certificate of cube {cube} has {cells} cells, needs {required}")
            }
            Violation::Overlap { first, second, cell } => write!(f, "certificates of cubes {first} and {second} share cell {cell}"),
            Violation::Shape { detail } => f.write_str(detail),
        }
    }
}

/// Checks `E_Q ⊆ Q`, `|E_Q| ≥ |Q|/2` and pairwise disjointness by counting
/// cells; reports the first violation found.
pub fn verify_sparsity(fam: &SparseFamily) -> std::result::Result<(), Violation> {
    if fam.cubes.len() != fam.certificates.len() {
        return Err(Violation::Shape { detail: "one certificate per cube is required".into() });
    }
    let grid = fam.grid;
    let mut owner = vec![u32::MAX; grid.len()];
    let mut idx = vec![0usize; grid.d];
    for (k, (cube, cert)) in fam.cubes.iter().zip(&fam.certificates).enumerate() {
        if !cube.fits(&grid) {
            return Err(Violation::CubeOutsideGrid { cube: k });
        }
        let mut sorted = cert.clone();
        sorted.sort_unstable();
        sorted.dedup();
        for &cell in &sorted {
            if cell >= grid.len() {
                return Err(Violation::CertificateOutsideCube { cube: k, cell });
            }
            grid.unravel(cell, &mut idx);
            if !cube.contains_cell(&idx) {
                return Err(Violation::CertificateOutsideCube { cube: k, cell });
            }
        }
        let required = cube.cell_count().div_ceil(2);
        if sorted.len() < required {
            return Err(Violation::SmallCertificate { cube: k, cells: sorted.len(), required });
        }
        for &cell in &sorted {
            if owner[cell] != u32::MAX {
                return Err(Violation::Overlap { first: owner[cell] as usize, second: k, cell });
            }
            owner[cell] = k as u32;
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct CubeRecord {
    corner: Vec<usize>,
    side: usize,
    /// Alternating run lengths over the cube's cells in local lexicographic
    /// order, starting with a run outside the certificate.
    certificate: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct FamilyRecord {
    grid: GridSpec,
    cubes: Vec<CubeRecord>,
}

impl SparseFamily {
    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        let cubes = self
            .cubes
            .iter()
            .zip(&self.certificates)
            .map(|(cube, cert)| {
                let mut member = cert.clone();
                member.sort_unstable();
                let mut runs = Vec::new();
                let (mut inside, mut run, mut m) = (false, 0usize, 0usize);
                for cell in cube.cells(&self.grid) {
                    let now = m < member.len() && member[m] == cell;
                    if now {
                        m += 1;
                    }
                    if now != inside {
                        runs.push(run);
                        run = 0;
                        inside = now;
                    }
                    run += 1;
                }
                runs.push(run);
                CubeRecord { corner: cube.corner.clone(), side: cube.side, certificate: runs }
            })
            .collect();
        Ok(serde_json::to_string(&FamilyRecord { grid: self.grid, cubes })?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: FamilyRecord = serde_json::from_str(s)?;
        let grid = GridSpec::window(rec.grid.d, rec.grid.n, rec.grid.l)?;
        let mut cubes = Vec::with_capacity(rec.cubes.len());
        let mut certificates = Vec::with_capacity(rec.cubes.len());
        for c in rec.cubes {
            let cube = Cube::new(c.corner, c.side);
            if !cube.fits(&grid) {
                return Err(Error::Parse(format!("{cube} does not fit the grid")));
            }
            let cells = cube.cells(&grid);
            if c.certificate.iter().sum::<usize>() != cells.len() {
                return Err(Error::Parse(format!("run lengths of {cube} do not cover it")));
            }
            let mut cert = Vec::new();
            let mut pos = 0;
            for (k, &run) in c.certificate.iter().enumerate() {
                if k % 2 == 1 {
                    cert.extend_from_slice(&cells[pos..pos + run]);
                }
                pos += run;
            }
            cubes.push(cube);
            certificates.push(cert);
        }
        Ok(Self { grid, cubes, certificates })
    }
}

/// How cell values represent a function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellKind {
    /// `|f|` sampled once per cell: `∫_cell |f|^s = h^d |v|^s`.
    Samples,
    /// Indicator with the given fraction of each cell occupied:
    /// `∫_cell |f|^s = h^d v` for every `s`.
    Occupancy,
}

/// Nonnegative per-cell data of a function on the cell lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct CellFunction {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    pub kind: CellKind,
}

impl CellFunction {
    pub fn samples(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        Self::build(grid, values, CellKind::Samples)
    }

    pub fn occupancy(grid: GridSpec, fractions: Vec<f64>) -> Result<Self> {
        if fractions.iter().any(|&v| v > 1.0) {
            return Err(Error::ShapeMismatch("occupancy fractions must lie in [0, 1]".into()));
        }
        Self::build(grid, fractions, CellKind::Occupancy)
    }

    fn build(grid: GridSpec, values: Vec<f64>, kind: CellKind) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch(format!("{} values for {} cells", values.len(), grid.len())));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::ShapeMismatch("cell values must be finite and nonnegative".into()));
        }
        Ok(Self { grid, values, kind })
    }

    /// `|f|` of a spatial grid function.
    pub fn from_grid(f: &GridFunction) -> Result<Self> {
        f.require(Domain::Space)?;
        Self::samples(f.spec, f.values.iter().map(|v| v.norm()).collect())
    }

    /// Cell average of `|f|^s` (`s < ∞`).
    fn power(&self, i: usize, s: f64) -> f64 {
        let v = self.values[i];
        match self.kind {
            CellKind::Samples => {
                if s == 1.0 {
                    v
                } else {
                    v.powf(s)
                }
            }
            CellKind::Occupancy => v,
        }
    }

    /// Essential supremum over a cell.
    fn sup(&self, i: usize) -> f64 {
        match self.kind {
            CellKind::Samples => self.values[i],
            CellKind::Occupancy => {
                if self.values[i] > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Lattice bounding box `(lo, hi)` (inclusive) of the support.
    fn support_box(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let d = self.grid.d;
        let mut lo = vec![usize::MAX; d];
        let mut hi = vec![0usize; d];
        let mut idx = vec![0usize; d];
        let mut any = false;
        for (i, &v) in self.values.iter().enumerate() {
            if v > 0.0 {
                any = true;
                self.grid.unravel(i, &mut idx);
                for a in 0..d {
                    lo[a] = lo[a].min(idx[a]);
                    hi[a] = hi[a].max(idx[a]);
                }
            }
        }
        any.then_some((lo, hi))
    }
}

/// `d`-dimensional summed-area table of cell powers, for `O(2^d)` cube
/// averages.
struct Averager<'a> {
    f: &'a CellFunction,
    s: f64,
    table: Vec<f64>,
}

impl<'a> Averager<'a> {
    fn new(f: &'a CellFunction, s: f64) -> Self {
        let (d, n) = (f.grid.d, f.grid.n);
        if s.is_infinite() {
            return Self { f, s, table: Vec::new() };
        }
        let m = n + 1;
        let mut table = vec![0.0; m.pow(d as u32)];
        let mut idx = vec![0usize; d];
        for i in 0..f.values.len() {
            f.grid.unravel(i, &mut idx);
            let t = idx.iter().fold(0, |acc, &k| acc * m + k + 1);
            table[t] = f.power(i, s);
        }
        // Cumulative sums along each axis in turn.
        let mut stride = 1;
        for _ in 0..d {
            for t in 0..table.len() {
                if (t / stride) % m != 0 {
                    table[t] += table[t - stride];
                }
            }
            stride *= m;
        }
        Self { f, s, table }
    }

    fn sum(&self, cube: &Cube) -> f64 {
        let d = cube.corner.len();
        let m = self.f.grid.n + 1;
        let mut total = 0.0;
        for mask in 0..1usize << d {
            let mut t = 0;
            let mut lows = 0;
            for a in 0..d {
                let k = if (mask >> a) & 1 == 1 {
                    cube.corner[a] + cube.side
                } else {
                    lows += 1;
                    cube.corner[a]
                };
                t = t * m + k;
            }
            total += if lows % 2 == 0 { self.table[t] } else { -self.table[t] };
        }
        total.max(0.0)
    }

    /// `⟨f⟩_{Q,s}`.
    fn average(&self, cube: &Cube) -> f64 {
        if self.s.is_infinite() {
            return cube.cells(&self.f.grid).into_iter().map(|i| self.f.sup(i)).fold(0.0, f64::max);
        }
        let mean = self.sum(cube) / cube.cell_count() as f64;
        if self.s == 1.0 {
            mean
        } else {
            mean.powf(1.0 / self.s)
        }
    }
}

/// `⟨f⟩_{Q,s} = (|Q|^{−1} ∫_Q |f|^s)^{1/s}` by cell sums.
pub fn cube_average(f: &CellFunction, cube: &Cube, s: f64) -> Result<f64> {
    check_exponent(s, "s")?;
    if !cube.fits(&f.grid) {
        return Err(Error::OutOfDomain(format!("{cube} leaves the grid")));
    }
    Ok(Averager::new(f, s).average(cube))
}

/// `q' = q/(q−1)`.
pub fn dual_exponent(q: f64) -> f64 {
    if q == 1.0 {
        f64::INFINITY
    } else if q.is_infinite() {
        1.0
    } else {
        q / (q - 1.0)
    }
}

fn check_pair(fam_grid: &GridSpec, f1: &CellFunction, f2: &CellFunction) -> Result<()> {
    if f1.grid != *fam_grid || f2.grid != *fam_grid {
        return Err(Error::ShapeMismatch("family and functions live on different grids".into()));
    }
    Ok(())
}

/// `Σ_{Q} |Q| ⟨f_1⟩_{Q,p} ⟨f_2⟩_{Q,q'}`.
pub fn sparse_form(fam: &SparseFamily, f1: &CellFunction, f2: &CellFunction, p: f64, q: f64) -> Result<f64> {
    check_exponent(p, "p")?;
    check_exponent(q, "q")?;
    check_pair(&fam.grid, f1, f2)?;
    if let Some(c) = fam.cubes.iter().find(|c| !c.fits(&fam.grid)) {
        return Err(Error::OutOfDomain(format!("{c} leaves the grid")));
    }
    let (a1, a2) = (Averager::new(f1, p), Averager::new(f2, dual_exponent(q)));
    let cell = fam.grid.cell_volume();
    Ok(fam.cubes.iter().map(|c| c.cell_count() as f64 * cell * a1.average(c) * a2.average(c)).sum())
}

/// Parameters of the stopping-time construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoppingRule {
    /// A subcube stops when an average exceeds `threshold ×` the average on
    /// its stopping parent.
    pub threshold: f64,
    /// Cubes smaller than this many cells per side are never selected.
    pub min_side: usize,
}

impl Default for StoppingRule {
    fn default() -> Self {
        Self { threshold: 4.0, min_side: 4 }
    }
}

/// Dyadic stopping-time family for the pair `(f_1, f_2)`.
///
/// The root is the smallest lattice-aligned dyadic cube containing both
/// supports. Inside a stopping cube `Q`, the maximal dyadic subcubes `R`
/// with `⟨f_1⟩_{R,p} > τ ⟨f_1⟩_{Q,p}` or `⟨f_2⟩_{R,q'} > τ ⟨f_2⟩_{Q,q'}`
/// become stopping cubes, and `E_Q` is `Q` minus them. Maximality gives
/// `Σ |R| ≤ (τ^{−p} + τ^{−q'}) |Q| ≤ |Q|/2`, which the rule checks up front.
pub fn build_sparse_family(f1: &CellFunction, f2: &CellFunction, p: f64, q: f64, rule: StoppingRule) -> Result<SparseFamily> {
    check_exponent(p, "p")?;
    check_exponent(q, "q")?;
    let grid = f1.grid;
    check_pair(&grid, f1, f2)?;
    let qd = dual_exponent(q);
    let share = |s: f64| if s.is_infinite() { 0.0 } else { rule.threshold.powf(-s) };
    if !(rule.threshold > 1.0 && share(p) + share(qd) <= 0.5) {
        return Err(Error::InvalidExponent(format!(
            "threshold {} does not guarantee sparsity for p = {p}, q' = {qd}",
            rule.threshold
        )));
    }
    if rule.min_side == 0 {
        return Err(Error::ShapeMismatch("minimum side must be positive".into()));
    }
    let (Some(b1), Some(b2)) = (f1.support_box(), f2.support_box()) else {
        return Err(Error::DegenerateInput("both functions must be nonzero".into()));
    };
    let d = grid.d;
    let lo: Vec<usize> = (0..d).map(|a| b1.0[a].min(b2.0[a])).collect();
    let hi: Vec<usize> = (0..d).map(|a| b1.1[a].max(b2.1[a])).collect();
    let mut side = rule.min_side.next_power_of_two().min(grid.n);
    while side < grid.n && (0..d).any(|a| lo[a] / side != hi[a] / side) {
        side *= 2;
    }
    let root = Cube::new(lo.iter().map(|&l| l / side * side).collect(), side);

    let (a1, a2) = (Averager::new(f1, p), Averager::new(f2, qd));
    let mut cubes = Vec::new();
    let mut certificates = Vec::new();
    let mut pending = vec![root];
    while let Some(q_cube) = pending.pop() {
        let (m1, m2) = (a1.average(&q_cube), a2.average(&q_cube));
        let mut selected: Vec<Cube> = Vec::new();
        let mut frontier = if q_cube.side / 2 >= rule.min_side { q_cube.children() } else { Vec::new() };
        while let Some(r) = frontier.pop() {
            if a1.average(&r) > rule.threshold * m1 || a2.average(&r) > rule.threshold * m2 {
                selected.push(r);
            } else if r.side / 2 >= rule.min_side {
                frontier.extend(r.children());
            }
        }
        let mut idx = vec![0usize; d];
        let cert: Vec<usize> = q_cube
            .cells(&grid)
            .into_iter()
            .filter(|&cell| {
                grid.unravel(cell, &mut idx);
                !selected.iter().any(|r| r.contains_cell(&idx))
            })
            .collect();
        cubes.push(q_cube);
        certificates.push(cert);
        pending.extend(selected);
    }
    Ok(SparseFamily { grid, cubes, certificates })
}

/// Settings for [`domination_check`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DominationConfig {
    /// Dyadic scales `2^k`, `k ∈ [k_min, k_max]`, of the global variation.
    pub k_min: i32,
    pub k_max: i32,
    /// Samples per dyadic interval.
    pub samples: usize,
    pub rule: StoppingRule,
}

impl Default for DominationConfig {
    fn default() -> Self {
        Self { k_min: -2, k_max: 1, samples: 17, rule: StoppingRule::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominationReport {
    /// `∫ V_r A f_1 · f_2`.
    pub lhs: f64,
    /// The sparse form of the constructed family.
    pub form: f64,
    pub ratio: f64,
    pub cubes: usize,
}

fn exponent_of(r: f64) -> Result<VariationExponent> {
    if r.is_infinite() {
        return Ok(VariationExponent::Infinite);
    }
    format!("{r}").parse()
}

/// `∫ V_r A f_1 · f_2 / Σ |Q| ⟨f_1⟩_{Q,p} ⟨f_2⟩_{Q,q'}` for the constructed
/// family, with `V_r A` the pooled variation over `t ∈ [2^{k_min}, 2^{k_max+1}]`.
pub fn domination_check(f1: &GridFunction, f2: &GridFunction, p: f64, q: f64, r: f64, cfg: &DominationConfig) -> Result<DominationReport> {
    check_exponent(p, "p")?;
    check_exponent(q, "q")?;
    check_exponent(r, "r")?;
    f1.same_shape(f2)?;
    let spec = RegionSpec::new(f1.spec.d as u32, exponent_of(r)?)?;
    let pt = ExponentPoint::from_exponents(p, q)?;
    if !sparse_region_interior(spec, pt)? {
        return Err(Error::RegionViolation(format!(
            "(1/p, 1/q) = ({:.4}, {:.4}) is not interior for d = {}, r = {r}",
            pt.inv_p, pt.inv_q, f1.spec.d
        )));
    }
    for (name, f) in [("f1", f1), ("f2", f2)] {
        if f.values.iter().any(|v| v.re < 0.0 || v.im != 0.0) {
            return Err(Error::ShapeMismatch(format!("{name} must be real and nonnegative")));
        }
    }
    let (c1, c2) = (CellFunction::from_grid(f1)?, CellFunction::from_grid(f2)?);
    if c1.is_zero() || c2.is_zero() {
        return Err(Error::DegenerateInput("both functions must be nonzero".into()));
    }
    let mask: Vec<usize> = (0..f2.len()).filter(|&i| f2.values[i].re > 0.0).collect();
    let gv = global_variation_operator(f1, r, cfg.k_min..=cfg.k_max, cfg.samples, Some(&mask))?;
    let lhs = gv.pooled.iter().zip(&mask).map(|(v, &i)| v * f2.values[i].re).sum::<f64>() * f1.spec.cell_volume();
    let fam = build_sparse_family(&c1, &c2, p, q, cfg.rule)?;
    let form = sparse_form(&fam, &c1, &c2, p, q)?;
    Ok(DominationReport { lhs, form, ratio: lhs / form, cubes: fam.len() })
}

/// Half-width of the lattice window used for the sharpness pair.
pub const SHARPNESS_WINDOW: f64 = 2.0;
/// Cells per side of that window (`h = 1/16`).
pub const SHARPNESS_CELLS: usize = 64;

/// Exact occupancy of the sharpness window by balls centred on the `e_d`
/// axis whose centres lie on a cell face or at least one radius away from
/// every face; each ball is then split evenly by the faces through its
/// centre.
fn ball_occupancy(grid: GridSpec, pieces: &[Piece]) -> Result<Vec<f64>> {
    let h = grid.h();
    let d = grid.d;
    let mut out = vec![0.0; grid.len()];
    let to_lattice = |x: f64| (x + grid.l) / h;
    for piece in pieces {
        let Piece::Ball { center, radius, .. } = *piece else {
            return Err(Error::ShapeMismatch("sharpness occupancy handles balls only".into()));
        };
        let vol = crate::counterexamples::unit_ball_volume(d) * radius.powi(d as i32);
        // Per axis: the cells the ball meets (one, or two when a face passes
        // through the centre).
        let mut axes: Vec<Vec<usize>> = Vec::with_capacity(d);
        for a in 0..d {
            let c = if a == d - 1 { center } else { 0.0 };
            let u = to_lattice(c);
            let k = u.round();
            if (u - k).abs() < 1e-12 {
                axes.push(vec![k as usize - 1, k as usize]);
            } else {
                let cell = u.floor();
                if (u - cell) * h < radius || (cell + 1.0 - u) * h < radius {
                    return Err(Error::Unresolvable("ball straddles a cell face off-centre".into()));
                }
                axes.push(vec![cell as usize]);
            }
        }
        let parts: usize = axes.iter().map(Vec::len).product();
        let share = vol / parts as f64 / grid.cell_volume();
        let mut idx = vec![0usize; d];
        for m in 0..parts {
            let mut rest = m;
            for a in 0..d {
                idx[a] = axes[a][rest % axes[a].len()];
                rest /= axes[a].len();
            }
            out[grid.ravel(&idx)] += share;
        }
    }
    Ok(out)
}

/// Occupancy of `R = {|x'| ≤ radius, lo ≤ x_d ≤ hi}`; the `x_d` range is
/// face-aligned, the cross-section is resolved with `sub^{d−1}` subsamples.
fn cylinder_occupancy(grid: GridSpec, radius: f64, lo: f64, hi: f64, sub: usize) -> Vec<f64> {
    let h = grid.h();
    let d = grid.d;
    let mut idx = vec![0usize; d];
    let mut out = vec![0.0; grid.len()];
    for (i, v) in out.iter_mut().enumerate() {
        grid.unravel(i, &mut idx);
        let z0 = -grid.l + idx[d - 1] as f64 * h;
        let along = ((z0 + h).min(hi) - z0.max(lo)).max(0.0) / h;
        if along == 0.0 {
            continue;
        }
        let mut inside = 0usize;
        let total = sub.pow(d as u32 - 1);
        for s in 0..total {
            let mut rest = s;
            let mut r2 = 0.0;
            for a in 0..d - 1 {
                let x = -grid.l + (idx[a] as f64 + ((rest % sub) as f64 + 0.5) / sub as f64) * h;
                rest /= sub;
                r2 += x * x;
            }
            if r2 <= radius * radius {
                inside += 1;
            }
        }
        *v = along * inside as f64 / total as f64;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub d: usize,
    #[serde(with = "crate::serde_exponent")]
    pub p: f64,
    #[serde(with = "crate::serde_exponent")]
    pub q: f64,
    #[serde(with = "crate::serde_exponent")]
    pub r: f64,
    pub js: Vec<u32>,
    /// `⟨V_r A f_j, 1_R⟩`.
    pub pairings: Vec<f64>,
    pub forms: Vec<f64>,
    pub ratios: Vec<f64>,
    pub slope: f64,
    /// `(1/r − d + 1) + (d − 1)/p`.
    pub predicted: f64,
    pub pass: bool,
}

/// Slack allowed below the predicted sharpness exponent.
pub const SHARPNESS_TOLERANCE: f64 = 0.3;

/// The alternating-balls pair `(f_j, 1_R)`: growth in `j` of
/// `⟨V_r A f_j, 1_R⟩` over the sparse form of the constructed family, for
/// `(1/p, 1/q)` outside the closed region with `p < q`.
///
/// `V_r A f_j` on `R` is evaluated exactly from sphere measures with `t`
/// sampled on `[7/8, 17/8]`, which contains every radius where
/// `A_t f_j ≠ 0` on `R`; the form uses exact cell occupancies on a
/// `1/16` lattice.
pub fn sharpness_run(d: usize, js: &[u32], p: f64, q: f64, r: f64) -> Result<SharpnessReport> {
    check_exponent(p, "p")?;
    check_exponent(q, "q")?;
    check_exponent(r, "r")?;
    if !(p < q) {
        return Err(Error::InvalidExponent(format!("the sharpness pair needs p < q, got p = {p}, q = {q}")));
    }
    if js.len() < 4 || js.iter().any(|&j| j < 4) {
        return Err(Error::ShapeMismatch("need at least four values of j, all ≥ 4".into()));
    }
    let spec = RegionSpec::new(d as u32, exponent_of(r)?)?;
    let poly = crate::geometry::region(spec)?;
    let pt = ExponentPoint::from_exponents(p, q)?;
    if poly.contains_closed(pt, 1e-12) {
        return Err(Error::RegionViolation(format!("(1/p, 1/q) = ({}, {}) lies in the closed region", pt.inv_p, pt.inv_q)));
    }
    let grid = GridSpec::window(d, SHARPNESS_CELLS, SHARPNESS_WINDOW)?;
    let radius = 1.0 / (4.0 * d as f64);
    let region = EvalRegion::Cylinder { radius, lo: 1.0, hi: 1.5 };
    let indicator_r = CellFunction::occupancy(grid, cylinder_occupancy(grid, radius, 1.0, 1.5, 32))?;
    let (t0, t1) = (0.875, 2.125);
    let mut pairings = Vec::new();
    let mut forms = Vec::new();
    for &j in js {
        let pieces = ExampleSpec::new(ExampleKind::Disks, d, j)?.pieces()?;
        let m = ((t1 - t0) * 2f64.powi(j as i32 + 5)).ceil() as usize + 1;
        let times: Vec<f64> = (0..m).map(|i| t0 + (t1 - t0) * i as f64 / (m - 1) as f64).collect();
        let nodes = region.nodes(d, crate::counterexamples::REGION_NODES);
        let unsigned: Vec<Piece> = pieces
            .iter()
            .map(|&pc| match pc {
                Piece::Ball { center, radius, .. } => Piece::Ball { center, radius, sign: 1.0 },
                other => other,
            })
            .collect();
        let f = CellFunction::occupancy(grid, ball_occupancy(grid, &unsigned)?)?;
        let mass: f64 = f.values.iter().sum::<f64>() * grid.cell_volume();
        let exact = example_norm(&pieces, d, 1.0)?;
        debug_assert!((mass - exact).abs() < 1e-9 * exact);
        pairings.push(variation_lq(&pieces, d, &nodes, &times, 1.0, r));
        let fam = build_sparse_family(&f, &indicator_r, p, q, StoppingRule::default())?;
        forms.push(sparse_form(&fam, &f, &indicator_r, p, q)?);
    }
    let ratios: Vec<f64> = pairings.iter().zip(&forms).map(|(a, b)| a / b).collect();
    let ji: Vec<i32> = js.iter().map(|&j| j as i32).collect();
    let slope = log2_slope(&ji, &ratios);
    let dd = d as f64;
    let inv_r = if r.is_infinite() { 0.0 } else { 1.0 / r };
    let predicted = (inv_r - dd + 1.0) + (dd - 1.0) / p;
    Ok(SharpnessReport {
        d,
        p,
        q,
        r,
        js: js.to_vec(),
        pairings,
        forms,
        ratios,
        slope,
        predicted,
        pass: slope >= predicted - SHARPNESS_TOLERANCE,
    })
}

/// `dist(supp f_j, R)` for the sharpness pair.
pub fn sharpness_separation(d: usize, j: u32) -> Result<f64> {
    let pieces = ExampleSpec::new(ExampleKind::Disks, d, j)?.pieces()?;
    let top = pieces
        .iter()
        .map(|pc| match *pc {
            Piece::Ball { center, radius, .. } => center + radius,
            _ => f64::NEG_INFINITY,
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(1.0 - top)
}

/// `A_t f_j(x)` for the sharpness pair (exposed for inspection).
pub fn sharpness_average(d: usize, j: u32, xp: f64, xd: f64, t: f64) -> Result<f64> {
    let pieces = ExampleSpec::new(ExampleKind::Disks, d, j)?.pieces()?;
    Ok(sphere_average(&pieces, d, xp, xd, t))
}

/// One corpus entry: two smooth radial bumps and an exponent pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpPair {
    pub centers: [Vec<f64>; 2],
    pub radii: [f64; 2],
    pub p: f64,
    pub q: f64,
}

impl BumpPair {
    /// The two bumps sampled on `grid`.
    pub fn functions(&self, grid: GridSpec) -> Result<(GridFunction, GridFunction)> {
        let bump = |c: &[f64], rho: f64| {
            GridFunction::from_real_fn(grid, move |x| {
                let u = x.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() / rho;
                if u >= 1.0 {
                    0.0
                } else {
                    1.0 - smooth_step(2.0 * u - 1.0)
                }
            })
        };
        if self.centers.iter().any(|c| c.len() != grid.d) {
            return Err(Error::ShapeMismatch("bump centre dimension differs from the grid".into()));
        }
        Ok((bump(&self.centers[0], self.radii[0]), bump(&self.centers[1], self.radii[1])))
    }
}

/// Reproducible corpus of bump pairs with centres in `[−1, 1]^d`, radii in
/// `[0.4, 1]` and `(1/p, 1/q)` at least `margin` inside the sparse region.
pub fn bump_corpus(d: usize, r: f64, count: usize, margin: f64, seed: u64) -> Result<Vec<BumpPair>> {
    let spec = RegionSpec::new(d as u32, exponent_of(r)?)?;
    let poly = crate::geometry::region(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut tries = 0usize;
    while out.len() < count {
        tries += 1;
        if tries > 1000 * (count + 1) {
            return Err(Error::Unresolvable(format!("no exponents {margin} inside the sparse region for d = {d}, r = {r}")));
        }
        let pt = ExponentPoint::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0))?;
        if !(pt.inv_q > 0.0 && sparse_region_interior(spec, pt)? && poly.boundary_distance(pt) >= margin) {
            continue;
        }
        let mut center = || (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>();
        let centers = [center(), center()];
        let radii = [rng.gen_range(0.4..1.0), rng.gen_range(0.4..1.0)];
        out.push(BumpPair { centers, radii, p: 1.0 / pt.inv_p, q: 1.0 / pt.inv_q });
    }
    Ok(out)
}

/// Builds families for `count` random bounded pairs on a `d`-dimensional
/// lattice of `n` cells per side and verifies each; returns the failures.
pub fn random_family_check(d: usize, n: usize, count: usize, seed: u64) -> Result<Vec<(usize, Violation)>> {
    let grid = GridSpec::window(d, n, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for k in 0..count {
        let density = rng.gen_range(0.05..1.0);
        let mut a: Vec<f64> = (0..grid.len()).map(|_| if rng.gen_bool(density) { rng.gen_range(0.0..1.0) } else { 0.0 }).collect();
        for _ in 0..rng.gen_range(0..8) {
            a[rng.gen_range(0..grid.len())] += rng.gen_range(1.0..100.0);
        }
        let mut b: Vec<f64> = (0..grid.len()).map(|_| if rng.gen_bool(0.3) { rng.gen_range(0.0..1.0) } else { 0.0 }).collect();
        b[rng.gen_range(0..grid.len())] = 1.0;
        a[rng.gen_range(0..grid.len())] += 1.0;
        let (p, q) = (rng.gen_range(1.0..6.0), rng.gen_range(1.0..12.0));
        let fam = build_sparse_family(&CellFunction::samples(grid, a)?, &CellFunction::samples(grid, b)?, p, q, StoppingRule::default())?;
        if let Err(v) = verify_sparsity(&fam) {
            failures.push((k, v));
        }
    }
    Ok(failures)
}

/// Domination ratios of a corpus on successively refined grids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    /// Cells per side of each grid.
    pub grids: Vec<usize>,
    /// `ratios[g][k]` for grid `g` and pair `k`.
    pub ratios: Vec<Vec<f64>>,
    /// Max over the corpus per grid.
    pub max_ratios: Vec<f64>,
    /// Largest relative deviation of a per-grid maximum from their mean.
    pub spread: f64,
}

/// Runs [`domination_check`] for every pair on each grid `GridSpec::new(d, n, l)`.
pub fn corpus_run(corpus: &[BumpPair], d: usize, grids: &[usize], l: f64, r: f64, cfg: &DominationConfig) -> Result<CorpusReport> {
    if corpus.is_empty() || grids.is_empty() {
        return Err(Error::DegenerateInput("empty corpus or grid list".into()));
    }
    let mut ratios = Vec::with_capacity(grids.len());
    for &n in grids {
        let grid = GridSpec::new(d, n, l)?;
        let row = corpus
            .iter()
            .map(|pair| {
                let (a, b) = pair.functions(grid)?;
                Ok(domination_check(&a, &b, pair.p, pair.q, r, cfg)?.ratio)
            })
            .collect::<Result<Vec<f64>>>()?;
        ratios.push(row);
    }
    let max_ratios: Vec<f64> = ratios.iter().map(|row| row.iter().copied().fold(0.0, f64::max)).collect();
    let mean = max_ratios.iter().sum::<f64>() / max_ratios.len() as f64;
    let spread = max_ratios.iter().map(|m| (m - mean).abs() / mean).fold(0.0, f64::max);
    Ok(CorpusReport { grids: grids.to_vec(), ratios, max_ratios, spread })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid() -> GridSpec {
        GridSpec::window(2, 16, 1.0).unwrap()
    }

    fn indicator(grid: GridSpec, cube: &Cube) -> CellFunction {
        let mut v = vec![0.0; grid.len()];
        for c in cube.cells(&grid) {
            v[c] = 1.0;
        }
        CellFunction::samples(grid, v).unwrap()
    }

    fn family(cubes: Vec<Cube>, certs: Vec<Vec<usize>>) -> SparseFamily {
        SparseFamily { grid: grid(), cubes, certificates: certs }
    }

    #[test]
    fn disjoint_cubes_are_sparse() {
        let g = grid();
        let a = Cube::new(vec![0, 0], 4);
        let b = Cube::new(vec![4, 8], 4);
        let fam = family(vec![a.clone(), b.clone()], vec![a.cells(&g), b.cells(&g)]);
        assert_eq!(verify_sparsity(&fam), Ok(()));
    }

    #[test]
    fn nested_pair_with_complement_certificate() {
        let g = grid();
        let outer = Cube::new(vec![0, 0], 8);
        let inner = Cube::new(vec![0, 0], 4);
        let inner_cells = inner.cells(&g);
        let rest: Vec<usize> = outer.cells(&g).into_iter().filter(|c| !inner_cells.contains(c)).collect();
        let fam = family(vec![outer, inner], vec![rest, inner_cells]);
        assert_eq!(verify_sparsity(&fam), Ok(()));
    }

    #[test]
    fn identical_cubes_overlap() {
        let g = grid();
        let a = Cube::new(vec![2, 2], 4);
        let fam = family(vec![a.clone(), a.clone()], vec![a.cells(&g), a.cells(&g)]);
        assert!(matches!(verify_sparsity(&fam), Err(Violation::Overlap { first: 0, second: 1, .. })));
    }

    #[test]
    fn small_and_foreign_certificates_fail() {
        let g = grid();
        let a = Cube::new(vec![0, 0], 4);
        let few = a.cells(&g)[..7].to_vec();
        assert!(matches!(verify_sparsity(&family(vec![a.clone()], vec![few])), Err(Violation::SmallCertificate { .. })));
        let mut foreign = a.cells(&g);
        foreign.push(g.ravel(&[10, 10]));
        assert!(matches!(
            verify_sparsity(&family(vec![a.clone()], vec![foreign])),
            Err(Violation::CertificateOutsideCube { .. })
        ));
        let out = Cube::new(vec![14, 0], 4);
        assert!(matches!(verify_sparsity(&family(vec![out], vec![vec![]])), Err(Violation::CubeOutsideGrid { .. })));
    }

    #[test]
    fn form_basics() {
        let g = grid();
        let q = Cube::new(vec![4, 4], 8);
        let one = indicator(g, &q);
        let fam = family(vec![q.clone()], vec![q.cells(&g)]);
        let vol = 64.0 * g.cell_volume();
        assert!((sparse_form(&fam, &one, &one, 2.0, 3.0).unwrap() - vol).abs() < 1e-12);
        let zero = CellFunction::samples(g, vec![0.0; g.len()]).unwrap();
        assert_eq!(sparse_form(&fam, &zero, &one, 2.0, 3.0).unwrap(), 0.0);
        let two = CellFunction::samples(g, one.values.iter().map(|v| 2.0 * v).collect()).unwrap();
        assert!((sparse_form(&fam, &two, &one, 2.0, 3.0).unwrap() - 2.0 * vol).abs() < 1e-12);
        assert!(matches!(sparse_form(&fam, &one, &one, 0.5, 3.0), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn averages_match_direct_sums() {
        let g = GridSpec::window(3, 16, 1.0).unwrap();
        let vals: Vec<f64> = (0..g.len()).map(|i| ((i * 37) % 11) as f64 / 7.0).collect();
        let f = CellFunction::samples(g, vals.clone()).unwrap();
        for (cube, s) in [(Cube::new(vec![0, 4, 8], 8), 2.0), (Cube::new(vec![3, 1, 9], 5), 1.5), (Cube::new(vec![0, 0, 0], 16), 1.0)] {
            let cells = cube.cells(&g);
            let direct = (cells.iter().map(|&c| vals[c].powf(s)).sum::<f64>() / cells.len() as f64).powf(1.0 / s);
            let fast = cube_average(&f, &cube, s).unwrap();
            assert!((direct - fast).abs() < 1e-12 * direct, "{direct} vs {fast}");
        }
        let cube = Cube::new(vec![2, 2, 2], 4);
        let sup = cube.cells(&g).iter().map(|&c| vals[c]).fold(0.0, f64::max);
        assert_eq!(cube_average(&f, &cube, f64::INFINITY).unwrap(), sup);
    }

    #[test]
    fn root_indicator_gives_single_cube() {
        let g = grid();
        let root = Cube::new(vec![8, 0], 8);
        let one = indicator(g, &root);
        let fam = build_sparse_family(&one, &one, 2.0, 2.0, StoppingRule::default()).unwrap();
        assert_eq!(fam.cubes, vec![root.clone()]);
        let vol = 64.0 * g.cell_volume();
        assert!((sparse_form(&fam, &one, &one, 2.0, 2.0).unwrap() - vol).abs() < 1e-12);
    }

    #[test]
    fn halves_stay_in_the_root_at_threshold_four() {
        // Splitting the root raises an L^p average by at most 2^{1/p} < 4,
        // so the left/right half indicators never stop below the root.
        let g = grid();
        let root = Cube::new(vec![0, 0], 16);
        let mut rv = vec![0.0; g.len()];
        let mut idx = [0usize; 2];
        for (i, v) in rv.iter_mut().enumerate() {
            g.unravel(i, &mut idx);
            if idx[0] >= 8 {
                *v = 1.0;
            }
        }
        let mut lv = vec![0.0; g.len()];
        for (i, v) in lv.iter_mut().enumerate() {
            g.unravel(i, &mut idx);
            if idx[0] < 8 {
                *v = 1.0;
            }
        }
        let (l, r) = (CellFunction::samples(g, lv).unwrap(), CellFunction::samples(g, rv).unwrap());
        let fam = build_sparse_family(&l, &r, 2.0, 2.0, StoppingRule::default()).unwrap();
        assert_eq!(fam.cubes, vec![root]);
        // A threshold too weak to guarantee sparsity is refused.
        let weak = StoppingRule { threshold: 1.3, min_side: 4 };
        assert!(matches!(build_sparse_family(&l, &r, 2.0, 2.0, weak), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn point_mass_stops_down_to_min_side() {
        let g = GridSpec::window(2, 64, 1.0).unwrap();
        let mut v = vec![0.0; g.len()];
        v[g.ravel(&[5, 40])] = 1.0;
        v[g.ravel(&[60, 2])] = 1.0;
        let f1 = CellFunction::samples(g, v).unwrap();
        let f2 = CellFunction::samples(g, vec![1.0; g.len()]).unwrap();
        let fam = build_sparse_family(&f1, &f2, 1.5, 2.0, StoppingRule::default()).unwrap();
        assert!(fam.len() > 2);
        assert!(fam.cubes.iter().all(|c| c.side >= 4));
        assert_eq!(verify_sparsity(&fam), Ok(()));
    }

    #[test]
    fn zero_inputs_rejected() {
        let g = grid();
        let zero = CellFunction::samples(g, vec![0.0; g.len()]).unwrap();
        let one = CellFunction::samples(g, vec![1.0; g.len()]).unwrap();
        assert!(matches!(build_sparse_family(&zero, &one, 2.0, 2.0, StoppingRule::default()), Err(Error::DegenerateInput(_))));
        let gf = GridFunction::zeros(GridSpec::new(2, 32, 4.5).unwrap());
        assert!(matches!(domination_check(&gf, &gf, 2.5, 4.0, 3.0, &DominationConfig::default()), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn json_round_trip() {
        let g = GridSpec::window(2, 64, 1.0).unwrap();
        let vals: Vec<f64> = (0..g.len()).map(|i| if i % 97 == 0 { 3.0 } else { 0.1 }).collect();
        let f1 = CellFunction::samples(g, vals).unwrap();
        let f2 = CellFunction::samples(g, vec![1.0; g.len()]).unwrap();
        let fam = build_sparse_family(&f1, &f2, 1.2, 3.0, StoppingRule::default()).unwrap();
        let back = SparseFamily::from_json(&fam.to_json().unwrap()).unwrap();
        assert_eq!(back.cubes, fam.cubes);
        for (a, b) in back.certificates.iter().zip(&fam.certificates) {
            let mut b = b.clone();
            b.sort_unstable();
            assert_eq!(a, &b);
        }
    }

    #[test]
    fn sharpness_geometry() {
        for d in [2, 3] {
            for j in 4..=7 {
                assert!(sharpness_separation(d, j).unwrap() >= 1.0);
            }
        }
        let g = GridSpec::window(2, SHARPNESS_CELLS, SHARPNESS_WINDOW).unwrap();
        let pieces = ExampleSpec::new(ExampleKind::Disks, 2, 6).unwrap().pieces().unwrap();
        let occ = ball_occupancy(g, &pieces).unwrap();
        let total: f64 = occ.iter().sum::<f64>() * g.cell_volume();
        assert!((total - example_norm(&pieces, 2, 1.0).unwrap()).abs() < 1e-15);
        let cyl = cylinder_occupancy(g, 0.125, 1.0, 1.5, 4);
        assert!((cyl.iter().sum::<f64>() * g.cell_volume() - 0.125).abs() < 1e-12);
    }

    #[test]
    fn domination_rejects_exterior_exponents() {
        let spec = GridSpec::new(2, 32, 4.5).unwrap();
        let f = GridFunction::from_real_fn(spec, |x| if x[0] * x[0] + x[1] * x[1] < 0.5 { 1.0 } else { 0.0 });
        assert!(matches!(domination_check(&f, &f, 1.05, 1.1, 3.0, &DominationConfig::default()), Err(Error::RegionViolation(_))));
    }

    #[test]
    fn random_families_verify() {
        assert!(random_family_check(2, 32, 10, 3).unwrap().is_empty());
        assert!(random_family_check(3, 16, 4, 4).unwrap().is_empty());
    }

    #[test]
    fn corpus_is_interior_and_reproducible() {
        let a = bump_corpus(2, 3.0, 5, 0.02, 11).unwrap();
        assert_eq!(a, bump_corpus(2, 3.0, 5, 0.02, 11).unwrap());
        let spec = RegionSpec::new(2, "3".parse().unwrap()).unwrap();
        for pair in &a {
            let pt = ExponentPoint::from_exponents(pair.p, pair.q).unwrap();
            assert!(sparse_region_interior(spec, pt).unwrap());
        }
        let rep = corpus_run(&a[..2], 2, &[32, 64], 4.5, 3.0, &DominationConfig::default()).unwrap();
        assert!(rep.max_ratios.iter().all(|m| m.is_finite() && *m > 0.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn constructed_families_are_sparse(
            seed in proptest::collection::vec(0.0f64..1.0, 64 * 64),
            spikes in proptest::collection::vec((0usize..64, 0usize..64, 1.0f64..50.0), 0..6),
            p in 1.0f64..4.0,
            q in 1.0f64..8.0,
        ) {
            let g = GridSpec::window(2, 64, 1.0).unwrap();
            let mut a = seed.clone();
            for &(x, y, v) in &spikes {
                a[g.ravel(&[x, y])] += v;
            }
            let b: Vec<f64> = seed.iter().map(|v| if *v > 0.7 { *v } else { 0.0 }).collect();
            let f1 = CellFunction::samples(g, a).unwrap();
            let f2 = CellFunction::samples(g, b).unwrap();
            prop_assume!(!f2.is_zero());
            let fam = build_sparse_family(&f1, &f2, p, q, StoppingRule::default()).unwrap();
            prop_assert_eq!(verify_sparsity(&fam), Ok(()));
            // Monotone under enlarging the family.
            let form = sparse_form(&fam, &f1, &f2, p, q).unwrap();
            let mut bigger = fam.clone();
            bigger.cubes.push(Cube::new(vec![0, 0], 4));
            bigger.certificates.push(vec![]);
            prop_assert!(sparse_form(&bigger, &f1, &f2, p, q).unwrap() >= form);
        }
    }
}
