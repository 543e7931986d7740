//! The lower-bound test functions and a harness fitting the growth in `j`
//! of `‖V_r^I A f_j‖_{L^q(E_j)} / ‖f_j‖_p` over the designated evaluation
//! regions `E_j`.
//!
//! Every example is a signed sum of balls, shells and plates placed
//! symmetrically about the `e_d` axis (or a radial density), so `A_t f_j(x)`
//! is evaluated exactly from sphere measures instead of by transforming a
//! rasterised indicator; [`generate`] still produces the grid picture.

mod measure;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use measure::{ball_fraction, cap_of_angle, plate_fraction, radial_average, unit_ball_volume};

use crate::fit::log2_slope;
use crate::quadrature::GaussRule;
use crate::signal::grid::{GridFunction, GridSpec};
use crate::signal::norms::check_exponent;
use crate::variation::variation_unchecked;
use crate::{Error, Result};

/// Slack allowed below the predicted exponent.
pub const SLOPE_TOLERANCE: f64 = 0.2;

/// Radius of the ball carrying Stein's density.
pub const STEIN_RADIUS: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExampleKind {
    /// `1_B(y) |y|^{1−d} / (log(1/|y|) log log(1/|y|))` on `|y| ≤ 1/10`,
    /// truncated at `|y| = 2^{−j}`.
    Stein,
    /// The single shell `S_{j,0}`.
    Shell0,
    /// The plate `{|y'| ≤ δ, |y_d| ≤ δ²}` with `δ = 2^{−j/2}`.
    Knapp,
    /// Alternating balls `B_{j,n}` of radius `2^{−j−4}` at `−n 2^{−j} e_d`.
    Disks,
    /// Alternating plates `P_{j,n}` at `−n 2^{−j} e_d`.
    KnappPlates,
    /// Alternating shells `S_{j,n}`, `n = 1..N`.
    AlternatingShells,
}

impl ExampleKind {
    pub const ALL: [ExampleKind; 6] =
        [Self::Stein, Self::Shell0, Self::Knapp, Self::Disks, Self::KnappPlates, Self::AlternatingShells];

    pub fn name(self) -> &'static str {
        match self {
            Self::Stein => "stein",
            Self::Shell0 => "shell0",
            Self::Knapp => "knapp",
            Self::Disks => "disks",
            Self::KnappPlates => "knapp-plates",
            Self::AlternatingShells => "alternating-shells",
        }
    }
}

impl fmt::Display for ExampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|k| k.name().replace('-', "") == key)
            .ok_or_else(|| Error::Parse(format!("unknown example kind {s:?}")))
    }
}

/// One piece of an example, symmetric about the `e_d` axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Piece {
    /// Closed ball centred at `center · e_d`.
    Ball { center: f64, radius: f64, sign: f64 },
    /// `{inner ≤ |y| ≤ outer}`.
    Shell { inner: f64, outer: f64, sign: f64 },
    /// `{|y'| ≤ half_width, |y_d − center| ≤ half_thickness}`.
    Plate { center: f64, half_width: f64, half_thickness: f64, sign: f64 },
    /// Stein's radial density, capped at radius `floor`.
    Stein { floor: f64 },
}

fn stein_profile(d: usize, s: f64, floor: f64) -> f64 {
    if s > STEIN_RADIUS {
        return 0.0;
    }
    let s = s.max(floor);
    let l = (1.0 / s).ln();
    s.powi(1 - d as i32) / (l * l.ln())
}

impl Piece {
    /// Value at `y`; Stein's density is capped at radius `max(floor, cap)`.
    pub fn value(&self, y: &[f64], cap: f64) -> f64 {
        let d = y.len();
        let across: f64 = y[..d - 1].iter().map(|v| v * v).sum();
        match *self {
            Piece::Ball { center, radius, sign } => {
                if across + (y[d - 1] - center).powi(2) <= radius * radius {
                    sign
                } else {
                    0.0
                }
            }
            Piece::Shell { inner, outer, sign } => {
                let r = (across + y[d - 1] * y[d - 1]).sqrt();
                if (inner..=outer).contains(&r) {
                    sign
                } else {
                    0.0
                }
            }
            Piece::Plate { center, half_width, half_thickness, sign } => {
                if across <= half_width * half_width && (y[d - 1] - center).abs() <= half_thickness {
                    sign
                } else {
                    0.0
                }
            }
            Piece::Stein { floor } => stein_profile(d, (across + y[d - 1] * y[d - 1]).sqrt(), floor.max(cap)),
        }
    }

    /// `A_t` of the piece at the point with `|x'| = xp` and last coordinate `xd`.
    pub fn sphere_average(&self, d: usize, xp: f64, xd: f64, t: f64) -> f64 {
        match *self {
            Piece::Ball { center, radius, sign } => sign * ball_fraction(d, t, xp.hypot(xd - center), radius),
            Piece::Shell { inner, outer, sign } => {
                let dist = xp.hypot(xd);
                sign * (ball_fraction(d, t, dist, outer) - ball_fraction(d, t, dist, inner))
            }
            Piece::Plate { center, half_width, half_thickness, sign } => {
                sign * plate_fraction(d, xp, xd, t, center, half_width, half_thickness)
            }
            Piece::Stein { floor } => {
                radial_average(d, xp.hypot(xd), t, STEIN_RADIUS, &[floor], floor, |s| stein_profile(d, s, floor))
            }
        }
    }

    /// `∫ |piece|^p` (`p < ∞`).
    fn power_integral(&self, d: usize, p: f64) -> f64 {
        let vd = unit_ball_volume(d);
        match *self {
            Piece::Ball { radius, sign, .. } => sign.abs().powf(p) * vd * radius.powi(d as i32),
            Piece::Shell { inner, outer, sign } => sign.abs().powf(p) * vd * (outer.powi(d as i32) - inner.powi(d as i32)),
            Piece::Plate { half_width, half_thickness, sign, .. } => {
                sign.abs().powf(p) * unit_ball_volume(d - 1) * half_width.powi(d as i32 - 1) * 2.0 * half_thickness
            }
            Piece::Stein { floor } => {
                // Core ball plus ∫ g(s)^p s^{d−1} ds in u = ln(1/s).
                let area = d as f64 * vd;
                let core = stein_profile(d, floor, floor).powf(p) * vd * floor.powi(d as i32);
                let (a, b) = ((1.0 / STEIN_RADIUS).ln(), (1.0 / floor).ln());
                let panels = ((b - a) * 4.0).ceil().max(1.0) as usize;
                let tail = GaussRule::new(12).integrate_composite(a, b, panels, |u| {
                    let s = (-u).exp();
                    stein_profile(d, s, floor).powf(p) * s.powi(d as i32)
                });
                core + area * tail
            }
        }
    }

    fn sup(&self, d: usize) -> f64 {
        match *self {
            Piece::Ball { sign, .. } | Piece::Shell { sign, .. } | Piece::Plate { sign, .. } => sign.abs(),
            Piece::Stein { floor } => stein_profile(d, floor, floor),
        }
    }

    /// Largest `|y_a|` over the support.
    fn extent(&self) -> f64 {
        match *self {
            Piece::Ball { center, radius, .. } => center.abs() + radius,
            Piece::Shell { outer, .. } => outer,
            Piece::Plate { center, half_width, half_thickness, .. } => half_width.max(center.abs() + half_thickness),
            Piece::Stein { .. } => STEIN_RADIUS,
        }
    }
}

/// A region where the harness measures `V_r^I A f_j` in `L^q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalRegion {
    /// `{|x'| ≤ radius, lo ≤ x_d ≤ hi}`.
    Cylinder { radius: f64, lo: f64, hi: f64 },
    /// `{inner ≤ |x| ≤ outer}` (a ball when `inner = 0`).
    Annulus { inner: f64, outer: f64 },
}

fn sphere_area(dim_plus_one: usize) -> f64 {
    match dim_plus_one {
        1 => 2.0,
        n => n as f64 * unit_ball_volume(n),
    }
}

impl EvalRegion {
    pub fn volume(&self, d: usize) -> f64 {
        match *self {
            EvalRegion::Cylinder { radius, lo, hi } => unit_ball_volume(d - 1) * radius.powi(d as i32 - 1) * (hi - lo),
            EvalRegion::Annulus { inner, outer } => unit_ball_volume(d) * (outer.powi(d as i32) - inner.powi(d as i32)),
        }
    }

    /// Midpoint nodes `(|x'|, x_d, weight)` with `k` points per direction,
    /// using the rotational symmetry about `e_d` (radial regions collapse to
    /// the axis).
    pub fn nodes(&self, d: usize, k: usize) -> Vec<(f64, f64, f64)> {
        match *self {
            EvalRegion::Cylinder { radius, lo, hi } => {
                let (hr, hz) = (radius / k as f64, (hi - lo) / k as f64);
                let mut out = Vec::with_capacity(k * k);
                for a in 0..k {
                    let xp = (a as f64 + 0.5) * hr;
                    let w = sphere_area(d - 1) * xp.powi(d as i32 - 2) * hr * hz;
                    for b in 0..k {
                        out.push((xp, lo + (b as f64 + 0.5) * hz, w));
                    }
                }
                out
            }
            EvalRegion::Annulus { inner, outer } => {
                let h = (outer - inner) / k as f64;
                (0..k)
                    .map(|a| {
                        let s = inner + (a as f64 + 0.5) * h;
                        (0.0, s, sphere_area(d) * s.powi(d as i32 - 1) * h)
                    })
                    .collect()
            }
        }
    }
}

/// Parameters of one member `f_j` of an example family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleSpec {
    pub kind: ExampleKind,
    pub d: usize,
    pub j: u32,
    /// Number of alternating components `N`; defaults to `2^{j−2}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<u32>,
}

impl ExampleSpec {
    pub fn new(kind: ExampleKind, d: usize, j: u32) -> Result<Self> {
        if !(2..=4).contains(&d) {
            return Err(Error::ShapeMismatch(format!("d = {d} not in {{2, 3, 4}}")));
        }
        if j > 24 {
            return Err(Error::Unresolvable(format!("j = {j} is beyond double precision geometry")));
        }
        Ok(Self { kind, d, j, components: None })
    }

    pub fn with_components(mut self, n: u32) -> Self {
        self.components = Some(n);
        self
    }

    fn dyadic(&self, shift: i32) -> f64 {
        2f64.powi(shift - self.j as i32)
    }

    /// `N`, the number of alternating components (1 for single-piece kinds;
    /// 0 when `j < 2` leaves the family empty).
    pub fn component_count(&self) -> u32 {
        match self.kind {
            ExampleKind::Disks | ExampleKind::KnappPlates | ExampleKind::AlternatingShells => {
                let full = if self.j >= 2 { 1u32 << (self.j - 2) } else { 0 };
                self.components.map_or(full, |n| n.min(full))
            }
            _ => 1,
        }
    }

    /// The signed pieces of `f_j`; `Unresolvable` when the family is empty.
    pub fn pieces(&self) -> Result<Vec<Piece>> {
        let n_max = self.component_count();
        if n_max == 0 {
            return Err(Error::Unresolvable(format!("{} at j = {} has no components", self.kind, self.j)));
        }
        let sign = |n: u32| if n % 2 == 0 { 1.0 } else { -1.0 };
        let step = self.dyadic(0);
        Ok(match self.kind {
            ExampleKind::Stein => vec![Piece::Stein { floor: step.min(STEIN_RADIUS / 2.0) }],
            ExampleKind::Shell0 => {
                vec![Piece::Shell { inner: 1.0 - self.dyadic(-2), outer: 1.0 + self.dyadic(-2), sign: 1.0 }]
            }
            ExampleKind::Knapp => {
                let delta = 2f64.powf(-(self.j as f64) / 2.0);
                vec![Piece::Plate { center: 0.0, half_width: delta, half_thickness: delta * delta, sign: 1.0 }]
            }
            ExampleKind::Disks => (1..=n_max)
                .map(|n| Piece::Ball { center: -(n as f64) * step, radius: self.dyadic(-4), sign: sign(n) })
                .collect(),
            ExampleKind::KnappPlates => (1..=n_max)
                .map(|n| Piece::Plate {
                    center: -(n as f64) * step,
                    half_width: 2f64.powf(-(self.j as f64) / 2.0 - 2.0),
                    half_thickness: self.dyadic(-4),
                    sign: sign(n),
                })
                .collect(),
            // Shell radii 1 + n·2^{−j}, matching the times t_n = 1 + n·2^{−j}.
            ExampleKind::AlternatingShells => (1..=n_max)
                .map(|n| {
                    let c = 1.0 + n as f64 * step;
                    Piece::Shell { inner: c - self.dyadic(-2), outer: c + self.dyadic(-2), sign: sign(n) }
                })
                .collect(),
        })
    }

    /// The region over which the lower bound is evaluated.
    pub fn eval_region(&self) -> EvalRegion {
        let d = self.d as f64;
        match self.kind {
            ExampleKind::Stein => EvalRegion::Annulus { inner: 1.0, outer: 2.0 },
            ExampleKind::Shell0 => EvalRegion::Annulus { inner: 0.0, outer: self.dyadic(-2) },
            ExampleKind::Knapp => {
                EvalRegion::Cylinder { radius: 2f64.powf(-(self.j as f64) / 2.0), lo: 1.0, hi: 2.0 }
            }
            ExampleKind::Disks => EvalRegion::Cylinder { radius: 1.0 / (4.0 * d), lo: 1.0, hi: 1.5 },
            ExampleKind::KnappPlates => {
                EvalRegion::Cylinder { radius: 2f64.powf(-(self.j as f64) / 2.0 - 2.0), lo: 1.0, hi: 1.5 }
            }
            ExampleKind::AlternatingShells => EvalRegion::Annulus { inner: 0.0, outer: self.dyadic(-5) },
        }
    }
}

/// `A_t f_j` at the point with `|x'| = xp`, `x_d = xd`.
pub fn sphere_average(pieces: &[Piece], d: usize, xp: f64, xd: f64, t: f64) -> f64 {
    pieces.iter().map(|p| p.sphere_average(d, xp, xd, t)).sum()
}

/// Same, at an arbitrary point of `R^d`.
pub fn sphere_average_at(pieces: &[Piece], x: &[f64], t: f64) -> f64 {
    let d = x.len();
    let xp = x[..d - 1].iter().map(|v| v * v).sum::<f64>().sqrt();
    sphere_average(pieces, d, xp, x[d - 1], t)
}

/// `‖f_j‖_p`, exactly (the pieces have disjoint supports).
pub fn example_norm(pieces: &[Piece], d: usize, p: f64) -> Result<f64> {
    check_exponent(p, "p")?;
    if p.is_infinite() {
        return Ok(pieces.iter().map(|q| q.sup(d)).fold(0.0, f64::max));
    }
    Ok(pieces.iter().map(|q| q.power_integral(d, p)).sum::<f64>().powf(1.0 / p))
}

/// Rasterises `f_j` on `grid` (point samples; Stein's singularity is capped
/// at one cell). `Unresolvable` unless `2^{−j−4} ≥ 2h` and the support fits
/// in the box.
pub fn generate(spec: &ExampleSpec, grid: GridSpec) -> Result<GridFunction> {
    if spec.d != grid.d {
        return Err(Error::ShapeMismatch(format!("example in d = {}, grid in d = {}", spec.d, grid.d)));
    }
    let h = grid.h();
    if spec.dyadic(-4) < 2.0 * h {
        return Err(Error::Unresolvable(format!(
            "j = {} needs h ≤ 2^(−j−5) = {:e}, grid has h = {h:e}",
            spec.j,
            spec.dyadic(-5)
        )));
    }
    let pieces = spec.pieces()?;
    let extent = pieces.iter().map(Piece::extent).fold(0.0, f64::max);
    if extent >= grid.l - h {
        return Err(Error::Unresolvable(format!("support reaches {extent}, box half-width is {}", grid.l)));
    }
    Ok(GridFunction::from_real_fn(grid, |y| pieces.iter().map(|p| p.value(y, h)).sum()))
}

fn inv(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

/// Predicted exponent of `2^j` in the lower bound for the ratio, with
/// `N = 2^{j−2}` (for Knapp, `δ = 2^{−j/2}`).
pub fn predicted_slope(kind: ExampleKind, d: usize, p: f64, q: f64, r: f64) -> Result<f64> {
    check_exponent(p, "p")?;
    check_exponent(q, "q")?;
    check_exponent(r, "r")?;
    let (ip, iq, ir, d) = (inv(p), inv(q), inv(r), d as f64);
    Ok(match kind {
        ExampleKind::Stein => {
            return Err(Error::NoPrediction("Stein's example diverges pointwise; there is no rate".into()))
        }
        ExampleKind::Shell0 => ip - d * iq,
        ExampleKind::Knapp => ((d + 1.0) * ip - (d - 1.0) * (1.0 + iq)) / 2.0,
        ExampleKind::Disks => ir - (d - 1.0) * (1.0 - ip),
        ExampleKind::KnappPlates => ir - (d - 1.0) / 2.0 * (iq + 1.0 - ip),
        ExampleKind::AlternatingShells => ir - d * iq,
    })
}

/// Uniform samples of `[1, 2]` per `j`: `max(129, 2^{j+5} + 1)`, i.e. at
/// least four samples across the thinnest feature (`2^{−j−3}`).
pub fn default_samples(j: u32) -> usize {
    ((1usize << (j + 5).min(40)) + 1).max(129)
}

/// Number of midpoint nodes per direction of the evaluation region.
pub const REGION_NODES: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingConfig {
    pub kind: ExampleKind,
    pub d: usize,
    pub js: Vec<u32>,
    #[serde(with = "crate::serde_exponent")]
    pub p: f64,
    #[serde(with = "crate::serde_exponent")]
    pub q: f64,
    #[serde(with = "crate::serde_exponent")]
    pub r: f64,
    /// Time samples on `[1, 2]`; defaults to [`default_samples`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub kind: ExampleKind,
    pub d: usize,
    #[serde(with = "crate::serde_exponent")]
    pub p: f64,
    #[serde(with = "crate::serde_exponent")]
    pub q: f64,
    #[serde(with = "crate::serde_exponent")]
    pub r: f64,
    pub js: Vec<u32>,
    /// `‖V_r^I A f_j‖_{L^q(E_j)}` per `j`.
    pub numerators: Vec<f64>,
    /// `‖f_j‖_p` per `j`.
    pub denominators: Vec<f64>,
    pub ratios: Vec<f64>,
    pub slope: f64,
    pub predicted: Option<f64>,
    /// `slope ≥ predicted − 0.2`; `None` without a prediction.
    pub pass: Option<bool>,
}

/// `‖V_r A f‖_{L^q}` over the nodes of a region, with `A_t` sampled at
/// `times`.
pub fn variation_lq(pieces: &[Piece], d: usize, nodes: &[(f64, f64, f64)], times: &[f64], q: f64, r: f64) -> f64 {
    let values: Vec<(f64, f64)> = nodes
        .par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(path, scratch), &(xp, xd, w)| {
                path.clear();
                path.extend(times.iter().map(|&t| Complex64::new(sphere_average(pieces, d, xp, xd, t), 0.0)));
                (variation_unchecked(path, r, scratch), w)
            },
        )
        .collect();
    if q.is_infinite() {
        values.iter().map(|v| v.0).fold(0.0, f64::max)
    } else {
        values.iter().map(|(v, w)| w * v.powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

/// Largest `j` [`run_scaling`] accepts: `2^{j+5}` time samples against
/// `2^{j−2}` components is already ~10⁹ sphere measures per node set.
pub const MAX_SCALING_J: u32 = 10;

/// Runs the family over `cfg.js` and fits the `log₂` growth exponent.
pub fn run_scaling(cfg: &ScalingConfig) -> Result<ScalingReport> {
    check_exponent(cfg.p, "p")?;
    check_exponent(cfg.q, "q")?;
    check_exponent(cfg.r, "r")?;
    if cfg.js.len() < 4 {
        return Err(Error::ShapeMismatch("the slope fit needs at least four values of j".into()));
    }
    if cfg.samples.is_some_and(|m| m < 2) {
        return Err(Error::ShapeMismatch("need at least two time samples".into()));
    }
    for &j in &cfg.js {
        if j > MAX_SCALING_J {
            return Err(Error::Unresolvable(format!("j = {j} exceeds the sampling budget (j ≤ {MAX_SCALING_J})")));
        }
        // Stein's density varies on scale 2^{−j} only near the origin; every
        // other family has features 2^{−j−1} thick or thinner in `t`.
        if let (Some(m), false) = (cfg.samples, cfg.kind == ExampleKind::Stein) {
            if ((m - 1) as f64) < 2f64.powi(j as i32 + 3) {
                return Err(Error::Unresolvable(format!(
                    "{m} time samples cannot resolve width-2^-{} features at j = {j}; need at least {}",
                    j + 1,
                    (1u64 << (j + 3)) + 1
                )));
            }
        }
    }
    let mut numerators = Vec::with_capacity(cfg.js.len());
    let mut denominators = Vec::with_capacity(cfg.js.len());
    for &j in &cfg.js {
        let spec = ExampleSpec::new(cfg.kind, cfg.d, j)?;
        let pieces = spec.pieces()?;
        let m = cfg.samples.unwrap_or_else(|| default_samples(j));
        let times: Vec<f64> = (0..m).map(|i| 1.0 + i as f64 / (m - 1) as f64).collect();
        let nodes = spec.eval_region().nodes(cfg.d, REGION_NODES);
        let num = variation_lq(&pieces, cfg.d, &nodes, &times, cfg.q, cfg.r);
        let den = example_norm(&pieces, cfg.d, cfg.p)?;
        if !(num > 0.0 && den > 0.0) {
            return Err(Error::DegenerateInput(format!("{} at j = {j}: ratio {num} / {den}", cfg.kind)));
        }
        numerators.push(num);
        denominators.push(den);
    }
    let ratios: Vec<f64> = numerators.iter().zip(&denominators).map(|(a, b)| a / b).collect();
    let js: Vec<i32> = cfg.js.iter().map(|&j| j as i32).collect();
    let slope = log2_slope(&js, &ratios);
    let predicted = match predicted_slope(cfg.kind, cfg.d, cfg.p, cfg.q, cfg.r) {
        Ok(v) => Some(v),
        Err(Error::NoPrediction(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(ScalingReport {
        kind: cfg.kind,
        d: cfg.d,
        p: cfg.p,
        q: cfg.q,
        r: cfg.r,
        js: cfg.js.clone(),
        numerators,
        denominators,
        ratios,
        slope,
        predicted,
        pass: predicted.map(|pred| slope >= pred - SLOPE_TOLERANCE),
    })
}
