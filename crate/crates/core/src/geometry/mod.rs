//! Type-set polygons for `V_r^I A` in the `(1/p, 1/q)` square.
//!
//! All vertices and edge coefficients are exact rationals; floating point
//! only appears when a query point is classified or a figure is emitted.

mod export;

pub use export::{from_svg_coords, region_json, region_svg, svg_vertices, to_svg_coords};

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Rational = Ratio<i64>;

/// Distance in the `(1/p, 1/q)` plane within which a query counts as lying
/// on an edge or vertex.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn qi(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn to_f64(x: Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// A point `(1/p, 1/q)` of the closed unit square.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentPoint {
    pub inv_p: f64,
    pub inv_q: f64,
}

impl ExponentPoint {
    pub fn new(inv_p: f64, inv_q: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && (0.0..=1.0).contains(&v);
        if !ok(inv_p) || !ok(inv_q) {
            return Err(Error::InvalidExponent(format!(
                "(1/p, 1/q) = ({inv_p}, {inv_q}) is outside the unit square"
            )));
        }
        Ok(Self { inv_p, inv_q })
    }

    /// Builds the point from Lebesgue exponents `p, q ∈ [1, ∞]`.
    pub fn from_exponents(p: f64, q: f64) -> Result<Self> {
        let inv = |e: f64, name: &str| {
            if e.is_nan() || e < 1.0 {
                Err(Error::InvalidExponent(format!("{name} = {e} must lie in [1, ∞]")))
            } else if e.is_infinite() {
                Ok(0.0)
            } else {
                Ok(1.0 / e)
            }
        };
        Self::new(inv(p, "p")?, inv(q, "q")?)
    }
}

/// Exact counterpart of [`ExponentPoint`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    pub inv_p: Rational,
    pub inv_q: Rational,
}

impl RationalPoint {
    pub fn new(inv_p: Rational, inv_q: Rational) -> Self {
        Self { inv_p, inv_q }
    }

    pub fn to_f64(self) -> ExponentPoint {
        ExponentPoint { inv_p: to_f64(self.inv_p), inv_q: to_f64(self.inv_q) }
    }
}

/// The variation exponent `r ∈ [1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariationExponent {
    Finite(Rational),
    Infinite,
}

impl VariationExponent {
    /// `1/r`, zero for `r = ∞`.
    pub fn reciprocal(self) -> Rational {
        match self {
            Self::Finite(r) => r.recip(),
            Self::Infinite => Rational::zero(),
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Self::Finite(r) => to_f64(r),
            Self::Infinite => f64::INFINITY,
        }
    }

    fn gt(self, other: Rational) -> bool {
        match self {
            Self::Finite(r) => r > other,
            Self::Infinite => true,
        }
    }
}

impl fmt::Display for VariationExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Self::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for VariationExponent {
    type Err = Error;

    /// Accepts `inf`, integers, fractions `a/b` and finite decimals, all
    /// converted exactly.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
            return Ok(Self::Infinite);
        }
        parse_rational(s).map(Self::Finite)
    }
}

/// Parses `a/b`, an integer, or a plain decimal into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("cannot read {s:?} as an exact rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if frac_part.len() > 12 {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num: i64 = digits.parse().map_err(|_| bad())?;
    let den = 10i64.pow(frac_part.len() as u32);
    let r = Rational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// Parameters `(d, r)` selecting a boundedness regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegionSpec {
    pub d: u32,
    pub r: VariationExponent,
}

impl RegionSpec {
    pub fn new(d: u32, r: VariationExponent) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidExponent(format!("dimension d = {d} must be at least 2")));
        }
        if let VariationExponent::Finite(r) = r {
            if r < Rational::one() {
                return Err(Error::InvalidExponent(format!("r = {r} must be at least 1")));
            }
        }
        if d > 1_000 {
            return Err(Error::InvalidExponent(format!("dimension d = {d} is unreasonably large")));
        }
        Ok(Self { d, r })
    }

    pub fn finite(d: u32, r: Rational) -> Result<Self> {
        Self::new(d, VariationExponent::Finite(r))
    }

    /// Threshold `(d² + 1) / (d(d − 1))`, the reciprocal of the first
    /// coordinate of `Q_4`.
    pub fn large_r_threshold(d: u32) -> Rational {
        let d = d as i64;
        q(d * d + 1, d * (d - 1))
    }

    /// Threshold `d / (d − 1)`.
    pub fn small_r_threshold(d: u32) -> Rational {
        let d = d as i64;
        q(d, d - 1)
    }

    pub fn regime(&self) -> Result<Regime> {
        let d = self.d;
        if d == 2 {
            let two = qi(2);
            return match self.r {
                r if r.gt(q(5, 2)) => Ok(Regime::D2LargeR),
                r if r.gt(two) => Ok(Regime::D2MidR),
                VariationExponent::Finite(r) if r < two => Ok(Regime::Empty),
                _ => Err(Error::UnsupportedRegime(
                    "d = 2, r = 2: the endpoint case is not settled".into(),
                )),
            };
        }
        if self.r.gt(Self::large_r_threshold(d)) {
            return Ok(Regime::PentagonLargeR);
        }
        if self.r.gt(Self::small_r_threshold(d)) {
            return Ok(Regime::PentagonMidR);
        }
        if d >= 4 {
            return Ok(Regime::QuadSmallR);
        }
        // d = 3 and r ≤ 3/2
        if self.r.gt(q(4, 3)) {
            Ok(Regime::QuadSmallR)
        } else {
            Err(Error::UnsupportedRegime(format!(
                "d = 3, r = {}: the range 1 ≤ r ≤ 4/3 is conjectural",
                self.r
            )))
        }
    }
}

/// Which polygon shape a `(d, r)` pair produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    PentagonLargeR,
    PentagonMidR,
    QuadSmallR,
    D2LargeR,
    D2MidR,
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MappingKind {
    StrongType,
    RestrictedStrongType,
    RestrictedWeakType,
    Unbounded,
    OpenProblem,
}

/// Outcome of [`classify`]: the mapping property plus a tag naming the
/// boundary piece (or interior/exterior) that decided it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingStatus {
    pub kind: MappingKind,
    pub source: String,
}

impl MappingStatus {
    fn new(kind: MappingKind, source: impl Into<String>) -> Self {
        Self { kind, source: source.into() }
    }
}

/// The line `a·(1/p) + b·(1/q) = c`. Oriented so that the polygon lies in
/// `a·(1/p) + b·(1/q) ≤ c` once attached to a [`RegionPolygon`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineEquation {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl LineEquation {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        Self { a, b, c }
    }

    /// `a·x + b·y − c`, exact.
    pub fn residual(&self, p: RationalPoint) -> Rational {
        self.a * p.inv_p + self.b * p.inv_q - self.c
    }

    pub fn residual_f64(&self, p: ExponentPoint) -> f64 {
        to_f64(self.a) * p.inv_p + to_f64(self.b) * p.inv_q - to_f64(self.c)
    }

    /// Signed Euclidean distance (positive on the `> c` side).
    pub fn signed_distance(&self, p: ExponentPoint) -> f64 {
        let (a, b) = (to_f64(self.a), to_f64(self.b));
        self.residual_f64(p) / (a * a + b * b).sqrt()
    }

    fn negated(self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    /// All names of this point; coincident vertices are merged, e.g.
    /// `["P(r)", "Q4(r)", "Q4"]` at the degenerate threshold.
    pub labels: Vec<String>,
    pub point: RationalPoint,
    pub status: MappingStatus,
}

impl Vertex {
    pub fn label(&self) -> String {
        self.labels.join("=")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub line: LineEquation,
    /// Status of the open segment strictly between the endpoints.
    pub status: MappingStatus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionPolygon {
    pub spec: RegionSpec,
    pub regime: Regime,
    /// Counter-clockwise in the `(1/p, 1/q)` plane.
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl RegionPolygon {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Looks a vertex up by any of its labels.
    pub fn vertex(&self, label: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.labels.iter().any(|l| l == label))
    }

    /// Closed-polygon membership with boundary slack `tol`.
    pub fn contains_closed(&self, pt: ExponentPoint, tol: f64) -> bool {
        !self.is_empty() && self.edges.iter().all(|e| e.line.signed_distance(pt) <= tol)
    }

    /// Strict interior membership, `tol` away from every edge.
    pub fn contains_interior(&self, pt: ExponentPoint, tol: f64) -> bool {
        !self.is_empty() && self.edges.iter().all(|e| e.line.signed_distance(pt) < -tol)
    }

    /// Euclidean distance from `pt` to the polygon boundary.
    pub fn boundary_distance(&self, pt: ExponentPoint) -> f64 {
        self.edges
            .iter()
            .map(|e| {
                segment_distance(
                    pt,
                    self.vertices[e.from].point.to_f64(),
                    self.vertices[e.to].point.to_f64(),
                )
            })
            .fold(f64::INFINITY, f64::min)
    }
}

fn segment_distance(p: ExponentPoint, a: ExponentPoint, b: ExponentPoint) -> f64 {
    let (dx, dy) = (b.inv_p - a.inv_p, b.inv_q - a.inv_q);
    let len2 = dx * dx + dy * dy;
    let s = if len2 == 0.0 {
        0.0
    } else {
        (((p.inv_p - a.inv_p) * dx + (p.inv_q - a.inv_q) * dy) / len2).clamp(0.0, 1.0)
    };
    let (ex, ey) = (a.inv_p + s * dx - p.inv_p, a.inv_q + s * dy - p.inv_q);
    (ex * ex + ey * ey).sqrt()
}

/// Parameter along segment `a → b` of the projection of `p`.
fn segment_parameter(p: ExponentPoint, a: ExponentPoint, b: ExponentPoint) -> f64 {
    let (dx, dy) = (b.inv_p - a.inv_p, b.inv_q - a.inv_q);
    ((p.inv_p - a.inv_p) * dx + (p.inv_q - a.inv_q) * dy) / (dx * dx + dy * dy)
}

struct RawVertex {
    label: &'static str,
    point: RationalPoint,
    status: MappingStatus,
}

struct RawEdge {
    line: LineEquation,
    status: MappingStatus,
}

use MappingKind::*;

/// The closed type-set polygon for `spec`.
pub fn region(spec: RegionSpec) -> Result<RegionPolygon> {
    let regime = spec.regime()?;
    let d = spec.d as i64;
    let dm1 = d - 1;
    let inv_r = spec.r.reciprocal();
    let pt = |x: Rational, y: Rational| RationalPoint::new(x, y);
    let st = MappingStatus::new;

    // Edge lines, written in the form `a·(1/p) + b·(1/q) = c`.
    let diagonal = LineEquation::new(qi(1), qi(-1), qi(0));
    let lower = LineEquation::new(qi(0), qi(1), inv_r / qi(d)); // 1/q = 1/(dr)
    let vertical_q2q3 = LineEquation::new(qi(1), qi(0), q(dm1, d)); // 1/p = (d-1)/d
    let knapp = LineEquation::new(q(d + 1, dm1), qi(-1), qi(1)); // 1/q = (d+1)/(d-1)·1/p − 1
    let ray_q4 = LineEquation::new(qi(1), qi(-d), qi(0)); // 1/q = 1/(dp)
    // 1/q = 1/p + 2/(r(d−1)) − 1
    let plates = LineEquation::new(qi(1), qi(-1), qi(1) - qi(2) * inv_r / qi(dm1));
    // 1/p = 1 − 1/(r(d−1))
    let disks = LineEquation::new(qi(1), qi(0), qi(1) - inv_r / qi(dm1));

    let q1r = pt(inv_r / qi(d), inv_r / qi(d));
    let q2 = pt(q(dm1, d), q(dm1, d));
    let q3 = pt(q(dm1, d), q(1, d));
    let q4 = pt(q(d * dm1, d * d + 1), q(dm1, d * d + 1));
    let q4r = pt(qi(1) - qi(d + 1) * inv_r / qi(d * dm1), inv_r / qi(d));

    let (raw_vertices, raw_edges): (Vec<RawVertex>, Vec<RawEdge>) = match regime {
        Regime::Empty => (vec![], vec![]),
        Regime::PentagonLargeR => {
            let tag = "large-r pentagon";
            let p_r = pt(inv_r, inv_r / qi(d));
            (
                vec![
                    RawVertex { label: "Q1(r)", point: q1r, status: st(StrongType, format!("{tag}: closed edge [P(r),Q1(r)]")) },
                    RawVertex { label: "P(r)", point: p_r, status: st(StrongType, format!("{tag}: closed edge [P(r),Q1(r)]")) },
                    RawVertex { label: "Q4", point: q4, status: st(RestrictedWeakType, format!("{tag}: vertex Q4")) },
                    RawVertex { label: "Q3", point: q3, status: st(RestrictedWeakType, format!("{tag}: vertex Q3")) },
                    RawVertex { label: "Q2", point: q2, status: st(RestrictedStrongType, format!("{tag}: half-open edge [Q2,Q3)")) },
                ],
                vec![
                    RawEdge { line: lower, status: st(StrongType, format!("{tag}: closed edge [P(r),Q1(r)]")) },
                    RawEdge { line: ray_q4, status: st(StrongType, format!("{tag}: half-open edge [P(r),Q4)")) },
                    RawEdge { line: knapp, status: st(StrongType, format!("{tag}: open edge (Q4,Q3)")) },
                    RawEdge { line: vertical_q2q3, status: st(RestrictedStrongType, format!("{tag}: half-open edge [Q2,Q3)")) },
                    RawEdge { line: diagonal, status: st(StrongType, format!("{tag}: half-open edge [Q1(r),Q2)")) },
                ],
            )
        }
        Regime::PentagonMidR => {
            let tag = "intermediate-r pentagon";
            let p_r = pt(inv_r, (qi(d + 1) * inv_r - qi(dm1) * qi(1)) / qi(dm1));
            (
                vec![
                    RawVertex { label: "Q1(r)", point: q1r, status: st(StrongType, format!("{tag}: half-open edge (Q4(r),Q1(r)]")) },
                    RawVertex { label: "Q4(r)", point: q4r, status: st(OpenProblem, format!("{tag}: closed edge [Q4(r),P(r)] left open")) },
                    RawVertex { label: "P(r)", point: p_r, status: st(OpenProblem, format!("{tag}: closed edge [Q4(r),P(r)] left open")) },
                    RawVertex { label: "Q3", point: q3, status: st(RestrictedWeakType, format!("{tag}: vertex Q3")) },
                    RawVertex { label: "Q2", point: q2, status: st(RestrictedStrongType, format!("{tag}: half-open edge [Q2,Q3)")) },
                ],
                vec![
                    RawEdge { line: lower, status: st(StrongType, format!("{tag}: half-open edge (Q4(r),Q1(r)]")) },
                    RawEdge { line: plates, status: st(OpenProblem, format!("{tag}: closed edge [Q4(r),P(r)] left open")) },
                    RawEdge { line: knapp, status: st(OpenProblem, format!("{tag}: half-open edge [P(r),Q3) left open")) },
                    RawEdge { line: vertical_q2q3, status: st(RestrictedStrongType, format!("{tag}: half-open edge [Q2,Q3)")) },
                    RawEdge { line: diagonal, status: st(StrongType, format!("{tag}: half-open edge [Q1(r),Q2)")) },
                ],
            )
        }
        Regime::QuadSmallR => {
            let tag = "small-r quadrangle";
            let rd1 = inv_r / qi(dm1); // 1/(r(d−1))
            let q2r = pt(qi(1) - rd1, qi(1) - rd1);
            let q3r = pt(qi(1) - rd1, rd1);
            let r_is_one = spec.r == VariationExponent::Finite(Rational::one());
            let (q3_status, q2_status, q2q3_status) = if r_is_one {
                (
                    st(RestrictedWeakType, format!("{tag}: vertex Q3(1)")),
                    st(RestrictedStrongType, format!("{tag}: half-open edge [Q2(1),Q3(1))")),
                    st(RestrictedStrongType, format!("{tag}: half-open edge [Q2(1),Q3(1))")),
                )
            } else {
                (
                    st(OpenProblem, format!("{tag}: closed edge [Q3(r),Q4(r)] left open")),
                    st(OpenProblem, format!("{tag}: closed edge [Q2(r),Q3(r)] left open")),
                    st(OpenProblem, format!("{tag}: closed edge [Q2(r),Q3(r)] left open")),
                )
            };
            (
                vec![
                    RawVertex { label: "Q1(r)", point: q1r, status: st(StrongType, format!("{tag}: half-open edge (Q4(r),Q1(r)]")) },
                    RawVertex { label: "Q4(r)", point: q4r, status: st(OpenProblem, format!("{tag}: closed edge [Q3(r),Q4(r)] left open")) },
                    RawVertex { label: "Q3(r)", point: q3r, status: q3_status },
                    RawVertex { label: "Q2(r)", point: q2r, status: q2_status },
                ],
                vec![
                    RawEdge { line: lower, status: st(StrongType, format!("{tag}: half-open edge (Q4(r),Q1(r)]")) },
                    RawEdge { line: plates, status: st(OpenProblem, format!("{tag}: closed edge [Q3(r),Q4(r)] left open")) },
                    RawEdge { line: disks, status: q2q3_status },
                    RawEdge { line: diagonal, status: st(StrongType, format!("{tag}: half-open edge [Q1(r),Q2(r))")) },
                ],
            )
        }
        Regime::D2LargeR => {
            let tag = "planar quadrangle, r > 5/2";
            let p_r = pt(inv_r, inv_r / qi(2));
            let open = |what: &str| st(OpenProblem, format!("{tag}: {what} not covered"));
            (
                vec![
                    RawVertex { label: "Q1(r)", point: q1r, status: open("vertex Q1(r)") },
                    RawVertex { label: "P(r)", point: p_r, status: open("vertex P(r)") },
                    RawVertex { label: "Q4", point: q4, status: open("vertex Q4") },
                    RawVertex { label: "Q2", point: q2, status: open("vertex Q2=Q3") },
                ],
                vec![
                    RawEdge { line: lower, status: open("edge [P(r),Q1(r)]") },
                    RawEdge { line: ray_q4, status: open("edge [P(r),Q4]") },
                    RawEdge { line: knapp, status: open("edge [Q4,Q3]") },
                    RawEdge { line: diagonal, status: st(StrongType, format!("{tag}: open edge (Q1(r),Q2)")) },
                ],
            )
        }
        Regime::D2MidR => {
            let tag = "planar quadrangle, 2 < r ≤ 5/2";
            let p_r = pt(inv_r, qi(3) * inv_r - qi(1));
            let open = |what: &str| st(OpenProblem, format!("{tag}: {what} not covered"));
            (
                vec![
                    RawVertex { label: "Q1(r)", point: q1r, status: open("vertex Q1(r)") },
                    RawVertex { label: "Q4(r)", point: q4r, status: open("vertex Q4(r)") },
                    RawVertex { label: "P(r)", point: p_r, status: open("vertex P(r)") },
                    RawVertex { label: "Q2", point: q2, status: open("vertex Q2=Q3") },
                ],
                vec![
                    RawEdge { line: lower, status: open("edge [Q4(r),Q1(r)]") },
                    RawEdge { line: plates, status: open("edge [Q4(r),P(r)]") },
                    RawEdge { line: knapp, status: open("edge [P(r),Q3]") },
                    RawEdge { line: diagonal, status: st(StrongType, format!("{tag}: open edge (Q1(r),Q2)")) },
                ],
            )
        }
    };

    Ok(assemble(spec, regime, raw_vertices, raw_edges))
}

/// Merges coincident consecutive vertices, drops zero-length edges, adds
/// alias labels and orients every edge line towards the interior.
fn assemble(
    spec: RegionSpec,
    regime: Regime,
    raw_vertices: Vec<RawVertex>,
    raw_edges: Vec<RawEdge>,
) -> RegionPolygon {
    if raw_vertices.is_empty() {
        return RegionPolygon { spec, regime, vertices: vec![], edges: vec![] };
    }
    let n = raw_vertices.len();
    let extra_labels = |label: &str| -> Vec<String> {
        let mut v = vec![label.to_string()];
        if matches!(regime, Regime::D2LargeR | Regime::D2MidR) && label == "Q2" {
            v.push("Q3".into());
        }
        v
    };
    let mut vertices: Vec<Vertex> = Vec::with_capacity(n);
    let mut edges: Vec<Edge> = Vec::with_capacity(n);
    // Raw edge i joins raw vertex i to raw vertex i+1 (cyclically).
    let mut pending_edges: Vec<(usize, RawEdge)> = Vec::new();
    for (rv, re) in raw_vertices.into_iter().zip(raw_edges) {
        let merged = vertices.last_mut().filter(|v| v.point == rv.point);
        if let Some(last) = merged {
            last.labels.extend(extra_labels(rv.label));
            if rv.status.kind == OpenProblem {
                last.status = rv.status;
            }
            // The edge into this vertex had zero length; drop it.
            pending_edges.pop();
        } else {
            vertices.push(Vertex { labels: extra_labels(rv.label), point: rv.point, status: rv.status });
        }
        pending_edges.push((vertices.len() - 1, re));
    }
    // Wrap-around merge of last vertex with the first.
    if vertices.len() > 1 && vertices.first().map(|v| v.point) == vertices.last().map(|v| v.point) {
        let last = vertices.pop().expect("non-empty");
        vertices[0].labels.extend(last.labels);
        if last.status.kind == OpenProblem {
            vertices[0].status = last.status;
        }
        pending_edges.pop();
        if let Some(e) = pending_edges.last_mut() {
            e.0 = vertices.len() - 1;
        }
    }
    let m = vertices.len();
    let centroid = {
        let mut sx = Rational::zero();
        let mut sy = Rational::zero();
        for v in &vertices {
            sx += v.point.inv_p;
            sy += v.point.inv_q;
        }
        RationalPoint::new(sx / qi(m as i64), sy / qi(m as i64))
    };
    for (from, re) in pending_edges {
        let to = (from + 1) % m;
        let mut line = re.line;
        if line.residual(centroid).is_positive() {
            line = line.negated();
        }
        edges.push(Edge { from, to, line, status: re.status });
    }
    RegionPolygon { spec, regime, vertices, edges }
}

/// Classifies the mapping property of `V_r^I A` at `pt`.
pub fn classify(spec: RegionSpec, pt: ExponentPoint) -> Result<MappingStatus> {
    let poly = region(spec)?;
    Ok(classify_in(&poly, pt))
}

/// Classification against an already built polygon.
pub fn classify_in(poly: &RegionPolygon, pt: ExponentPoint) -> MappingStatus {
    if poly.is_empty() {
        return MappingStatus::new(Unbounded, "no exponent pair is admissible for this (d, r)");
    }
    for v in &poly.vertices {
        let p = v.point.to_f64();
        if (p.inv_p - pt.inv_p).hypot(p.inv_q - pt.inv_q) <= BOUNDARY_TOLERANCE {
            return v.status.clone();
        }
    }
    for e in &poly.edges {
        let a = poly.vertices[e.from].point.to_f64();
        let b = poly.vertices[e.to].point.to_f64();
        if e.line.signed_distance(pt).abs() <= BOUNDARY_TOLERANCE {
            let s = segment_parameter(pt, a, b);
            if (0.0..=1.0).contains(&s) {
                return e.status.clone();
            }
        }
    }
    if poly.contains_closed(pt, 0.0) {
        MappingStatus::new(StrongType, "interior")
    } else {
        MappingStatus::new(Unbounded, "exterior: a necessary condition fails")
    }
}

/// A closed half-plane `a·(1/p) + b·(1/q) ≤ c`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfPlane {
    pub name: &'static str,
    pub line: LineEquation,
}

impl HalfPlane {
    pub fn contains(&self, pt: ExponentPoint, tol: f64) -> bool {
        self.line.signed_distance(pt) <= tol
    }

    pub fn contains_exact(&self, pt: RationalPoint) -> bool {
        !self.line.residual(pt).is_positive()
    }
}

/// The seven necessary conditions derived from the counterexamples.
///
/// With `r = ∞` the three variation-specific constraints become trivial and
/// the intersection is the type set of the local maximal function.
pub fn necessary_halfplanes(spec: RegionSpec) -> Vec<HalfPlane> {
    let d = spec.d as i64;
    let dm1 = qi(d - 1);
    let inv_r = spec.r.reciprocal();
    let half = q(1, 2);
    vec![
        HalfPlane { name: "p <= q", line: LineEquation::new(qi(-1), qi(1), qi(0)) },
        HalfPlane { name: "p >= d/(d-1)", line: LineEquation::new(qi(1), qi(0), q(d - 1, d)) },
        HalfPlane { name: "d/q >= 1/p", line: LineEquation::new(qi(1), qi(-d), qi(0)) },
        HalfPlane {
            name: "1/q >= (d+1)/((d-1)p) - 1",
            line: LineEquation::new(q(d + 1, d - 1), qi(-1), qi(1)),
        },
        HalfPlane {
            name: "1/p <= 1 - 1/(r(d-1))",
            line: LineEquation::new(qi(1), qi(0), qi(1) - inv_r / dm1),
        },
        HalfPlane {
            name: "(d-1)/2 (1/q + 1/p') >= 1/r",
            line: LineEquation::new(dm1 * half, -dm1 * half, dm1 * half - inv_r),
        },
        HalfPlane { name: "d/q >= 1/r", line: LineEquation::new(qi(0), qi(-1), -inv_r / qi(d)) },
    ]
}

/// Whether `pt` satisfies every constraint in `planes` (with slack `tol`).
pub fn satisfies_all(planes: &[HalfPlane], pt: ExponentPoint, tol: f64) -> bool {
    planes.iter().all(|h| h.contains(pt, tol))
}

/// The maximal-function polygon (`r = ∞`) in dimension `d`.
pub fn maximal_region(d: u32) -> Result<RegionPolygon> {
    region(RegionSpec::new(d, VariationExponent::Infinite)?)
}

/// Region in which the sparse bound for the global operator is asserted:
/// `r > 2` and the interior of the corresponding polygon.
pub fn sparse_region_interior(spec: RegionSpec, pt: ExponentPoint) -> Result<bool> {
    if !spec.r.gt(qi(2)) {
        return Ok(false);
    }
    let poly = region(spec)?;
    Ok(poly.contains_interior(pt, BOUNDARY_TOLERANCE))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(d: u32, r: &str) -> RegionSpec {
        RegionSpec::new(d, r.parse().unwrap()).unwrap()
    }

    fn vp(poly: &RegionPolygon, label: &str) -> RationalPoint {
        poly.vertex(label).unwrap_or_else(|| panic!("missing {label}")).point
    }

    #[test]
    fn figure_one_vertices() {
        let poly = region(spec(4, "3")).unwrap();
        assert_eq!(poly.regime, Regime::PentagonLargeR);
        assert_eq!(vp(&poly, "P(r)"), RationalPoint::new(q(1, 3), q(1, 12)));
        assert_eq!(vp(&poly, "Q1(r)"), RationalPoint::new(q(1, 12), q(1, 12)));
        assert_eq!(vp(&poly, "Q2"), RationalPoint::new(q(3, 4), q(3, 4)));
        assert_eq!(vp(&poly, "Q3"), RationalPoint::new(q(3, 4), q(1, 4)));
        assert_eq!(vp(&poly, "Q4"), RationalPoint::new(q(12, 17), q(3, 17)));
        assert_eq!(poly.vertices.len(), 5);
    }

    #[test]
    fn degenerate_pentagon_in_three_dimensions() {
        let poly = region(spec(3, "5/3")).unwrap();
        assert_eq!(poly.regime, Regime::PentagonMidR);
        let p = vp(&poly, "P(r)");
        assert_eq!(p, RationalPoint::new(q(3, 5), q(1, 5)));
        assert_eq!(p, vp(&poly, "Q4(r)"));
        assert_eq!(poly.vertices.len(), 4);
    }

    #[test]
    fn planar_large_r() {
        let poly = region(spec(2, "5")).unwrap();
        assert_eq!(poly.regime, Regime::D2LargeR);
        assert_eq!(vp(&poly, "Q4"), RationalPoint::new(q(2, 5), q(1, 5)));
        assert_eq!(vp(&poly, "P(r)"), RationalPoint::new(q(1, 5), q(1, 10)));
        assert_eq!(vp(&poly, "Q1(r)"), RationalPoint::new(q(1, 10), q(1, 10)));
        assert_eq!(vp(&poly, "Q2"), vp(&poly, "Q3"));
        assert_eq!(vp(&poly, "Q2"), RationalPoint::new(q(1, 2), q(1, 2)));
    }

    #[test]
    fn planar_small_r_is_empty_and_r_two_unsupported() {
        assert_eq!(region(spec(2, "1.5")).unwrap().regime, Regime::Empty);
        assert!(matches!(region(spec(2, "2")), Err(Error::UnsupportedRegime(_))));
        assert!(matches!(region(spec(3, "4/3")), Err(Error::UnsupportedRegime(_))));
        assert!(matches!(region(spec(3, "1")), Err(Error::UnsupportedRegime(_))));
        assert_eq!(region(spec(3, "1.4")).unwrap().regime, Regime::QuadSmallR);
    }

    #[test]
    fn edge_equations_hold_at_endpoints() {
        for (d, r) in [(3, "3"), (4, "3"), (4, "11/8"), (4, "5/4"), (5, "1"), (3, "3/2"), (2, "5"), (2, "2.2"), (2, "5/2"), (3, "inf")] {
            let poly = region(spec(d, r)).unwrap();
            for e in &poly.edges {
                for idx in [e.from, e.to] {
                    assert!(e.line.residual(poly.vertices[idx].point).is_zero(), "d={d} r={r}");
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let s = spec(3, "3");
        assert_eq!(classify(s, ExponentPoint::new(2.0 / 3.0, 2.0 / 3.0).unwrap()).unwrap().kind, RestrictedStrongType);
        assert_eq!(classify(s, ExponentPoint::new(0.0, 0.0).unwrap()).unwrap().kind, Unbounded);
        let q4 = region(s).unwrap().vertex("Q4").unwrap().point.to_f64();
        assert_eq!(classify(s, q4).unwrap().kind, RestrictedWeakType);
        // (1/3, 1/9) lies on the closed lower edge [P(r), Q1(r)].
        assert_eq!(classify(s, ExponentPoint::new(1.0 / 3.0, 1.0 / 9.0).unwrap()).unwrap().kind, StrongType);
    }

    #[test]
    fn maximal_limit_collapses_lower_vertices() {
        let poly = region(spec(3, "inf")).unwrap();
        let origin = poly.vertex("P(r)").unwrap();
        assert_eq!(origin.point, RationalPoint::new(qi(0), qi(0)));
        assert!(origin.labels.contains(&"Q1(r)".to_string()));
        assert_eq!(poly.vertices.len(), 4);
    }

    #[test]
    fn parse_decimal_exactly() {
        assert_eq!(parse_rational("2.2").unwrap(), q(11, 5));
        assert_eq!(parse_rational("11/8").unwrap(), q(11, 8));
        assert_eq!("inf".parse::<VariationExponent>().unwrap(), VariationExponent::Infinite);
    }
}
