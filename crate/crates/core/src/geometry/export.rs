//! SVG and JSON renderings of a [`RegionPolygon`].

use std::fmt::Write as _;

use serde_json::{json, Value};

use super::{maximal_region, to_f64, MappingKind, RationalPoint, RegionPolygon};

/// Side of the unit square in SVG user units.
pub const SVG_SCALE: f64 = 400.0;
/// Margin around the unit square in SVG user units.
pub const SVG_MARGIN: f64 = 60.0;

/// Maps `(1/p, 1/q)` to SVG user coordinates (y axis pointing down).
pub fn to_svg_coords(inv_p: f64, inv_q: f64) -> (f64, f64) {
    (SVG_MARGIN + inv_p * SVG_SCALE, SVG_MARGIN + (1.0 - inv_q) * SVG_SCALE)
}

/// Inverse of [`to_svg_coords`].
pub fn from_svg_coords(x: f64, y: f64) -> (f64, f64) {
    ((x - SVG_MARGIN) / SVG_SCALE, 1.0 - (y - SVG_MARGIN) / SVG_SCALE)
}

fn kind_name(kind: MappingKind) -> &'static str {
    match kind {
        MappingKind::StrongType => "strong",
        MappingKind::RestrictedStrongType => "restricted-strong",
        MappingKind::RestrictedWeakType => "restricted-weak",
        MappingKind::Unbounded => "unbounded",
        MappingKind::OpenProblem => "open",
    }
}

fn point_json(label: &str, p: RationalPoint) -> Value {
    json!({
        "label": label,
        "inv_p_num": p.inv_p.numer(),
        "inv_p_den": p.inv_p.denom(),
        "inv_q_num": p.inv_q.numer(),
        "inv_q_den": p.inv_q.denom(),
        "inv_p": to_f64(p.inv_p),
        "inv_q": to_f64(p.inv_q),
    })
}

/// JSON description: regime, exact vertices and oriented edge lines.
pub fn region_json(poly: &RegionPolygon) -> Value {
    let vertices: Vec<Value> = poly
        .vertices
        .iter()
        .map(|v| {
            let mut obj = point_json(&v.label(), v.point);
            obj["labels"] = json!(v.labels);
            obj["status"] = json!(kind_name(v.status.kind));
            obj["source"] = json!(v.status.source);
            obj
        })
        .collect();
    let edges: Vec<Value> = poly
        .edges
        .iter()
        .map(|e| {
            json!({
                "from": poly.vertices[e.from].label(),
                "to": poly.vertices[e.to].label(),
                "a": [e.line.a.numer(), e.line.a.denom()],
                "b": [e.line.b.numer(), e.line.b.denom()],
                "c": [e.line.c.numer(), e.line.c.denom()],
                "status": kind_name(e.status.kind),
                "source": e.status.source,
            })
        })
        .collect();
    json!({
        "d": poly.spec.d,
        "r": poly.spec.r.to_string(),
        "regime": poly.regime,
        "vertices": vertices,
        "edges": edges,
    })
}

fn polygon_points(points: impl Iterator<Item = RationalPoint>) -> String {
    let mut s = String::new();
    for p in points {
        let (x, y) = to_svg_coords(to_f64(p.inv_p), to_f64(p.inv_q));
        let _ = write!(s, "{x:.10},{y:.10} ");
    }
    s.trim_end().to_string()
}

/// SVG figure in the style of the type-set diagrams: hatched interior,
/// dashed outline of the maximal-function quadrangle, labelled vertices.
///
/// Each vertex is drawn as a `<circle class="vertex">` whose centre encodes
/// the exact coordinates (10 decimals in user units) so the figure can be
/// read back with [`svg_vertices`].
pub fn region_svg(poly: &RegionPolygon) -> String {
    let size = SVG_SCALE + 2.0 * SVG_MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}" font-family="serif" font-size="14">"#
    );
    let _ = writeln!(
        s,
        r#"<defs><pattern id="hatch" width="8" height="8" patternUnits="userSpaceOnUse" patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="8" stroke="black" stroke-width="1"/></pattern></defs>"#
    );
    let _ = writeln!(
        s,
        r#"<title>d = {}, r = {}, regime {:?}</title>"#,
        poly.spec.d, poly.spec.r, poly.regime
    );

    // Unit square and axes.
    let (x0, y0) = to_svg_coords(0.0, 0.0);
    let (x1, y1) = to_svg_coords(1.0, 1.0);
    let _ = writeln!(
        s,
        r#"<rect class="square" x="{x0}" y="{y1}" width="{w}" height="{w}" fill="none" stroke="black" stroke-width="1"/>"#,
        w = x1 - x0
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">1/p</text>"#, x1, y0 + 30.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">1/q</text>"#, x0 - 10.0, y1 + 5.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">0</text>"#, x0 - 6.0, y0 + 16.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">1</text>"#, x1, y0 + 16.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">1</text>"#, x0 - 6.0, y1 + 5.0);

    if let Ok(outer) = maximal_region(poly.spec.d) {
        let pts = polygon_points(outer.vertices.iter().map(|v| v.point));
        let _ = writeln!(
            s,
            r#"<polygon class="maximal" points="{pts}" fill="none" stroke="black" stroke-width="1" stroke-dasharray="6 4"/>"#
        );
    }

    if !poly.is_empty() {
        let pts = polygon_points(poly.vertices.iter().map(|v| v.point));
        let _ = writeln!(
            s,
            r#"<polygon class="region" points="{pts}" fill="url(#hatch)" stroke="black" stroke-width="2"/>"#
        );
        for v in &poly.vertices {
            let (x, y) = to_svg_coords(to_f64(v.point.inv_p), to_f64(v.point.inv_q));
            let fill = match v.status.kind {
                MappingKind::StrongType => "black",
                _ => "white",
            };
            let _ = writeln!(
                s,
                r#"<circle class="vertex" data-label="{}" cx="{x:.10}" cy="{y:.10}" r="4" fill="{fill}" stroke="black"/>"#,
                v.label()
            );
            let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}">{}</text>"#, x + 7.0, y - 7.0, v.label());
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Reads back `(label, 1/p, 1/q)` for every vertex circle of an SVG
/// produced by [`region_svg`].
pub fn svg_vertices(svg: &str) -> Vec<(String, f64, f64)> {
    let attr = |line: &str, name: &str| -> Option<String> {
        let key = format!(" {name}=\"");
        let start = line.find(&key)? + key.len();
        let end = line[start..].find('"')? + start;
        Some(line[start..end].to_string())
    };
    svg.lines()
        .filter(|l| l.contains(r#"class="vertex""#))
        .filter_map(|l| {
            let label = attr(l, "data-label")?;
            let x: f64 = attr(l, "cx")?.parse().ok()?;
            let y: f64 = attr(l, "cy")?.parse().ok()?;
            let (ip, iq) = from_svg_coords(x, y);
            Some((label, ip, iq))
        })
        .collect()
}
