//! Acceptance suite: one PASS/FAIL line per criterion. Every reference
//! value is computed here from closed forms, independently of the library
//! code under test. Runtime limits are part of each criterion.
//!
//! The process exits 0 after reporting; set `SPHVAR_ACCEPTANCE_STRICT=1`
//! to exit 1 when any criterion fails.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphvar::counterexamples::{run_scaling, ExampleKind, ScalingConfig};
use sphvar::geometry::{region, ExponentPoint, RationalPoint, RegionSpec, VariationExponent};
use sphvar::operators::{operator_norm_probe, trial_inputs, ProbeConfig, ProbeNorm};
use sphvar::signal::{spherical_average_quadrature, spherical_average_spectral, sphere_profile, FnEval, GridFunction, GridSpec};
use sphvar::sparse::{bump_corpus, corpus_run, random_family_check, sharpness_run, sharpness_separation, DominationConfig};
use sphvar::variation::{variation_bruteforce, variation_exact, SampledPath};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

type Q = Ratio<i64>;

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn spec(d: u32, r: &str) -> RegionSpec {
    RegionSpec::new(d, r.parse().unwrap()).unwrap()
}

/// Variation oracle: DP against subset enumeration, bit for bit.
fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rs = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];
    let mut mismatches = 0;
    let mut compared = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=12);
        let values: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let path = SampledPath::new((0..n).map(|i| i as f64).collect(), values).unwrap();
        for &r in &rs {
            compared += 1;
            if variation_exact(&path, r).unwrap() != variation_bruteforce(&path, r).unwrap() {
                mismatches += 1;
            }
        }
    }
    outcome(mismatches == 0, format!("{mismatches} mismatches in {compared} comparisons (1000 paths × 5 exponents, exact equality)"))
}

/// Multiplier identities.
fn criterion_2() -> Outcome {
    let at_zero: Vec<f64> = (2..=4).map(|d| sphere_profile(d, 0.0)).collect();
    let zero_ok = at_zero.iter().all(|&v| (v - 1.0).abs() <= 1e-15);
    let mut sinc_err = 0.0f64;
    for k in 0..=100_000 {
        let z = k as f64 * 1e-3;
        let exact = if z == 0.0 { 1.0 } else { z.sin() / z };
        sinc_err = sinc_err.max((sphere_profile(3, z) - exact).abs());
    }
    let mut const_err = 0.0f64;
    for (d, n) in [(2, 64), (3, 32), (4, 16)] {
        let one = GridFunction::constant(GridSpec::new(d, n, 4.5).unwrap(), Complex64::new(1.0, 0.0));
        for t in [0.5, 1.0, 1.37, 2.0] {
            let a = spherical_average_spectral(&one, t).unwrap();
            const_err = const_err.max(a.values.iter().map(|v| (v - 1.0).norm()).fold(0.0, f64::max));
        }
    }
    outcome(
        zero_ok && sinc_err <= 1e-10 && const_err <= 1e-12,
        format!("m_d(0) = {at_zero:?}; max |m_3 − sin z/z| on [0,100] = {sinc_err:.2e} (≤ 1e-10); max |A_t 1 − 1| = {const_err:.2e} (≤ 1e-12)"),
    )
}

/// Spectral against quadrature averages of random trigonometric polynomials.
fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (d, n, kmax) in [(2usize, 256usize, 16i64), (3, 64, 8)] {
        let grid = GridSpec::new(d, n, 4.5).unwrap();
        let step = grid.frequency_step();
        for _ in 0..20 {
            let waves: Vec<(Vec<f64>, Complex64)> = (0..6)
                .map(|_| {
                    let xi = (0..d).map(|_| rng.gen_range(-kmax..=kmax) as f64 * step).collect();
                    (xi, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                })
                .collect();
            let f = |x: &[f64]| {
                waves.iter().map(|(xi, c)| c * Complex64::from_polar(1.0, xi.iter().zip(x).map(|(a, b)| a * b).sum())).sum::<Complex64>()
            };
            let g = GridFunction::from_fn(grid, f);
            let t = rng.gen_range(0.5..2.0);
            let spectral = spherical_average_spectral(&g, t).unwrap();
            let oracle = FnEval { dim: d, f };
            let (mut err, mut scale) = (0.0f64, 0.0f64);
            for _ in 0..8 {
                let idx: Vec<usize> = (0..d).map(|_| rng.gen_range(n / 4..3 * n / 4)).collect();
                let x: Vec<f64> = idx.iter().map(|&i| grid.coord(i)).collect();
                let quad = spherical_average_quadrature(&oracle, t, &x).unwrap();
                err = err.max((spectral.values[grid.ravel(&idx)] - quad).norm());
                scale = scale.max(quad.norm());
            }
            worst = worst.max(err / scale);
        }
    }
    outcome(worst <= 1e-3, format!("max relative ℓ∞ gap over 20 inputs in d = 2 (n = 256) and d = 3 (n = 64): {worst:.2e} (≤ 1e-3)"))
}

fn probe(d: usize, n: usize, l: f64, js: Vec<u32>, p: f64, q: f64, r: f64, norm: ProbeNorm) -> Vec<f64> {
    let grid = GridSpec::window(d, n, l).unwrap();
    let rep = operator_norm_probe(&ProbeConfig { grid, js, p, q, r, norm, trials: trial_inputs(1) }).unwrap();
    let mut out = vec![rep.slope];
    out.extend(rep.ratios);
    out
}

/// L² decay of the frequency pieces and of their time derivatives.
fn criterion_4() -> Outcome {
    let d = 3.0;
    // Parseval norms live on the torus, so a box of half-width 2.25 with
    // 128 points resolves |ξ| ≤ 64 (j = 6).
    let a = probe(3, 128, 2.25, (2..=6).collect(), 2.0, 2.0, 2.0, ProbeNorm::L2Parseval);
    let b = probe(3, 128, 2.25, (2..=6).collect(), 2.0, 2.0, 2.0, ProbeNorm::L2ParsevalDt);
    let (ta, tb) = (-(d - 1.0) / 2.0 + 0.15, -(d - 3.0) / 2.0 + 0.15);
    outcome(
        a[0] <= ta && b[0] <= tb,
        format!("d = 3, j ∈ [2,6]: slope {:.3} (≤ {ta:.2}); ∂_t slope {:.3} (≤ {tb:.2})", a[0], b[0]),
    )
}

/// Stein–Tomas decay at the restriction exponent.
fn criterion_5() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (d, n, js) in [(2usize, 512usize, (2..=7).collect::<Vec<u32>>()), (3, 128, (2..=5).collect())] {
        let df = d as f64;
        let qq = 2.0 * (df + 1.0) / (df - 1.0);
        let res = probe(d, n, 4.5, js.clone(), 2.0, qq, 2.0, ProbeNorm::Mixed);
        let target = -df / qq + 0.15;
        pass &= res[0] <= target;
        lines.push(format!(
            "d = {d} (n = {n}, j ∈ [{}, {}], q = {qq}): slope {:.3} (≤ {target:.3})",
            js[0],
            js[js.len() - 1],
            res[0]
        ));
    }
    outcome(pass, lines.join("; "))
}

fn scaling(kind: ExampleKind, d: usize, p: f64, q: f64, r: f64) -> (f64, Option<f64>) {
    let rep = run_scaling(&ScalingConfig { kind, d, js: vec![3, 4, 5, 6], p, q, r, samples: None }).unwrap();
    (rep.slope, rep.predicted)
}

/// Counterexample growth exponents.
fn criterion_6() -> Outcome {
    let mut pass = true;
    let mut lines = Vec::new();
    for d in [2usize, 3] {
        let df = d as f64;
        let shells: [(f64, f64, f64); 2] = if d == 2 { [(4.0, 4.0, 3.0), (2.0, 8.0, 1.5)] } else { [(4.0, 4.0, 3.0), (2.0, 6.0, 1.5)] };
        for (p, q, r) in shells {
            let expected = 1.0 / r - df / q;
            let (slope, predicted) = scaling(ExampleKind::AlternatingShells, d, p, q, r);
            let ok = slope >= expected - 0.2 && predicted.is_some_and(|v| (v - expected).abs() < 1e-12);
            pass &= ok;
            lines.push(format!("shells d={d} (p,q,r)=({p},{q},{r}): {slope:.3} vs {expected:.3}"));
        }
        for (p, q, r) in [(2.0, 2.0, 1.5), (1.5, 3.0, 1.2)] {
            let expected = 1.0 / r - (df - 1.0) / 2.0 * (1.0 / q + 1.0 - 1.0 / p);
            let (slope, predicted) = scaling(ExampleKind::KnappPlates, d, p, q, r);
            let ok = slope >= expected - 0.2 && predicted.is_some_and(|v| (v - expected).abs() < 1e-12);
            pass &= ok;
            lines.push(format!("plates d={d} (p,q,r)=({p},{q},{r}): {slope:.3} vs {expected:.3}"));
        }
    }
    outcome(pass, format!("slope ≥ prediction − 0.2, j ∈ [3,6]: {}", lines.join("; ")))
}

/// Necessary conditions written out from the counterexample exponents.
fn necessary(d: f64, inv_r: f64, x: f64, y: f64) -> bool {
    y <= x
        && x <= (d - 1.0) / d
        && d * y >= x
        && y >= (d + 1.0) / (d - 1.0) * x - 1.0
        && x <= 1.0 - inv_r / (d - 1.0)
        && (d - 1.0) / 2.0 * (y + 1.0 - x) >= inv_r
        && d * y >= inv_r
}

/// Region algebra.
fn criterion_7() -> Outcome {
    let specs = [
        (2, "3"), (2, "2.2"), (2, "inf"), (3, "3"), (3, "5/3"), (3, "1.6"), (3, "1.4"), (3, "inf"),
        (4, "3"), (4, "17/12"), (4, "1.2"), (4, "1"),
    ];
    let mut far = 0usize;
    let mut mismatched = 0usize;
    let mut regimes = std::collections::BTreeSet::new();
    for (d, r) in specs {
        let s = spec(d, r);
        let poly = region(s).unwrap();
        regimes.insert(format!("{:?}", poly.regime));
        let inv_r = s.r.reciprocal();
        let inv_r = *inv_r.numer() as f64 / *inv_r.denom() as f64;
        for i in 0..400 {
            for j in 0..400 {
                let (x, y) = ((i as f64 + 0.5) / 400.0, (j as f64 + 0.5) / 400.0);
                let pt = ExponentPoint::new(x, y).unwrap();
                if poly.contains_closed(pt, 0.0) != necessary(d as f64, inv_r, x, y) {
                    mismatched += 1;
                    if poly.boundary_distance(pt) > 1.5 / 400.0 {
                        far += 1;
                    }
                }
            }
        }
    }
    // Degenerate threshold r = (d²+1)/(d(d−1)): P(r) = Q4(r) = Q4.
    let mut degenerate = true;
    for d in [3i64, 4, 5] {
        let r = q(d * d + 1, d * (d - 1));
        let poly = region(RegionSpec::new(d as u32, VariationExponent::Finite(r)).unwrap()).unwrap();
        let q4 = RationalPoint::new(q(d * (d - 1), d * d + 1), q(d - 1, d * d + 1));
        let at = |label: &str| poly.vertices.iter().find(|v| v.labels.iter().any(|l| l == label)).map(|v| v.point);
        degenerate &= at("P(r)") == Some(q4) && at("Q4(r)") == Some(q4);
    }
    // Reference pentagon: d = 4, r = 3.
    let poly = region(spec(4, "3")).unwrap();
    let (d, r) = (4i64, 3i64);
    let figure = [
        ("P(r)", RationalPoint::new(q(1, r), q(1, r * d))),
        ("Q1(r)", RationalPoint::new(q(1, r * d), q(1, r * d))),
        ("Q2", RationalPoint::new(q(d - 1, d), q(d - 1, d))),
        ("Q3", RationalPoint::new(q(d - 1, d), q(1, d))),
        ("Q4", RationalPoint::new(q(d * (d - 1), d * d + 1), q(d - 1, d * d + 1))),
    ];
    let vertices_ok = poly.vertices.len() == 5
        && figure.iter().all(|(label, pt)| poly.vertices.iter().any(|v| v.labels.iter().any(|l| l == label) && v.point == *pt));
    outcome(
        far == 0 && degenerate && vertices_ok,
        format!(
            "12 specs over regimes {regimes:?}: {mismatched} boundary cells differ, {far} beyond one cell; degeneracy exact: {degenerate}; d = 4, r = 3 pentagon vertices exact: {vertices_ok}"
        ),
    )
}

/// Sparse machinery.
fn criterion_8() -> Outcome {
    let failures = random_family_check(2, 64, 100, 8).unwrap();
    let corpus = bump_corpus(2, 3.0, 30, 0.02, 7).unwrap();
    let rep = corpus_run(&corpus, 2, &[64, 128, 256], 4.5, 3.0, &DominationConfig::default()).unwrap();
    let mean = rep.max_ratios.iter().sum::<f64>() / 3.0;
    let stable = rep.max_ratios.iter().all(|m| (m - mean).abs() <= 0.5 * mean);
    let (d, p, qq, r) = (2usize, 1.05, 2.0, 3.0);
    let js = [4, 5, 6, 7];
    let separated = js.iter().all(|&j| sharpness_separation(d, j).unwrap() >= 1.0);
    let sharp = sharpness_run(d, &js, p, qq, r).unwrap();
    let df = d as f64;
    let predicted = (1.0 / r - df + 1.0) + (df - 1.0) / p;
    let sharp_ok = sharp.slope >= predicted - 0.3 && separated;
    outcome(
        failures.is_empty() && stable && sharp_ok,
        format!(
            "{} of 100 random families fail verification; corpus max ratios {:.3?} (±50% of mean {mean:.3}); sharpness d=2 (p,q,r)=({p},{qq},{r}) slope {:.3} (≥ {:.3}), dist(supp f_j, R) ≥ 1: {separated}",
            failures.len(),
            rep.max_ratios,
            sharp.slope,
            predicted - 0.3
        ),
    )
}

/// Inside the region the counterexamples must not show growth.
fn criterion_9() -> Outcome {
    let configs = [
        (ExampleKind::AlternatingShells, 2u32, "3"),
        (ExampleKind::KnappPlates, 2, "3"),
        (ExampleKind::Disks, 2, "3"),
        (ExampleKind::AlternatingShells, 3, "3"),
        (ExampleKind::KnappPlates, 3, "2"),
        (ExampleKind::Knapp, 3, "3"),
    ];
    let mut pass = true;
    let mut lines = Vec::new();
    for (kind, d, r) in configs {
        let s = spec(d, r);
        let poly = region(s).unwrap();
        let n = poly.vertices.len() as f64;
        let (x, y) = poly.vertices.iter().fold((0.0, 0.0), |(a, b), v| {
            let p = v.point.to_f64();
            (a + p.inv_p / n, b + p.inv_q / n)
        });
        let pt = ExponentPoint::new(x, y).unwrap();
        assert!(poly.contains_interior(pt, 1e-3), "centroid must be interior");
        let (slope, _) = scaling(kind, d as usize, 1.0 / x, 1.0 / y, s.r.to_f64());
        pass &= slope <= 0.2;
        lines.push(format!("{kind} d={d} r={r} at ({x:.3},{y:.3}): {slope:.3}"));
    }
    outcome(pass, format!("slopes ≤ 0.2 at region centroids, j ∈ [3,6]: {}", lines.join("; ")))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 9] = [
        (1, "variation oracle", Duration::from_secs(5), criterion_1),
        (2, "multiplier identities", Duration::from_secs(1), criterion_2),
        (3, "spectral vs quadrature averages", Duration::from_secs(120), criterion_3),
        (4, "L² decay slopes", Duration::from_secs(180), criterion_4),
        (5, "Stein–Tomas slope", Duration::from_secs(300), criterion_5),
        (6, "counterexample slopes", Duration::from_secs(600), criterion_6),
        (7, "region algebra", Duration::from_secs(10), criterion_7),
        (8, "sparse machinery", Duration::from_secs(600), criterion_8),
        (9, "inside-region sanity", Duration::from_secs(300), criterion_9),
    ];
    let only: Option<Vec<u32>> = std::env::var("SPHVAR_ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = took <= limit;
        let pass = out.pass && in_time;
        if !pass {
            failed.push(id);
        }
        println!(
            "criterion {id} [{}] {name}: {} — {:.1}s (limit {}s)",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        if std::env::var("SPHVAR_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
            std::process::exit(1);
        }
    }
}
