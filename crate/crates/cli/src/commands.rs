use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::json;
use sphvar::counterexamples::{run_scaling, ScalingConfig, ScalingReport};
use sphvar::geometry::{classify as classify_point, region as region_polygon, region_json, region_svg, ExponentPoint, RegionSpec};
use sphvar::operators::operator_norm_probe;
use sphvar::sparse::{
    bump_corpus, corpus_run, random_family_check, sharpness_run, sharpness_separation, verify_sparsity, CorpusReport, DominationConfig,
    SharpnessReport, SparseFamily, Violation,
};
use sphvar::variation::{variation_exact, SampledPath};

use crate::config::{
    load, ClassifyConfig, CounterexampleConfig, OperatorConfig, RegionConfig, SparseCheckConfig, VariationConfig,
};
use crate::{ClassifyArgs, CounterexampleArgs, Failure, OperatorArgs, RegionArgs, SparseArgs, VariationArgs};

fn missing(flag: &str) -> Failure {
    Failure::Usage(format!("--{flag} is required (or pass --config)"))
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| missing(flag))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Pretty JSON plus a trailing newline, to `path` or stdout.
fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => write_text(p, &text),
        None => Ok(std::io::stdout().write_all(text.as_bytes())?),
    }
}

fn from_config<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    load(path).map_err(Failure::Usage)
}

pub fn region(a: RegionArgs) -> Result<(), Failure> {
    let cfg = match a.config {
        Some(p) => from_config(&p)?,
        None => RegionConfig { d: need(a.d, "d")?, r: need(a.r, "r")? },
    };
    let spec = RegionSpec::new(cfg.d, cfg.r.0)?;
    let poly = region_polygon(spec)?;
    if poly.is_empty() {
        return Err(Failure::Usage(format!(
            "no bounded region for d = {}, r = {}: V_r is unbounded from every L^p to every L^q",
            cfg.d, cfg.r.0
        )));
    }
    if let Some(p) = &a.svg {
        write_text(p, &region_svg(&poly))?;
    }
    emit_json(&region_json(&poly), a.json.as_deref())
}

pub fn classify(a: ClassifyArgs) -> Result<(), Failure> {
    let cfg = match a.config {
        Some(p) => from_config(&p)?,
        None => ClassifyConfig { d: need(a.d, "d")?, r: need(a.r, "r")?, p: need(a.p, "p")?, q: need(a.q, "q")? },
    };
    let spec = RegionSpec::new(cfg.d, cfg.r.0)?;
    let pt = ExponentPoint::from_exponents(cfg.p, cfg.q)?;
    let status = classify_point(spec, pt)?;
    let out = json!({
        "d": cfg.d,
        "r": cfg.r,
        "inv_p": pt.inv_p,
        "inv_q": pt.inv_q,
        "kind": status.kind,
        "source": status.source,
    });
    emit_json(&out, a.json.as_deref())
}

/// Real samples from CSV text: one row or one column, optional header.
pub fn parse_samples(text: &str) -> Result<Vec<f64>, Failure> {
    let mut out = Vec::new();
    let mut first = true;
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let parsed: Result<Vec<f64>, _> = fields.iter().map(|s| s.parse::<f64>()).collect();
        match parsed {
            Ok(v) => out.extend(v),
            Err(_) if first => {}
            Err(e) => return Err(Failure::Usage(format!("line {}: {e}", k + 1))),
        }
        first = false;
    }
    if out.is_empty() {
        return Err(Failure::Usage("no samples in the input".into()));
    }
    Ok(out)
}

pub fn variation(a: VariationArgs) -> Result<(), Failure> {
    let cfg = match a.config {
        Some(p) => from_config(&p)?,
        None => VariationConfig { values: a.values, input: a.input, r: need(a.r, "r")? },
    };
    let values = match (cfg.values, &cfg.input) {
        (Some(v), None) => v,
        (None, Some(p)) => parse_samples(&fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?)?,
        _ => return Err(Failure::Usage("give exactly one of --input and --values".into())),
    };
    let path = SampledPath::from_real(&values)?;
    let v = variation_exact(&path, cfg.r)?;
    println!("{v:.prec$}", prec = a.digits);
    if let Some(p) = &a.json {
        emit_json(&json!({ "r": sphvar_exponent(cfg.r), "samples": values.len(), "variation": v }), Some(p))?;
    }
    Ok(())
}

fn sphvar_exponent(r: f64) -> serde_json::Value {
    if r.is_infinite() {
        json!("inf")
    } else {
        json!(r)
    }
}

pub fn operator(a: OperatorArgs) -> Result<(), Failure> {
    let cfg: OperatorConfig = from_config(&a.config)?;
    let report = operator_norm_probe(&cfg.probe)?;
    let pass = cfg.max_slope.map(|m| report.slope <= m);
    emit_json(&json!({ "report": report, "max_slope": cfg.max_slope, "pass": pass }), a.json.as_deref())?;
    match (pass, cfg.max_slope) {
        (Some(false), Some(m)) => Err(Failure::Check(format!("slope {:.4} exceeds {m}", report.slope))),
        _ => Ok(()),
    }
}

pub fn scaling_csv(report: &ScalingReport) -> String {
    let mut s = String::from("j,ratio\n");
    for (j, r) in report.js.iter().zip(&report.ratios) {
        s.push_str(&format!("{j},{r:.12e}\n"));
    }
    s
}

pub fn counterexample(a: CounterexampleArgs) -> Result<(), Failure> {
    let cfg = match a.config {
        Some(p) => from_config(&p)?,
        None => CounterexampleConfig {
            kind: need(a.kind, "kind")?,
            d: need(a.d, "d")?,
            p: need(a.p, "p")?,
            q: need(a.q, "q")?,
            r: need(a.r, "r")?,
            jmin: need(a.jmin, "jmin")?,
            jmax: need(a.jmax, "jmax")?,
            samples: a.samples,
        },
    };
    if cfg.jmax < cfg.jmin {
        return Err(Failure::Usage(format!("jmax = {} is below jmin = {}", cfg.jmax, cfg.jmin)));
    }
    let scfg = ScalingConfig {
        kind: cfg.kind,
        d: cfg.d,
        js: (cfg.jmin..=cfg.jmax).collect(),
        p: cfg.p,
        q: cfg.q,
        r: cfg.r,
        samples: cfg.samples,
    };
    let report = run_scaling(&scfg)?;
    let csv = scaling_csv(&report);
    match &a.csv {
        Some(p) => {
            write_text(p, &csv)?;
            if a.json.is_none() {
                emit_json(&report, None)?;
            }
        }
        None => print!("{csv}"),
    }
    if let Some(p) = &a.json {
        emit_json(&report, Some(p))?;
    }
    match (report.pass, report.predicted) {
        (Some(false), Some(pred)) => {
            Err(Failure::Check(format!("{}: slope {:.4} below prediction {pred:.4} − 0.2", cfg.kind, report.slope)))
        }
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct FamilyOutcome {
    cubes: usize,
    ok: bool,
    violation: Option<Violation>,
}

#[derive(Serialize)]
struct RandomOutcome {
    count: usize,
    failures: Vec<(usize, Violation)>,
}

#[derive(Serialize)]
struct SparseOutcome {
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<FamilyOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    random: Option<RandomOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    corpus: Option<CorpusReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sharpness: Option<SharpnessReport>,
    pass: bool,
}

pub fn sparse_check(a: SparseArgs) -> Result<(), Failure> {
    let cfg: SparseCheckConfig = match a.config {
        Some(p) => from_config(&p)?,
        None => {
            let mut base: SparseCheckConfig = serde_json::from_value(json!({ "d": a.d.unwrap_or(2), "r": 3.0 }))?;
            base.family = a.family;
            if let Some(r) = a.r {
                base.r = r;
            }
            base.seed = a.seed.unwrap_or(0);
            base.pairs = a.pairs.unwrap_or(base.pairs);
            base.random_pairs = a.random_pairs.unwrap_or(base.random_pairs);
            base.grids = a.grids.unwrap_or(base.grids);
            base
        }
    };
    let mut out = SparseOutcome { family: None, random: None, corpus: None, sharpness: None, pass: true };
    let mut problems = Vec::new();
    if let Some(p) = &cfg.family {
        let text = fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
        let fam = SparseFamily::from_json(&text)?;
        let violation = verify_sparsity(&fam).err();
        if let Some(v) = &violation {
            problems.push(v.to_string());
        }
        out.family = Some(FamilyOutcome { cubes: fam.len(), ok: violation.is_none(), violation });
    } else {
        if cfg.random_pairs > 0 {
            let failures = random_family_check(cfg.d, 64, cfg.random_pairs, cfg.seed)?;
            if !failures.is_empty() {
                problems.push(format!("{} random families are not sparse", failures.len()));
            }
            out.random = Some(RandomOutcome { count: cfg.random_pairs, failures });
        }
        if cfg.pairs > 0 {
            let corpus = bump_corpus(cfg.d, cfg.r, cfg.pairs, cfg.margin, cfg.seed)?;
            let dcfg = DominationConfig { rule: cfg.rule, ..DominationConfig::default() };
            let rep = corpus_run(&corpus, cfg.d, &cfg.grids, cfg.half_width, cfg.r, &dcfg)?;
            if rep.spread > cfg.tolerance {
                problems.push(format!("maximal ratios {:?} spread {:.3} > {}", rep.max_ratios, rep.spread, cfg.tolerance));
            }
            out.corpus = Some(rep);
        }
        if let Some(s) = &cfg.sharpness {
            for &j in &s.js {
                let sep = sharpness_separation(s.d, j)?;
                if sep < 1.0 {
                    problems.push(format!("support separation {sep} < 1 at j = {j}"));
                }
            }
            let rep = sharpness_run(s.d, &s.js, s.p, s.q, s.r)?;
            if !rep.pass {
                problems.push(format!("sharpness slope {:.3} below {:.3} − 0.3", rep.slope, rep.predicted));
            }
            out.sharpness = Some(rep);
        }
    }
    out.pass = problems.is_empty();
    emit_json(&out, a.json.as_deref())?;
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(problems.join("; ")))
    }
}
