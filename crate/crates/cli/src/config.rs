//! JSON experiment configs, one record per subcommand. Unknown keys are
//! rejected; exponents accept numbers or `"inf"`.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use sphvar::counterexamples::ExampleKind;
use sphvar::geometry::VariationExponent;
use sphvar::operators::ProbeConfig;
use sphvar::sparse::StoppingRule;

/// A variation exponent kept exact: `3`, `2.2`, `"5/2"` or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exact(pub VariationExponent);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Exact;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number, a fraction \"a/b\" or \"inf\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Exact, E> {
                v.parse().map(Exact).map_err(E::custom)
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exact, E> {
                self.visit_str(&v.to_string())
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exact, E> {
                self.visit_str(&v.to_string())
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exact, E> {
                self.visit_str(&v.to_string())
            }
        }
        d.deserialize_any(V)
    }
}

impl std::str::FromStr for Exact {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(Exact).map_err(|e: sphvar::Error| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    pub d: u32,
    pub r: Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyConfig {
    pub d: u32,
    pub r: Exact,
    #[serde(with = "sphvar::serde_exponent")]
    pub p: f64,
    #[serde(with = "sphvar::serde_exponent")]
    pub q: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariationConfig {
    /// Path samples; alternatively read from `input`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    /// CSV file of real samples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(with = "sphvar::serde_exponent")]
    pub r: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorConfig {
    pub probe: ProbeConfig,
    /// Fail (exit 1) when the fitted slope exceeds this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_slope: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleConfig {
    pub kind: ExampleKind,
    pub d: usize,
    #[serde(with = "sphvar::serde_exponent")]
    pub p: f64,
    #[serde(with = "sphvar::serde_exponent")]
    pub q: f64,
    #[serde(with = "sphvar::serde_exponent")]
    pub r: f64,
    pub jmin: u32,
    pub jmax: u32,
    /// Time samples on `[1, 2]`.
    #[serde(default, rename = "M", skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharpnessConfig {
    pub d: usize,
    #[serde(with = "sphvar::serde_exponent")]
    pub p: f64,
    #[serde(with = "sphvar::serde_exponent")]
    pub q: f64,
    #[serde(with = "sphvar::serde_exponent")]
    pub r: f64,
    pub js: Vec<u32>,
}

fn default_pairs() -> usize {
    30
}
fn default_random() -> usize {
    100
}
fn default_grids() -> Vec<usize> {
    vec![64, 128, 256]
}
fn default_half_width() -> f64 {
    4.5
}
fn default_margin() -> f64 {
    0.02
}
fn default_tolerance() -> f64 {
    0.5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SparseCheckConfig {
    /// Verify this family file instead of running the suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<PathBuf>,
    pub d: usize,
    #[serde(with = "sphvar::serde_exponent")]
    pub r: f64,
    #[serde(default)]
    pub seed: u64,
    /// Corpus size for the refinement check (0 skips it).
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    /// Random pairs whose families are verified.
    #[serde(default = "default_random")]
    pub random_pairs: usize,
    #[serde(default = "default_grids")]
    pub grids: Vec<usize>,
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    /// Minimal distance of corpus exponents from the region boundary.
    #[serde(default = "default_margin")]
    pub margin: f64,
    /// Allowed relative spread of the per-grid maximal ratios.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub rule: StoppingRule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sharpness: Option<SharpnessConfig>,
}

pub fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_exponents() {
        let c: RegionConfig = serde_json::from_str(r#"{"d": 4, "r": 3}"#).unwrap();
        assert_eq!(c.r.0.to_string(), "3");
        let c: RegionConfig = serde_json::from_str(r#"{"d": 2, "r": 2.2}"#).unwrap();
        assert_eq!(c.r.0.to_string(), "11/5");
        let c: RegionConfig = serde_json::from_str(r#"{"d": 3, "r": "inf"}"#).unwrap();
        assert_eq!(c.r.0, VariationExponent::Infinite);
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"d":3,"r":"inf"}"#);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<RegionConfig>(r#"{"d": 4, "r": 3, "colour": 1}"#).is_err());
        assert!(serde_json::from_str::<CounterexampleConfig>(
            r#"{"kind": "disks", "d": 2, "p": 2, "q": 2, "r": 2, "jmin": 3, "jmax": 6, "m": 4}"#
        )
        .is_err());
    }

    #[test]
    fn sparse_defaults() {
        let c: SparseCheckConfig = serde_json::from_str(r#"{"d": 2, "r": 3}"#).unwrap();
        assert_eq!(c.pairs, 30);
        assert_eq!(c.grids, vec![64, 128, 256]);
        assert_eq!(c.rule, StoppingRule::default());
    }
}
