//! Run configuration: one flat JSON object holding grid, nonlinearity,
//! flow and experiment keys side by side.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::analysis::SubadditivityMode;
use crate::error::{Error, Result};
use crate::field::{Grid, Profile, ProfileKind};
use crate::flow::FlowConfig;
use crate::nonlinearity::{Hypothesis, NonlinearitySpec};

const GRID_KEYS: [&str; 4] = ["dim", "L", "M", "s"];

const SPEC_KEYS: [&str; 17] = [
    "family", "ell", "alpha", "beta", "gamma", "sigma", "a", "a_prime", "b", "b_prime", "delta_f1",
    "p_f1", "r_f1", "s_f1", "coefficient", "envelope", "table",
];

/// Where `cc-classify` gets its sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceSource {
    /// Every `every`-th iterate of a minimization.
    Flow { every: usize },
    /// Dilations of `profile` spreading from `lambda_start` to the box.
    Spreading { len: usize, lambda_start: f64 },
    /// `profile` translated by `n * step` along the first axis.
    Translates { len: usize, step: f64 },
    /// Two copies of `profile` with mass fractions `inner`, `1 - inner`,
    /// `d0 + n dd` apart.
    Separating { len: usize, inner: f64, d0: f64, dd: f64 },
    /// Binary field files, relative to the config file.
    Files { paths: Vec<PathBuf> },
}

/// Keys read by individual subcommands; every one has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Experiment {
    pub profile: Profile,
    pub lambda_ladder: Vec<f64>,
    pub c_values: Vec<f64>,
    pub with_infinity: bool,
    /// `(c, a)` pairs for `subadd-test`.
    pub pairs: Vec<(f64, f64)>,
    pub subadd_mode: SubadditivityMode,
    pub linear_split: bool,
    pub interpolate: bool,
    pub tol: f64,
    pub thetas: Vec<f64>,
    /// Run `theta-test` on `F^inf` instead of `F`.
    pub theta_on_infinity: bool,
    pub hypotheses: Option<Vec<Hypothesis>>,
    pub eps_ladder: Vec<f64>,
    pub sequence: SequenceSource,
    pub kinetic_s_values: Vec<f64>,
    pub kinetic_profiles: Vec<ProfileKind>,
}

impl Default for Experiment {
    fn default() -> Self {
        Experiment {
            profile: Profile::gaussian(),
            lambda_ladder: (0..=8).map(|k| 2f64.powi(-k)).collect(),
            c_values: vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0],
            with_infinity: false,
            pairs: vec![(2.0, 0.5), (2.0, 1.0), (2.0, 1.5)],
            subadd_mode: SubadditivityMode::Plain,
            linear_split: false,
            interpolate: true,
            tol: 1e-6,
            thetas: vec![1.5, 2.0],
            theta_on_infinity: false,
            hypotheses: None,
            eps_ladder: vec![0.1, 0.05, 0.02],
            sequence: SequenceSource::Flow { every: 100 },
            kinetic_s_values: vec![0.25, 0.5, 0.75],
            kinetic_profiles: vec![ProfileKind::Gaussian, ProfileKind::SechSquared],
        }
    }
}

/// A loaded and validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: Grid,
    /// Absent when the config has no `family` key.
    pub spec: Option<NonlinearitySpec>,
    pub flow: FlowConfig,
    pub experiment: Experiment,
    /// Directory relative paths in the config resolve against.
    pub base_dir: PathBuf,
}

fn split_off<T: DeserializeOwned>(map: &mut Map<String, Value>, keys: &[String]) -> Result<T> {
    let part: Map<String, Value> = keys
        .iter()
        .filter_map(|k| map.remove(k).map(|v| (k.clone(), v)))
        .collect();
    serde_path_to_error::deserialize(Value::Object(part)).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.into_inner().to_string(),
    })
}

fn keys_of<T: Serialize>(value: &T) -> Vec<String> {
    match serde_json::to_value(value).expect("config sections serialize") {
        Value::Object(m) => m.keys().cloned().collect(),
        _ => unreachable!("config sections are objects"),
    }
}

#[derive(Deserialize)]
struct GridKeys {
    dim: Option<usize>,
    #[serde(rename = "L")]
    box_length: Option<f64>,
    #[serde(rename = "M")]
    points: Option<usize>,
    s: Option<f64>,
}

impl RunConfig {
    /// Resolves defaults and enforces every invariant: grid shape, the
    /// nonlinearity's own rules, subcritical growth on this grid, and the
    /// flow parameter ranges.
    pub fn from_value(value: Value, base_dir: &Path) -> Result<Self> {
        let Value::Object(mut map) = value else {
            return Err(Error::Schema {
                path: ".".into(),
                message: "config must be a JSON object".into(),
            });
        };
        let grid_keys: Vec<String> = GRID_KEYS.iter().map(|k| k.to_string()).collect();
        let g: GridKeys = split_off(&mut map, &grid_keys)?;
        let dim = g.dim.unwrap_or(1);
        let grid = Grid::new(
            dim,
            g.box_length.unwrap_or(if dim == 1 { 40.0 } else { 20.0 }),
            g.points.unwrap_or(if dim == 1 { 512 } else { 128 }),
            g.s.unwrap_or(0.5),
        )?;
        let flow: FlowConfig = split_off(&mut map, &keys_of(&FlowConfig::default()))?;
        let experiment: Experiment = split_off(&mut map, &keys_of(&Experiment::default()))?;
        let spec_part: Map<String, Value> = SPEC_KEYS
            .iter()
            .filter_map(|k| map.remove(*k).map(|v| (k.to_string(), v)))
            .collect();
        if let Some(key) = map.keys().next() {
            return Err(Error::Schema {
                path: key.clone(),
                message: "unknown field".into(),
            });
        }
        let spec = if spec_part.is_empty() {
            None
        } else {
            let spec = NonlinearitySpec::from_json(Value::Object(spec_part))?;
            spec.bind(&grid)?;
            Some(spec)
        };
        flow.validate()?;
        Ok(RunConfig {
            grid,
            spec,
            flow,
            experiment,
            base_dir: base_dir.to_path_buf(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let value: Value = serde_json::from_str(&text).map_err(|e| Error::Schema {
            path: ".".into(),
            message: e.to_string(),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        RunConfig::from_value(value, base)
    }

    pub fn require_spec(&self) -> Result<&NonlinearitySpec> {
        self.spec.as_ref().ok_or_else(|| Error::Schema {
            path: "family".into(),
            message: "this command needs a nonlinearity".into(),
        })
    }

    /// The fully resolved config as one flat object with sorted keys.
    pub fn resolved(&self) -> Value {
        let mut out = Map::new();
        out.insert("dim".into(), self.grid.dim().into());
        out.insert("L".into(), self.grid.box_length().into());
        out.insert("M".into(), self.grid.points_per_dim().into());
        out.insert("s".into(), self.grid.s().into());
        let mut merge = |v: Value| {
            if let Value::Object(m) = v {
                out.extend(m);
            }
        };
        if let Some(spec) = &self.spec {
            merge(serde_json::to_value(spec).expect("spec serializes"));
        }
        merge(serde_json::to_value(&self.flow).expect("flow config serializes"));
        merge(serde_json::to_value(&self.experiment).expect("experiment serializes"));
        Value::Object(out)
    }

    /// SHA-256 of the resolved config, hex encoded.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(&self.resolved()).expect("json");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[cfg(test)]
mod tests {
    use serde_json::json;

    use super::*;

    fn load(v: Value) -> Result<RunConfig> {
        RunConfig::from_value(v, Path::new("."))
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let c = load(json!({"s": 0.5, "family": "pure_power", "ell": 1, "c2": 1})).unwrap();
        assert_eq!(c.grid, Grid::line(40.0, 512, 0.5).unwrap());
        assert_eq!(c.flow, FlowConfig::default());
        assert_eq!(c.spec, Some(NonlinearitySpec::pure_power(1.0)));
        assert_eq!(c.experiment, Experiment::default());
        assert_eq!(c.flow.el_tol, 1e-6);
        assert_eq!(c.flow.seed, 0);
    }

    #[test]
    fn rules_are_named() {
        let err = load(json!({"s": 0.5, "family": "pure_power", "ell": 3, "c2": 1})).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { ref rule } if rule.starts_with("ell < 4s/N")), "{err}");
        let err = load(json!({"family": "pure_power", "ell": 1, "p_f1": 2.5})).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { ref rule } if rule == "p ∈ [0,2)"));
        let err = load(json!({"family": "pure_power", "ell": 1, "backtrack_factor": 1.5})).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { .. }));
    }

    #[test]
    fn schema_errors_carry_a_path() {
        let err = load(json!({"family": "pure_power", "ell": 1, "c2": "one"})).unwrap_err();
        assert!(matches!(err, Error::Schema { ref path, .. } if path == "c2"), "{err}");
        let err = load(json!({"family": "pure_power", "ell": 1, "colour": 1})).unwrap_err();
        assert!(matches!(err, Error::Schema { ref path, .. } if path == "colour"));
        let err = load(json!({"sequence": {"kind": "spreading", "len": 4}})).unwrap_err();
        assert!(matches!(err, Error::Schema { ref path, .. } if path.starts_with("sequence")), "{err}");
        assert!(matches!(load(json!([1, 2])), Err(Error::Schema { .. })));
    }

    #[test]
    fn hash_sees_resolved_values_only() {
        let a = load(json!({"family": "pure_power", "ell": 1})).unwrap();
        let b = load(json!({"ell": 1, "family": "pure_power", "L": 40.0, "seed": 0})).unwrap();
        let c = load(json!({"family": "pure_power", "ell": 1, "seed": 1})).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        let again = load(a.resolved()).unwrap();
        assert_eq!(again, a);
    }
}
