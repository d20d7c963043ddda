//! Run configuration files and their resolution into sweeps.
//!
//! A config is a JSON document:
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "system": { "n_elements": 64, "snr_db": [90, 95, 100] },
//!   "sweep": { "axis": "k", "values": [0, 2, 5], "metrics": ["outage_analytic"] },
//!   "plan": { "master_seed": 7, "n_trials": 20000 }
//! }
//! ```
//!
//! Every section but `schema_version` is optional.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::SystemConfig;
use crate::error::{Error, Result};
use crate::montecarlo::TrialPlan;
use crate::sweep::{Axis, AxisValue, Preset, SweepMetric, SweepSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: Axis,
    /// May be omitted for the `snr_db` axis, which then uses the system grid.
    #[serde(default)]
    pub values: Vec<AxisValue>,
    pub metrics: Vec<SweepMetric>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema_version: u32,
    #[serde(default)]
    pub system: SystemConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<TrialPlan>,
}

impl Default for ConfigFile {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            system: SystemConfig::default(),
            sweep: None,
            plan: None,
        }
    }
}

pub fn parse_config(text: &str) -> Result<ConfigFile> {
    let file: ConfigFile =
        serde_json::from_str(text).map_err(|e| Error::config(format!("invalid config: {e}")))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(Error::config(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            file.schema_version
        )));
    }
    Ok(file)
}

pub fn load_config(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

/// Command-line settings layered over a config file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub preset: Option<Preset>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
}

/// The sweeps a config (plus overrides) asks for.
///
/// With a preset, the preset decides axis, values, metrics and the fields
/// its figure fixes; the remaining system fields and the plan come from the
/// file. Without one, the file's `sweep` section is used, defaulting to
/// analytic outage and capacity over the system SNR grid.
pub fn resolve(file: &ConfigFile, ov: &Overrides) -> Result<Vec<SweepSpec>> {
    let mut plan = file.plan.unwrap_or_default();
    if file.plan.is_none() {
        if let Some(p) = ov.preset {
            plan.n_trials = p.default_trials();
        }
    }
    if let Some(seed) = ov.seed {
        plan.master_seed = seed;
    }
    if let Some(n) = ov.trials {
        plan.n_trials = n;
    }
    let specs = match (ov.preset, &file.sweep) {
        (Some(p), _) => p.specs(&file.system, plan),
        (None, Some(s)) => {
            let values = if s.values.is_empty() && s.axis == Axis::SnrDb {
                file.system.snr_db.iter().map(|&v| AxisValue::Number(v)).collect()
            } else {
                s.values.clone()
            };
            let mut spec = SweepSpec::new(file.system.clone(), s.axis, values, s.metrics.clone(), plan);
            spec.label = s.label.clone();
            vec![spec]
        }
        (None, None) => {
            let values = file.system.snr_db.iter().map(|&v| AxisValue::Number(v)).collect();
            vec![SweepSpec::new(
                file.system.clone(),
                Axis::SnrDb,
                values,
                vec![SweepMetric::OutageAnalytic, SweepMetric::CapacityIntegral],
                plan,
            )]
        }
    };
    for s in &specs {
        s.validate()?;
    }
    Ok(specs)
}

/// Serializes with object keys in sorted order, so the text depends only on
/// content.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::config(format!("serialize: {e}")))?;
    Ok(v.to_string())
}

/// SHA-256 (hex) of the canonical JSON of the resolved sweeps.
pub fn config_hash(specs: &[SweepSpec]) -> Result<String> {
    let text = canonical_json(&specs)?;
    Ok(hex::encode(Sha256::digest(text.as_bytes())))
}

/// Worker count from the `RIS_THREADS` value (`None` or 0 means one per core).
pub fn thread_count(var: Option<&str>) -> Result<usize> {
    match var.map(str::trim) {
        None | Some("") => Ok(0),
        Some(v) => v
            .parse()
            .map_err(|_| Error::config(format!("RIS_THREADS must be a non-negative integer, got `{v}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_gets_defaults() {
        let f = parse_config(r#"{"schema_version": 1}"#).unwrap();
        assert_eq!(f, ConfigFile::default());
        let specs = resolve(&f, &Overrides::default()).unwrap();
        assert_eq!(specs.len(), 1);
        assert_eq!(specs[0].axis, Axis::SnrDb);
        assert_eq!(specs[0].values.len(), 21);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse_config("{"), Err(Error::Config(_))));
        assert!(matches!(parse_config(r#"{"schema_version": 2}"#), Err(Error::Config(_))));
        assert!(parse_config(r#"{"schema_version": 1, "sytem": {}}"#).is_err());
        assert!(parse_config(r#"{"schema_version": 1, "system": {"n_elemnts": 3}}"#).is_err());
        let f = parse_config(r#"{"schema_version": 1, "system": {"n_rx": 3}}"#).unwrap();
        assert!(resolve(&f, &Overrides::default()).is_err());
    }

    #[test]
    fn hash_ignores_key_order_and_whitespace() {
        let a = parse_config(
            r#"{"schema_version":1,"system":{"n_elements":32,"k1":1.5},"plan":{"master_seed":9,"n_trials":50}}"#,
        )
        .unwrap();
        let b = parse_config(
            r#"{ "plan": {"n_trials": 50, "master_seed": 9},
                 "system": {"k1": 1.5, "n_elements": 32}, "schema_version": 1 }"#,
        )
        .unwrap();
        let ov = Overrides::default();
        let ha = config_hash(&resolve(&a, &ov).unwrap()).unwrap();
        let hb = config_hash(&resolve(&b, &ov).unwrap()).unwrap();
        assert_eq!(ha, hb);
        assert_eq!(ha.len(), 64);
        let other = Overrides {
            seed: Some(10),
            ..ov
        };
        assert_ne!(ha, config_hash(&resolve(&a, &other).unwrap()).unwrap());
    }

    #[test]
    fn overrides_apply() {
        let f = ConfigFile::default();
        let ov = Overrides {
            preset: Some(Preset::Fig1b),
            seed: Some(42),
            trials: None,
        };
        let specs = resolve(&f, &ov).unwrap();
        assert_eq!(specs[0].plan.master_seed, 42);
        assert_eq!(specs[0].plan.n_trials, Preset::Fig1b.default_trials());
        let ov = Overrides {
            trials: Some(77),
            ..ov
        };
        assert_eq!(resolve(&f, &ov).unwrap()[0].plan.n_trials, 77);
    }

    #[test]
    fn sweep_section() {
        let f = parse_config(
            r#"{"schema_version":1,"system":{"snr_db":[1,2]},
                "sweep":{"axis":"topology","values":["dual","single"],"metrics":["capacity_bound"]}}"#,
        )
        .unwrap();
        let specs = resolve(&f, &Overrides::default()).unwrap();
        assert_eq!(specs[0].values.len(), 2);
        let f = parse_config(r#"{"schema_version":1,"sweep":{"axis":"bogus","metrics":[]}}"#);
        assert!(f.is_err());
    }

    #[test]
    fn threads() {
        assert_eq!(thread_count(None).unwrap(), 0);
        assert_eq!(thread_count(Some("8")).unwrap(), 8);
        assert!(thread_count(Some("-1")).is_err());
    }
}
