//! Parameter sweeps over the analytic chain and the Monte Carlo engine, and
//! the figure presets built on them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::{
    ergodic_capacity_bound, ergodic_capacity_integral, marcum_order_residual, outage_probability,
    OutageForm,
};
use crate::channel::{SystemConfig, Topology};
use crate::error::{Error, Result};
use crate::moments::gain_stats;
use crate::montecarlo::{run_metrics, Metric, MetricSet, TrialPlan};

/// The parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    SnrDb,
    NElements,
    CarrierHz,
    /// Both hop distances at once.
    D,
    /// Both K-factors at once.
    K,
    Topology,
}

impl Axis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axis::SnrDb => "snr_db",
            Axis::NElements => "n_elements",
            Axis::CarrierHz => "carrier_hz",
            Axis::D => "d",
            Axis::K => "k",
            Axis::Topology => "topology",
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "snr_db" => Axis::SnrDb,
            "n_elements" => Axis::NElements,
            "carrier_hz" => Axis::CarrierHz,
            "d" => Axis::D,
            "k" => Axis::K,
            "topology" => Axis::Topology,
            other => return Err(Error::config(format!("unknown sweep axis `{other}`"))),
        })
    }
}

/// One value along an axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisValue {
    Number(f64),
    Topology(Topology),
}

impl AxisValue {
    /// Parses the textual form written by [`fmt::Display`].
    pub fn parse(axis: Axis, text: &str) -> Result<Self> {
        if axis == Axis::Topology {
            return Ok(AxisValue::Topology(text.parse()?));
        }
        text.parse::<f64>()
            .map(AxisValue::Number)
            .map_err(|_| Error::config(format!("bad value `{text}` for axis {}", axis.as_str())))
    }

    fn number(&self, axis: Axis) -> Result<f64> {
        match *self {
            AxisValue::Number(v) => Ok(v),
            AxisValue::Topology(t) => Err(Error::config(format!(
                "axis {} needs a number, got `{}`",
                axis.as_str(),
                t.as_str()
            ))),
        }
    }
}

impl fmt::Display for AxisValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisValue::Number(v) => write!(f, "{v}"),
            AxisValue::Topology(t) => f.write_str(t.as_str()),
        }
    }
}

impl From<f64> for AxisValue {
    fn from(v: f64) -> Self {
        AxisValue::Number(v)
    }
}

impl From<Topology> for AxisValue {
    fn from(t: Topology) -> Self {
        AxisValue::Topology(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMetric {
    OutageAnalytic,
    OutageMc,
    CapacityIntegral,
    CapacityBound,
    CapacityMc,
    BerMc,
}

impl SweepMetric {
    pub const ALL: [SweepMetric; 6] = [
        SweepMetric::OutageAnalytic,
        SweepMetric::OutageMc,
        SweepMetric::CapacityIntegral,
        SweepMetric::CapacityBound,
        SweepMetric::CapacityMc,
        SweepMetric::BerMc,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SweepMetric::OutageAnalytic => "outage_analytic",
            SweepMetric::OutageMc => "outage_mc",
            SweepMetric::CapacityIntegral => "capacity_integral",
            SweepMetric::CapacityBound => "capacity_bound",
            SweepMetric::CapacityMc => "capacity_mc",
            SweepMetric::BerMc => "ber_mc",
        }
    }

    /// The Monte Carlo tally behind this metric, if any.
    pub fn mc_metric(&self) -> Option<Metric> {
        match self {
            SweepMetric::OutageMc => Some(Metric::Outage),
            SweepMetric::CapacityMc => Some(Metric::Capacity),
            SweepMetric::BerMc => Some(Metric::Ber),
            _ => None,
        }
    }
}

impl FromStr for SweepMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepMetric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown metric `{s}`")))
    }
}

/// A one-dimensional sweep: `base` with `axis` set to each of `values`,
/// every metric evaluated on the SNR grid of `base` (or on `values` when
/// the axis is `snr_db`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: SystemConfig,
    pub axis: Axis,
    pub values: Vec<AxisValue>,
    pub metrics: Vec<SweepMetric>,
    pub plan: TrialPlan,
    /// Text for the `axis` column; the axis name when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl SweepSpec {
    pub fn new(
        base: SystemConfig,
        axis: Axis,
        values: Vec<AxisValue>,
        metrics: Vec<SweepMetric>,
        plan: TrialPlan,
    ) -> Self {
        Self {
            base,
            axis,
            values,
            metrics,
            plan,
            label: None,
        }
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(self.axis.as_str())
    }

    /// The configuration at one axis value.
    pub fn config_at(&self, value: AxisValue) -> Result<SystemConfig> {
        let mut cfg = self.base.clone();
        let axis = self.axis;
        match axis {
            Axis::SnrDb => cfg.snr_db = vec![value.number(axis)?],
            Axis::NElements => {
                let v = value.number(axis)?;
                if !(v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64) {
                    return Err(Error::config(format!("n_elements must be a positive integer, got {v}")));
                }
                cfg.n_elements = v as usize;
            }
            Axis::CarrierHz => cfg.carrier_hz = value.number(axis)?,
            Axis::D => {
                let v = value.number(axis)?;
                cfg.d1_m = v;
                cfg.d2_m = v;
            }
            Axis::K => {
                let v = value.number(axis)?;
                cfg.k1 = v;
                cfg.k2 = v;
            }
            Axis::Topology => match value {
                AxisValue::Topology(t) => cfg.topology = t,
                AxisValue::Number(v) => {
                    return Err(Error::config(format!("axis topology needs dual or single, got {v}")))
                }
            },
        }
        cfg.validate()
            .map_err(|e| Error::config(format!("{} = {value}: {e}", axis.as_str())))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.metrics.is_empty() {
            return Err(Error::config("a sweep needs at least one metric"));
        }
        if self.values.is_empty() {
            return Err(Error::config(format!("axis {} has no values", self.axis.as_str())));
        }
        if self.plan.n_trials == 0 && self.metrics.iter().any(|m| m.mc_metric().is_some()) {
            return Err(Error::config("n_trials must be > 0 for Monte Carlo metrics"));
        }
        for &v in &self.values {
            let cfg = self.config_at(v)?;
            if self.metrics.contains(&SweepMetric::BerMc) && cfg.n_rx < 2 {
                return Err(Error::config("ber_mc needs n_rx >= 2"));
            }
        }
        Ok(())
    }

    /// `(axis value, configuration)` pairs in evaluation order. An SNR axis
    /// collapses into a single configuration carrying the whole grid.
    fn points(&self) -> Result<Vec<(Option<AxisValue>, SystemConfig)>> {
        if self.axis == Axis::SnrDb {
            let mut cfg = self.base.clone();
            cfg.snr_db = self
                .values
                .iter()
                .map(|v| v.number(Axis::SnrDb))
                .collect::<Result<_>>()?;
            cfg.validate()?;
            return Ok(vec![(None, cfg)]);
        }
        self.values
            .iter()
            .map(|&v| Ok((Some(v), self.config_at(v)?)))
            .collect()
    }
}

/// One output cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: String,
    pub axis_value: AxisValue,
    pub snr_db: f64,
    pub metric: SweepMetric,
    pub value: f64,
    /// 95% half-width; 0 for analytic metrics.
    pub ci95: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Rows of one metric, optionally restricted to one axis label.
    pub fn select<'a>(
        &'a self,
        metric: SweepMetric,
        axis: Option<&'a str>,
    ) -> impl Iterator<Item = &'a SweepRow> + 'a {
        self.rows
            .iter()
            .filter(move |r| r.metric == metric && axis.is_none_or(|a| r.axis == a))
    }
}

/// Evaluates every metric of `spec` at every grid point. Monte Carlo
/// metrics share one pass over the trials per axis value, and every axis
/// value reuses the same trial streams.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let mut mc = MetricSet::default();
    for m in spec.metrics.iter().filter_map(|m| m.mc_metric()) {
        mc.insert(m);
    }
    let label = spec.label().to_string();
    let mut rows = Vec::new();
    for (value, cfg) in spec.points()? {
        let n = cfg.snr_db.len();
        let mut columns: Vec<Vec<(f64, f64)>> = Vec::with_capacity(spec.metrics.len());
        let est = if mc == MetricSet::default() {
            None
        } else {
            Some(run_metrics(&cfg, &spec.plan, mc)?)
        };
        for metric in &spec.metrics {
            let col = match metric {
                SweepMetric::OutageAnalytic => outage_probability(&cfg, OutageForm::ExactFoldedNormal)?
                    .into_iter()
                    .map(|p| (p, 0.0))
                    .collect(),
                SweepMetric::CapacityIntegral | SweepMetric::CapacityBound => {
                    let stats = gain_stats(&cfg)?;
                    cfg.snr_db
                        .iter()
                        .map(|&db| {
                            let s = cfg.snr_scale(db);
                            let c = if *metric == SweepMetric::CapacityBound {
                                ergodic_capacity_bound(&stats, s)?
                            } else {
                                ergodic_capacity_integral(&stats, s)?
                            };
                            Ok((c, 0.0))
                        })
                        .collect::<Result<_>>()?
                }
                SweepMetric::OutageMc | SweepMetric::CapacityMc | SweepMetric::BerMc => {
                    let est = est.as_ref().expect("MC pass requested");
                    let list = match metric {
                        SweepMetric::OutageMc => &est.outage,
                        SweepMetric::CapacityMc => &est.capacity,
                        _ => &est.ber,
                    };
                    list.iter().map(|e| (e.value, e.ci95_halfwidth)).collect()
                }
            };
            columns.push(col);
        }
        for j in 0..n {
            let snr = cfg.snr_db[j];
            for (metric, col) in spec.metrics.iter().zip(&columns) {
                let (v, ci) = col[j];
                rows.push(SweepRow {
                    axis: label.clone(),
                    axis_value: value.unwrap_or(AxisValue::Number(snr)),
                    snr_db: snr,
                    metric: *metric,
                    value: v,
                    ci95: ci,
                });
            }
        }
    }
    Ok(SweepResult { rows })
}

/// Runs several sweeps and concatenates their rows in order.
pub fn run_sweeps(specs: &[SweepSpec]) -> Result<SweepResult> {
    let mut out = SweepResult::default();
    for spec in specs {
        out.rows.extend(run_sweep(spec)?.rows);
    }
    Ok(out)
}

/// Largest first-order Marcum residual (see [`marcum_order_residual`]) over
/// every configuration that reports analytic outage.
pub fn first_order_marcum_residual(specs: &[SweepSpec]) -> Result<Option<f64>> {
    let mut worst: Option<f64> = None;
    for spec in specs.iter().filter(|s| s.metrics.contains(&SweepMetric::OutageAnalytic)) {
        for (_, cfg) in spec.points()? {
            let r = marcum_order_residual(&cfg)?;
            worst = Some(worst.map_or(r, |w| w.max(r)));
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Outage versus SNR for N ∈ {64, 128, 256}.
    Fig1a,
    /// Outage versus SNR at 3 and 10 GHz, N = 64.
    Fig1b,
    /// Ergodic capacity for N ∈ {64, 128, 256}.
    Fig2a,
    /// Ergodic capacity for d ∈ {5, 10, 20} m, N = 128.
    Fig2b,
    /// Outage of both topologies for K ∈ {0, 2, 5, 10}, N = 128.
    Fig4,
}

/// Inclusive grid `lo, lo + step, ..., hi`.
fn grid(lo: i32, hi: i32, step: i32) -> Vec<f64> {
    (lo..=hi).step_by(step as usize).map(f64::from).collect()
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Fig1a,
        Preset::Fig1b,
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig4,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Preset::Fig1a => "fig1a",
            Preset::Fig1b => "fig1b",
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig4 => "fig4",
        }
    }

    /// Trial count used when neither the config nor the command line sets one.
    pub fn default_trials(&self) -> u64 {
        10_000
    }

    /// The preset's SNR grid in dB. The links are dominated by path loss
    /// (ζ² is about 4e-17 at 3 GHz and 10 m), so the interesting range sits
    /// far above the 0 to 40 dB default.
    pub fn snr_grid(&self) -> Vec<f64> {
        match self {
            Preset::Fig1a => grid(70, 115, 1),
            Preset::Fig1b => grid(95, 130, 1),
            Preset::Fig2a | Preset::Fig2b => grid(60, 160, 4),
            Preset::Fig4 => grid(0, 120, 2),
        }
    }

    /// Sweeps reproducing the figure on top of `base`; the fields the figure
    /// fixes are overwritten, everything else is kept.
    pub fn specs(&self, base: &SystemConfig, plan: TrialPlan) -> Vec<SweepSpec> {
        let mut cfg = base.clone();
        cfg.n_rx = 2;
        cfg.carrier_hz = 3e9;
        cfg.d1_m = 10.0;
        cfg.d2_m = 10.0;
        cfg.k1 = 2.0;
        cfg.k2 = 2.0;
        cfg.gamma_out_db = 10.0;
        cfg.topology = Topology::Dual;
        cfg.snr_db = self.snr_grid();
        let numbers = |v: &[f64]| v.iter().map(|&x| AxisValue::Number(x)).collect::<Vec<_>>();
        let outage = vec![SweepMetric::OutageAnalytic, SweepMetric::OutageMc];
        let capacity = vec![
            SweepMetric::CapacityIntegral,
            SweepMetric::CapacityBound,
            SweepMetric::CapacityMc,
        ];
        match self {
            Preset::Fig1a => vec![SweepSpec::new(
                cfg,
                Axis::NElements,
                numbers(&[64.0, 128.0, 256.0]),
                outage,
                plan,
            )],
            Preset::Fig1b => {
                cfg.n_elements = 64;
                vec![SweepSpec::new(cfg, Axis::CarrierHz, numbers(&[3e9, 10e9]), outage, plan)]
            }
            Preset::Fig2a => vec![SweepSpec::new(
                cfg,
                Axis::NElements,
                numbers(&[64.0, 128.0, 256.0]),
                capacity,
                plan,
            )],
            Preset::Fig2b => {
                cfg.n_elements = 128;
                vec![SweepSpec::new(cfg, Axis::D, numbers(&[5.0, 10.0, 20.0]), capacity, plan)]
            }
            Preset::Fig4 => {
                cfg.n_elements = 128;
                [Topology::Dual, Topology::Single]
                    .into_iter()
                    .map(|t| {
                        let mut c = cfg.clone();
                        c.topology = t;
                        let mut s = SweepSpec::new(
                            c,
                            Axis::K,
                            numbers(&[0.0, 2.0, 5.0, 10.0]),
                            outage.clone(),
                            plan,
                        );
                        s.label = Some(format!("k:{}", t.as_str()));
                        s
                    })
                    .collect()
            }
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown preset `{s}`")))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
