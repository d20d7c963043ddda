//! Monte Carlo trial engine.
//!
//! Trial `t` of a plan draws everything from its own ChaCha8 stream, seeded
//! with the plan's master seed and selected with `set_stream(t)`. Trials are
//! grouped into fixed blocks that may run on any worker; block results are
//! merged in block order, so every estimate is a pure function of
//! `(config, plan)` whatever the thread count.
//!
//! One channel draw per trial serves every SNR point of the grid, and the
//! outage, capacity and BER tallies of a trial share that draw.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{db_to_linear, DualRisLink, Link, SingleRisLink, SystemConfig, Topology, TrialRng};
use crate::error::{Error, Result};

const BLOCK: u64 = 1024;
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AntennaPolicy {
    /// Always steer toward this (zero-based) antenna.
    Fixed(usize),
    /// Draw the target uniformly per trial, as random SSK symbols would.
    UniformRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrialPlan {
    pub master_seed: u64,
    pub n_trials: u64,
    pub antenna_policy: AntennaPolicy,
}

impl Default for TrialPlan {
    fn default() -> Self {
        Self {
            master_seed: 0x5eed,
            n_trials: 100_000,
            antenna_policy: AntennaPolicy::UniformRandom,
        }
    }
}

impl TrialPlan {
    pub fn new(master_seed: u64, n_trials: u64) -> Self {
        Self {
            master_seed,
            n_trials,
            ..Self::default()
        }
    }

    fn validate(&self, n_rx: usize) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::config("n_trials must be > 0"));
        }
        if let AntennaPolicy::Fixed(m) = self.antenna_policy {
            if m >= n_rx {
                return Err(Error::config(format!(
                    "fixed antenna {m} out of range for {n_rx} antennas"
                )));
            }
        }
        Ok(())
    }

    /// The random stream of trial `trial`.
    pub fn trial_rng(&self, trial: u64) -> TrialRng {
        let mut rng = TrialRng::seed_from_u64(self.master_seed);
        rng.set_stream(trial);
        rng
    }

    fn target(&self, rng: &mut TrialRng, n_rx: usize) -> usize {
        match self.antenna_policy {
            AntennaPolicy::Fixed(m) => m,
            AntennaPolicy::UniformRandom => rng.random_range(0..n_rx),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Outage,
    Capacity,
    Ber,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricEstimate {
    pub metric: Metric,
    pub snr_db: f64,
    pub value: f64,
    pub trials: u64,
    pub ci95_halfwidth: f64,
}

/// Wald half-width `1.96 √(p(1−p)/n)`; at `p ∈ {0, 1}` that collapses to
/// zero, so the rule-of-three bound `3/n` is reported instead.
pub fn binomial_halfwidth(successes: u64, n: u64) -> f64 {
    if successes == 0 || successes == n {
        return 3.0 / n as f64;
    }
    let p = successes as f64 / n as f64;
    Z95 * (p * (1.0 - p) / n as f64).sqrt()
}

/// Which tallies a run should keep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MetricSet {
    pub outage: bool,
    pub capacity: bool,
    pub ber: bool,
}

impl MetricSet {
    pub fn only(metric: Metric) -> Self {
        let mut s = Self::default();
        s.insert(metric);
        s
    }

    pub fn insert(&mut self, metric: Metric) {
        match metric {
            Metric::Outage => self.outage = true,
            Metric::Capacity => self.capacity = true,
            Metric::Ber => self.ber = true,
        }
    }
}

/// Estimates per SNR point for every requested metric.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct McResults {
    pub outage: Vec<MetricEstimate>,
    pub capacity: Vec<MetricEstimate>,
    pub ber: Vec<MetricEstimate>,
}

#[derive(Debug, Clone)]
struct Tally {
    outage: Vec<u64>,
    cap_sum: Vec<f64>,
    cap_sq: Vec<f64>,
    bit_errors: Vec<u64>,
}

impl Tally {
    fn new(points: usize) -> Self {
        Self {
            outage: vec![0; points],
            cap_sum: vec![0.0; points],
            cap_sq: vec![0.0; points],
            bit_errors: vec![0; points],
        }
    }

    fn merge(&mut self, other: &Tally) {
        for (a, b) in self.outage.iter_mut().zip(&other.outage) {
            *a += b;
        }
        for (a, b) in self.cap_sum.iter_mut().zip(&other.cap_sum) {
            *a += b;
        }
        for (a, b) in self.cap_sq.iter_mut().zip(&other.cap_sq) {
            *a += b;
        }
        for (a, b) in self.bit_errors.iter_mut().zip(&other.bit_errors) {
            *a += b;
        }
    }
}

/// Runs `per_trial` over all trials in deterministic blocks and merges the
/// block accumulators in block order.
fn run_blocks<A, I, F, M>(n_trials: u64, init: I, per_trial: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, u64) + Sync,
    M: Fn(&mut A, A),
{
    let n_blocks = n_trials.div_ceil(BLOCK);
    let parts: Vec<A> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = init();
            for t in b * BLOCK..((b + 1) * BLOCK).min(n_trials) {
                per_trial(&mut acc, t);
            }
            acc
        })
        .collect();
    let mut total = init();
    for p in parts {
        merge(&mut total, p);
    }
    total
}

/// Runs a trial plan against any [`Link`] and tallies the requested metrics
/// at each SNR point (dB of `E_s/N_0`) against threshold `gamma_out`
/// (linear).
pub fn estimate<L: Link>(
    link: &L,
    plan: &TrialPlan,
    snr_db: &[f64],
    gamma_out: f64,
    metrics: MetricSet,
) -> Result<McResults> {
    let n_rx = link.n_rx();
    plan.validate(n_rx)?;
    let bits = n_rx.trailing_zeros();
    if metrics.ber && bits == 0 {
        return Err(Error::config("BER needs at least two receive antennas"));
    }
    let points = snr_db.len();
    // γ = factor · snr · |g|²
    let scale: Vec<f64> = snr_db.iter().map(|&db| link.power_factor() * db_to_linear(db)).collect();
    let amp: Vec<f64> = scale.iter().map(|s| s.sqrt()).collect();

    let tally = run_blocks(
        plan.n_trials,
        || Tally::new(points),
        |acc, t| {
            let mut rng = plan.trial_rng(t);
            let target = plan.target(&mut rng, n_rx);
            let mut gains = vec![Complex64::new(0.0, 0.0); n_rx];
            link.draw_gains(&mut rng, target, &mut gains);
            let g2 = gains[target].norm_sqr();
            for (j, &sc) in scale.iter().enumerate() {
                let gamma = sc * g2;
                if metrics.outage && gamma <= gamma_out {
                    acc.outage[j] += 1;
                }
                if metrics.capacity {
                    let c = gamma.ln_1p() / std::f64::consts::LN_2;
                    acc.cap_sum[j] += c;
                    acc.cap_sq[j] += c * c;
                }
            }
            if metrics.ber {
                // unit-variance noise, reused across the SNR grid
                let noise: Vec<Complex64> = (0..n_rx)
                    .map(|_| {
                        let x: f64 = rng.sample(StandardNormal);
                        let y: f64 = rng.sample(StandardNormal);
                        Complex64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
                    })
                    .collect();
                for (j, &a) in amp.iter().enumerate() {
                    let mut best = 0;
                    let mut best_e = f64::NEG_INFINITY;
                    for p in 0..n_rx {
                        let e = (gains[p] * a + noise[p]).norm_sqr();
                        if e > best_e {
                            best_e = e;
                            best = p;
                        }
                    }
                    acc.bit_errors[j] += (best ^ target).count_ones() as u64;
                }
            }
        },
        |a, b| a.merge(&b),
    );

    let n = plan.n_trials;
    let mut out = McResults::default();
    for (j, &db) in snr_db.iter().enumerate() {
        if metrics.outage {
            let k = tally.outage[j];
            out.outage.push(MetricEstimate {
                metric: Metric::Outage,
                snr_db: db,
                value: k as f64 / n as f64,
                trials: n,
                ci95_halfwidth: binomial_halfwidth(k, n),
            });
        }
        if metrics.capacity {
            let mean = tally.cap_sum[j] / n as f64;
            let var = if n > 1 {
                ((tally.cap_sq[j] - n as f64 * mean * mean) / (n - 1) as f64).max(0.0)
            } else {
                0.0
            };
            out.capacity.push(MetricEstimate {
                metric: Metric::Capacity,
                snr_db: db,
                value: mean,
                trials: n,
                ci95_halfwidth: Z95 * (var / n as f64).sqrt(),
            });
        }
        if metrics.ber {
            let total_bits = n * bits as u64;
            let e = tally.bit_errors[j];
            out.ber.push(MetricEstimate {
                metric: Metric::Ber,
                snr_db: db,
                value: e as f64 / total_bits as f64,
                trials: n,
                ci95_halfwidth: binomial_halfwidth(e, total_bits),
            });
        }
    }
    Ok(out)
}

/// Link for the configured topology.
pub enum ConfiguredLink {
    Dual(DualRisLink),
    Single(SingleRisLink),
}

impl ConfiguredLink {
    pub fn new(config: &SystemConfig) -> Result<Self> {
        Ok(match config.topology {
            Topology::Dual => ConfiguredLink::Dual(DualRisLink::new(config)?),
            Topology::Single => ConfiguredLink::Single(SingleRisLink::new(config)?),
        })
    }
}

impl Link for ConfiguredLink {
    fn n_rx(&self) -> usize {
        match self {
            ConfiguredLink::Dual(l) => l.n_rx(),
            ConfiguredLink::Single(l) => l.n_rx(),
        }
    }

    fn power_factor(&self) -> f64 {
        match self {
            ConfiguredLink::Dual(l) => l.power_factor(),
            ConfiguredLink::Single(l) => l.power_factor(),
        }
    }

    fn draw_gains(&self, rng: &mut TrialRng, target: usize, gains: &mut [Complex64]) {
        match self {
            ConfiguredLink::Dual(l) => l.draw_gains(rng, target, gains),
            ConfiguredLink::Single(l) => l.draw_gains(rng, target, gains),
        }
    }
}

/// All requested metrics for a configuration, from one pass over the trials.
pub fn run_metrics(config: &SystemConfig, plan: &TrialPlan, metrics: MetricSet) -> Result<McResults> {
    let link = ConfiguredLink::new(config)?;
    estimate(&link, plan, &config.snr_db, config.gamma_out_linear(), metrics)
}

/// Fraction of trials with `γ ≤ γ_out`, per SNR grid point.
pub fn run_outage(config: &SystemConfig, plan: &TrialPlan) -> Result<Vec<MetricEstimate>> {
    Ok(run_metrics(config, plan, MetricSet::only(Metric::Outage))?.outage)
}

/// Sample mean of `log₂(1 + γ)`, per SNR grid point.
pub fn run_capacity(config: &SystemConfig, plan: &TrialPlan) -> Result<Vec<MetricEstimate>> {
    Ok(run_metrics(config, plan, MetricSet::only(Metric::Capacity))?.capacity)
}

/// RSSK bit-error rate with energy detection across the receive antennas
/// and natural binary labeling of the antenna index.
pub fn run_ssk_ber(config: &SystemConfig, plan: &TrialPlan) -> Result<Vec<MetricEstimate>> {
    if config.n_rx < 2 {
        return Err(Error::config("BER needs at least two receive antennas"));
    }
    Ok(run_metrics(config, plan, MetricSet::only(Metric::Ber))?.ber)
}

/// Aligned gain magnitude `|gain_target|` of every trial, in trial order.
pub fn gain_samples<L: Link>(link: &L, plan: &TrialPlan) -> Result<Vec<f64>> {
    let n_rx = link.n_rx();
    plan.validate(n_rx)?;
    Ok((0..plan.n_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = plan.trial_rng(t);
            let target = plan.target(&mut rng, n_rx);
            let mut gains = vec![Complex64::new(0.0, 0.0); n_rx];
            link.draw_gains(&mut rng, target, &mut gains);
            gains[target].norm()
        })
        .collect())
}

/// Per-trial instantaneous SNR at one operating point, computed from the
/// exact cascaded sum (not the product approximation).
pub fn empirical_snr_samples(config: &SystemConfig, plan: &TrialPlan, snr_db: f64) -> Result<Vec<f64>> {
    let link = ConfiguredLink::new(config)?;
    let s = link.power_factor() * db_to_linear(snr_db);
    Ok(gain_samples(&link, plan)?.into_iter().map(|g| s * g * g).collect())
}

/// Runs `f` on a dedicated pool of `threads` workers (0 = one per core).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::config(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}
