//! Closed-form performance chain built on the Gaussian gain approximation.
//!
//! With `Z ~ N(μ, σ²)` and `γ = s |Z|²`, `γ/(sσ²)` is a one-degree-of-freedom
//! noncentral chi-square with noncentrality `(μ/σ)²`. Outage and capacity
//! follow from that distribution. Arguments shared by every outage form:
//! `a = μ/σ` and `z = √(γ_out/s)/σ`.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::channel::SystemConfig;
use crate::error::{Error, Result};
use crate::moments::{gain_stats, GainStats};
use crate::quad;
use crate::specfun::{
    bessel_i_scaled_raw, gaussian_q_raw, marcum_q1_raw, marcum_q_half_raw, normal_cdf_raw,
};

/// Which algebraic route evaluates the outage CDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutageForm {
    /// `1 − Q_{1/2}(a, z)`, the Marcum form, via the Poisson-mixture series.
    Marcum,
    /// `1 − [Q(z − a) + Q(z + a)]`.
    GaussianQPair,
    /// `Φ(z − a) − Φ(−z − a)` straight from the folded normal.
    ExactFoldedNormal,
}

impl OutageForm {
    pub const ALL: [OutageForm; 3] = [
        OutageForm::Marcum,
        OutageForm::GaussianQPair,
        OutageForm::ExactFoldedNormal,
    ];
}

fn check_scale(s: f64) -> Result<()> {
    if s.is_finite() && s > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("SNR scale must be finite and > 0, got {s}")))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::domain(format!("SNR value must be >= 0, got {gamma}")));
    }
    Ok(())
}

#[inline]
fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Density of `γ = s|Z|²` (one degree of freedom):
/// `[φ((r−μ)/σ) + φ((r+μ)/σ)] / (2 s σ r)` with `r = √(γ/s)`.
///
/// Written with the Gaussian kernels instead of
/// `exp(−(r² + μ²)/2σ²) cosh(μr/σ²)` so nothing overflows for large `μ/σ`.
/// Infinite at `γ = 0` (integrable `γ^{-1/2}` singularity).
pub fn snr_pdf(gamma: f64, stats: &GainStats, s: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_scale(s)?;
    if gamma == 0.0 {
        return Ok(f64::INFINITY);
    }
    let sigma = stats.std_dev();
    let r = (gamma / s).sqrt();
    let kernel = std_normal_pdf((r - stats.mean) / sigma) + std_normal_pdf((r + stats.mean) / sigma);
    Ok(kernel / (2.0 * s * sigma * r))
}

/// The two-dimensional (squared Rician) density
/// `1/(2sσ²) exp(−(γ/s + μ²)/(2σ²)) I₀(μ√(γ/s)/σ²)`, whose CDF is
/// `1 − Q₁(μ/σ, √(γ/s)/σ)`. The Bessel factor is evaluated scaled,
/// `exp(−(r − μ)²/2σ²) · e^{−x} I₀(x)` with `x = μr/σ²`.
pub fn snr_pdf_rician(gamma: f64, stats: &GainStats, s: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_scale(s)?;
    let var = stats.variance;
    let r = (gamma / s).sqrt();
    let x = stats.mean * r / var;
    let d = r - stats.mean;
    Ok((-d * d / (2.0 * var)).exp() * bessel_i_scaled_raw(0, x) / (2.0 * s * var))
}

/// Normalized arguments `(a, z)`.
fn outage_args(gamma_out: f64, stats: &GainStats, s: f64) -> (f64, f64) {
    let sigma = stats.std_dev();
    (stats.mean / sigma, (gamma_out / s).sqrt() / sigma)
}

/// `P(γ ≤ gamma_out)` for SNR scale `s`.
pub fn outage_at(gamma_out: f64, stats: &GainStats, s: f64, form: OutageForm) -> Result<f64> {
    check_gamma(gamma_out)?;
    check_scale(s)?;
    if gamma_out.is_infinite() {
        return Ok(1.0);
    }
    let (a, z) = outage_args(gamma_out, stats, s);
    let p = match form {
        OutageForm::ExactFoldedNormal => normal_cdf_raw(z - a) - normal_cdf_raw(-z - a),
        OutageForm::GaussianQPair => 1.0 - (gaussian_q_raw(z - a) + gaussian_q_raw(z + a)),
        OutageForm::Marcum => 1.0 - marcum_q_half_raw(a, z),
    };
    Ok(p.clamp(0.0, 1.0))
}

/// `1 − Q₁(a, z)` with the standard first-order Marcum function: the CDF of
/// [`snr_pdf_rician`], not of the one-degree-of-freedom law.
pub fn outage_rician(gamma_out: f64, stats: &GainStats, s: f64) -> Result<f64> {
    check_gamma(gamma_out)?;
    check_scale(s)?;
    let (a, z) = outage_args(gamma_out, stats, s);
    Ok(1.0 - marcum_q1_raw(a, z))
}

/// Outage probability over the configured SNR grid.
pub fn outage_probability(config: &SystemConfig, form: OutageForm) -> Result<Vec<f64>> {
    let stats = gain_stats(config)?;
    let gamma_out = config.gamma_out_linear();
    config
        .snr_db
        .iter()
        .map(|&db| outage_at(gamma_out, &stats, config.snr_scale(db), form))
        .collect()
}

/// Largest `|(1 − Q₁(a, z)) − P_out|` over the configured SNR grid: how far
/// the first-order Marcum expression sits from the one-degree-of-freedom
/// outage it is meant to describe.
pub fn marcum_order_residual(config: &SystemConfig) -> Result<f64> {
    let stats = gain_stats(config)?;
    let gamma_out = config.gamma_out_linear();
    let mut worst: f64 = 0.0;
    for &db in &config.snr_db {
        let s = config.snr_scale(db);
        let exact = outage_at(gamma_out, &stats, s, OutageForm::ExactFoldedNormal)?;
        worst = worst.max((outage_rician(gamma_out, &stats, s)? - exact).abs());
    }
    Ok(worst)
}

/// Relative tolerance of the capacity quadrature.
pub const CAPACITY_REL_TOL: f64 = 1e-9;

/// `E[log₂(1 + γ)]` under [`snr_pdf`], by adaptive quadrature.
///
/// Integrated in the amplitude variable `r = √(γ/s)` (so the density is the
/// smooth folded normal) over `[max(0, μ − 10σ), μ + 10σ]`, i.e. up to
/// `γ_max = s(μ + 10σ)²`. The neglected mass is below 1e-20.
pub fn ergodic_capacity_integral(stats: &GainStats, s: f64) -> Result<f64> {
    check_scale(s)?;
    let mu = stats.mean;
    let sigma = stats.std_dev();
    let lo = (mu - 10.0 * sigma).max(0.0);
    let hi = mu + 10.0 * sigma;
    let integrand = |r: f64| {
        let density = (std_normal_pdf((r - mu) / sigma) + std_normal_pdf((r + mu) / sigma)) / sigma;
        (s * r * r).ln_1p() / LN_2 * density
    };
    let value = quad::integrate(integrand, lo, hi, 16, f64::MIN_POSITIVE, CAPACITY_REL_TOL)?;
    Ok(value.max(0.0))
}

/// Deterministic-equivalent capacity `log₂(1 + s μ²)`.
pub fn ergodic_capacity_bound(stats: &GainStats, s: f64) -> Result<f64> {
    check_scale(s)?;
    Ok((s * stats.mean * stats.mean).ln_1p() / LN_2)
}
