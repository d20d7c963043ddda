//! Gaussian (CLT) statistics of the cascaded gain.
//!
//! The aligned gain is modeled as `Z = A·B` with `A`, `B` the N-term sums of
//! first- and second-hop magnitudes, each approximately normal, and the
//! product itself approximated as `N(μ_A μ_B, μ_A² σ_B² + μ_B² σ_A²)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::channel::{SystemConfig, Topology};
use crate::error::{Error, Result};
use crate::specfun::laguerre_half;

fn check(n: usize, k: f64, omega: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("element count must be >= 1"));
    }
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::domain(format!("K-factor must be finite and >= 0, got {k}")));
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::domain(format!("omega must be finite and > 0, got {omega}")));
    }
    Ok(())
}

/// Mean of one Rician magnitude: `√(πΩ/(4(K+1))) L_{1/2}(-K)`.
pub fn element_mean(k: f64, omega: f64) -> Result<f64> {
    check(1, k, omega)?;
    Ok((PI * omega / (4.0 * (k + 1.0))).sqrt() * laguerre_half(k)?)
}

/// Mean of the sum of `n` i.i.d. Rician magnitudes.
pub fn sum_mean(n: usize, k: f64, omega: f64) -> Result<f64> {
    check(n, k, omega)?;
    Ok(n as f64 * element_mean(k, omega)?)
}

/// Variance of the sum of `n` i.i.d. Rician magnitudes, `n (Ω − μ₁²)` with
/// `μ₁` the per-element mean.
pub fn sum_variance(n: usize, k: f64, omega: f64) -> Result<f64> {
    check(n, k, omega)?;
    let mu1 = element_mean(k, omega)?;
    let v = omega - mu1 * mu1;
    if v <= 0.0 {
        return Err(Error::domain(format!(
            "nonpositive magnitude variance {v:e} for K={k}, omega={omega}"
        )));
    }
    Ok(n as f64 * v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CltMoments {
    pub mu_alpha: f64,
    pub mu_beta: f64,
    pub sigma2_alpha: f64,
    pub sigma2_beta: f64,
    pub mu_z: f64,
    pub sigma2_z: f64,
}

impl CltMoments {
    pub fn from_hops(mu_alpha: f64, sigma2_alpha: f64, mu_beta: f64, sigma2_beta: f64) -> Self {
        Self {
            mu_alpha,
            mu_beta,
            sigma2_alpha,
            sigma2_beta,
            mu_z: mu_alpha * mu_beta,
            sigma2_z: mu_alpha * mu_alpha * sigma2_beta + mu_beta * mu_beta * sigma2_alpha,
        }
    }
}

/// Product-approximation moments for the dual-RIS cascade (hop 1: N, K₁,
/// Ω₁; hop 2: N, K₂, Ω₂).
pub fn product_moments(config: &SystemConfig) -> Result<CltMoments> {
    config.validate()?;
    let n = config.n_elements;
    Ok(CltMoments::from_hops(
        sum_mean(n, config.k1, config.omega1)?,
        sum_variance(n, config.k1, config.omega1)?,
        sum_mean(n, config.k2, config.omega2)?,
        sum_variance(n, config.k2, config.omega2)?,
    ))
}

/// Normal approximation `N(mean, variance)` of the aligned gain, the only
/// input the closed-form chain needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainStats {
    pub mean: f64,
    pub variance: f64,
}

impl GainStats {
    pub fn new(mean: f64, variance: f64) -> Result<Self> {
        if !(mean.is_finite() && mean >= 0.0 && variance.is_finite() && variance > 0.0) {
            return Err(Error::domain(format!(
                "gain statistics need mean >= 0 and variance > 0, got ({mean}, {variance})"
            )));
        }
        Ok(Self { mean, variance })
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

impl From<&CltMoments> for GainStats {
    fn from(m: &CltMoments) -> Self {
        Self {
            mean: m.mu_z,
            variance: m.sigma2_z,
        }
    }
}

impl From<CltMoments> for GainStats {
    fn from(m: CltMoments) -> Self {
        (&m).into()
    }
}

/// Gain statistics for the configured topology. The single-RIS baseline
/// uses the one-hop sum `N(N μ₁, N(Ω₂ − μ₁²))` with hop-2 parameters.
pub fn gain_stats(config: &SystemConfig) -> Result<GainStats> {
    match config.topology {
        Topology::Dual => Ok(product_moments(config)?.into()),
        Topology::Single => {
            config.validate()?;
            let n = config.n_elements;
            GainStats::new(
                sum_mean(n, config.k2, config.omega2)?,
                sum_variance(n, config.k2, config.omega2)?,
            )
        }
    }
}
