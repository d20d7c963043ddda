//! Rician channel sampling, path loss, RIS phase alignment and
//! instantaneous SNR for the dual-RIS and single-RIS links.
//!
//! Conventions: the RIS₁→RIS₂ coefficient `g[k][i] = α e^{-jψ}` (row `k`
//! indexes the RIS₁ element, column `i` the RIS₂ element) and the RIS₂→Rx
//! coefficient `h[p][i] = β e^{-jθ}` (row `p` indexes the receive antenna).
//! A RIS₂ element with phase `φ_i` contributes `g[k][i] h[p][i] e^{jφ_i}`.
//!
//! Two cascade conventions are supported, see [`CascadeMode`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Random stream type used for every trial.
pub type TrialRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Dual,
    Single,
}

impl Topology {
    pub fn as_str(&self) -> &'static str {
        match self {
            Topology::Dual => "dual",
            Topology::Single => "single",
        }
    }
}

impl std::str::FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dual" => Ok(Topology::Dual),
            "single" => Ok(Topology::Single),
            other => Err(Error::config(format!("unknown topology `{other}`"))),
        }
    }
}

/// How the first-hop phases enter the cascaded gain.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CascadeMode {
    /// Every first-hop phase is treated as compensated, so the aligned gain
    /// at antenna `m` is `Σ_k Σ_i α_{k,i} β_{i,m}`. RIS₂ phases still act on
    /// the second hop, which is what makes the other antennas incoherent.
    #[default]
    Compensated,
    /// The literal double sum `Σ_k Σ_i g_{k,i} h_{m,i} e^{jφ_i}` with one
    /// phase per RIS₂ element; aligning it cancels the phase of each column
    /// sum `Σ_k g_{k,i}` instead of every individual path.
    Raw,
}

/// Scenario parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
/// Missing fields take their [`Default`] values.
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    /// Elements per RIS.
    pub n_elements: usize,
    /// Receive antennas; a power of two.
    pub n_rx: usize,
    pub carrier_hz: f64,
    /// RIS₁→RIS₂ distance in meters.
    pub d1_m: f64,
    /// RIS₂→Rx distance in meters.
    pub d2_m: f64,
    pub k1: f64,
    pub k2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub es: f64,
    /// Evaluation grid of `10 log10(E_s/N_0)`.
    pub snr_db: Vec<f64>,
    pub gamma_out_db: f64,
    pub topology: Topology,
    /// Power of ζ in the dual-RIS SNR (1 or 2).
    pub zeta_exponent: u8,
    pub cascade: CascadeMode,
}

/// 0, 2, ..., 40 dB.
pub fn default_snr_grid() -> Vec<f64> {
    (0..=20).map(|i| 2.0 * i as f64).collect()
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            n_elements: 64,
            n_rx: 2,
            carrier_hz: 3e9,
            d1_m: 10.0,
            d2_m: 10.0,
            k1: 2.0,
            k2: 2.0,
            omega1: 1.0,
            omega2: 1.0,
            es: 1.0,
            snr_db: default_snr_grid(),
            gamma_out_db: 10.0,
            topology: Topology::Dual,
            zeta_exponent: 2,
            cascade: CascadeMode::Compensated,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(format!("{name} must be finite and > 0, got {v}")))
            }
        };
        if self.n_elements == 0 {
            return Err(Error::config("n_elements must be >= 1"));
        }
        if !self.n_rx.is_power_of_two() {
            return Err(Error::config(format!(
                "n_rx must be a power of two, got {}",
                self.n_rx
            )));
        }
        positive("carrier_hz", self.carrier_hz)?;
        positive("d1_m", self.d1_m)?;
        positive("d2_m", self.d2_m)?;
        positive("omega1", self.omega1)?;
        positive("omega2", self.omega2)?;
        positive("es", self.es)?;
        for (name, k) in [("k1", self.k1), ("k2", self.k2)] {
            if !(k.is_finite() && k >= 0.0) {
                return Err(Error::config(format!("{name} must be finite and >= 0, got {k}")));
            }
        }
        if let Some(bad) = self.snr_db.iter().find(|v| !v.is_finite()) {
            return Err(Error::config(format!("snr_db entries must be finite, got {bad}")));
        }
        if !self.gamma_out_db.is_finite() {
            return Err(Error::config("gamma_out_db must be finite"));
        }
        if !matches!(self.zeta_exponent, 1 | 2) {
            return Err(Error::config(format!(
                "zeta_exponent must be 1 or 2, got {}",
                self.zeta_exponent
            )));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    pub fn gamma_out_linear(&self) -> f64 {
        db_to_linear(self.gamma_out_db)
    }

    /// Bits carried per channel use, `log2(N_r)`.
    pub fn bits_per_symbol(&self) -> u32 {
        self.n_rx.trailing_zeros()
    }

    /// Large-scale factor multiplying `E_s |gain|^2 / N_0` in the SNR of the
    /// configured topology: `ζ^e` for the dual link, `(λ/(4π d₂))²` for the
    /// single one.
    pub fn power_factor(&self) -> f64 {
        match self.topology {
            Topology::Dual => path_loss_zeta(self).powi(self.zeta_exponent as i32),
            Topology::Single => single_hop_path_loss(self),
        }
    }

    /// SNR scale `s` such that `γ = s |gain|²` at the given `E_s/N_0` in dB.
    pub fn snr_scale(&self, snr_db: f64) -> f64 {
        // E_s cancels: γ = factor · E_s |g|² / N_0 and N_0 = E_s / snr.
        self.power_factor() * db_to_linear(snr_db)
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// ζ = (λ_c / (4π d₁ d₂))².
pub fn path_loss_zeta(config: &SystemConfig) -> f64 {
    let r = config.wavelength() / (4.0 * PI * config.d1_m * config.d2_m);
    r * r
}

/// (λ_c / (4π d₂))², the single-RIS baseline's path loss.
pub fn single_hop_path_loss(config: &SystemConfig) -> f64 {
    let r = config.wavelength() / (4.0 * PI * config.d2_m);
    r * r
}

// ---------------------------------------------------------------------------
// Rician sampling
// ---------------------------------------------------------------------------

/// Precomputed `√Ω(√(K/(K+1)) + √(1/(K+1)) w̃)` sampler.
#[derive(Debug, Clone, Copy)]
pub struct Rician {
    los: f64,
    /// per-component standard deviation of the scattered part
    scatter: f64,
}

impl Rician {
    pub fn new(k: f64, omega: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::domain(format!("K-factor must be finite and >= 0, got {k}")));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::domain(format!("omega must be finite and > 0, got {omega}")));
        }
        Ok(Self {
            los: (omega * k / (k + 1.0)).sqrt(),
            scatter: (0.5 * omega / (k + 1.0)).sqrt(),
        })
    }

    #[inline]
    pub fn sample(&self, rng: &mut TrialRng) -> Complex64 {
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        Complex64::new(self.los + self.scatter * x, self.scatter * y)
    }
}

/// One Rician coefficient with K-factor `k` and total power `omega`.
pub fn sample_rician(k: f64, omega: f64, rng: &mut TrialRng) -> Result<Complex64> {
    Ok(Rician::new(k, omega)?.sample(rng))
}

// ---------------------------------------------------------------------------
// Realizations and phases
// ---------------------------------------------------------------------------

/// One draw of both hop matrices, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    n: usize,
    n_rx: usize,
    g: Vec<Complex64>,
    h: Vec<Complex64>,
}

impl ChannelRealization {
    /// `g` is N×N (row k = RIS₁ element), `h` is N_r×N (row p = antenna).
    pub fn from_parts(n: usize, n_rx: usize, g: Vec<Complex64>, h: Vec<Complex64>) -> Result<Self> {
        if n == 0 || n_rx == 0 {
            return Err(Error::domain("empty realization"));
        }
        if g.len() != n * n || h.len() != n_rx * n {
            return Err(Error::domain(format!(
                "dimension mismatch: g has {} entries (want {}), h has {} (want {})",
                g.len(),
                n * n,
                h.len(),
                n_rx * n
            )));
        }
        Ok(Self { n, n_rx, g, h })
    }

    /// Draws `g` row by row, then `h` row by row.
    pub fn sample(config: &SystemConfig, rng: &mut TrialRng) -> Result<Self> {
        config.validate()?;
        let n = config.n_elements;
        let hop1 = Rician::new(config.k1, config.omega1)?;
        let hop2 = Rician::new(config.k2, config.omega2)?;
        let g = (0..n * n).map(|_| hop1.sample(rng)).collect();
        let h = (0..config.n_rx * n).map(|_| hop2.sample(rng)).collect();
        Ok(Self {
            n,
            n_rx: config.n_rx,
            g,
            h,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.n
    }

    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    pub fn g(&self, k: usize, i: usize) -> Complex64 {
        self.g[k * self.n + i]
    }

    pub fn h(&self, p: usize, i: usize) -> Complex64 {
        self.h[p * self.n + i]
    }

    pub fn h_row(&self, p: usize) -> &[Complex64] {
        &self.h[p * self.n..(p + 1) * self.n]
    }

    fn check_antenna(&self, m: usize) -> Result<()> {
        if m >= self.n_rx {
            return Err(Error::domain(format!(
                "antenna index {m} out of range for {} antennas",
                self.n_rx
            )));
        }
        Ok(())
    }
}

/// RIS₂ phase shifts in radians, normalized to [-π, π).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    pub phases: Vec<f64>,
}

impl PhaseProfile {
    pub fn new(phases: Vec<f64>) -> Self {
        Self {
            phases: phases.into_iter().map(wrap_phase).collect(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self { phases: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// Unit-modulus reflection coefficients `e^{jφ_i}`.
    pub fn coefficients(&self) -> Vec<Complex64> {
        self.phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect()
    }
}

fn wrap_phase(p: f64) -> f64 {
    let w = (p + PI).rem_euclid(2.0 * PI) - PI;
    if w == -0.0 {
        0.0
    } else {
        w
    }
}

/// Phase profile steering the cascade toward antenna `m` (zero-based).
///
/// Under [`CascadeMode::Compensated`] each element cancels the second-hop
/// phase, `φ_i = θ_{i,m}`. Under [`CascadeMode::Raw`] it cancels the phase of
/// `h_{m,i} Σ_k g_{k,i}`, which maximizes the literal double sum.
pub fn optimal_phases(
    real: &ChannelRealization,
    m: usize,
    mode: CascadeMode,
) -> Result<PhaseProfile> {
    real.check_antenna(m)?;
    let phases = (0..real.n)
        .map(|i| {
            let h = real.h(m, i);
            match mode {
                CascadeMode::Compensated => -h.arg(),
                CascadeMode::Raw => {
                    let col: Complex64 = (0..real.n).map(|k| real.g(k, i)).sum();
                    -(h * col).arg()
                }
            }
        })
        .collect();
    Ok(PhaseProfile::new(phases))
}

/// Cascaded gain at antenna `m` as the N² term double sum.
pub fn effective_gain_dual(
    real: &ChannelRealization,
    phases: &PhaseProfile,
    m: usize,
    mode: CascadeMode,
) -> Result<Complex64> {
    real.check_antenna(m)?;
    if phases.len() != real.n {
        return Err(Error::domain(format!(
            "phase profile has {} entries for {} elements",
            phases.len(),
            real.n
        )));
    }
    let coef = phases.coefficients();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..real.n {
        for (i, c) in coef.iter().enumerate() {
            let h = real.h(m, i);
            let g = real.g(k, i);
            acc += match mode {
                CascadeMode::Compensated => g.norm_sqr().sqrt() * h * c,
                CascadeMode::Raw => g * h * c,
            };
        }
    }
    Ok(acc)
}

/// Single-RIS gain `Σ_i h_i e^{jφ_i}`; equals `Σ_i |h_i|` under aligned phases.
pub fn effective_gain_single(h_row: &[Complex64], phases: &PhaseProfile) -> Result<Complex64> {
    if h_row.len() != phases.len() {
        return Err(Error::domain(format!(
            "channel row has {} entries, phase profile {}",
            h_row.len(),
            phases.len()
        )));
    }
    Ok(h_row
        .iter()
        .zip(phases.coefficients())
        .map(|(h, c)| h * c)
        .sum())
}

/// `γ_m = factor · E_s |gain|² / N_0` for the configured topology, with
/// phases aligned to antenna `m`.
pub fn instantaneous_snr(
    config: &SystemConfig,
    real: &ChannelRealization,
    m: usize,
    n0: f64,
) -> Result<f64> {
    if !(n0.is_finite() && n0 > 0.0) {
        return Err(Error::domain(format!("noise power must be finite and > 0, got {n0}")));
    }
    let phases = optimal_phases(real, m, config.cascade)?;
    let gain = match config.topology {
        Topology::Dual => effective_gain_dual(real, &phases, m, config.cascade)?,
        Topology::Single => effective_gain_single(real.h_row(m), &phases)?,
    };
    Ok(snr_from_gain(config, gain, n0))
}

/// `factor · E_s |gain|² / N_0` for an already computed gain.
pub fn snr_from_gain(config: &SystemConfig, gain: Complex64, n0: f64) -> f64 {
    config.power_factor() * config.es * gain.norm_sqr() / n0
}

// ---------------------------------------------------------------------------
// Fast per-trial draws for the Monte Carlo engine
// ---------------------------------------------------------------------------

/// A link that can produce per-antenna effective gains for one trial.
///
/// Implementations write the complex gain seen at every receive antenna when
/// the surface is steered toward `target`; the SNR at antenna `p` is then
/// `power_factor() · E_s |gains[p]|² / N_0`.
pub trait Link: Sync {
    fn n_rx(&self) -> usize;
    fn power_factor(&self) -> f64;
    fn draw_gains(&self, rng: &mut TrialRng, target: usize, gains: &mut [Complex64]);
}

/// Dual-RIS link. Consumes the random stream in the same order as
/// [`ChannelRealization::sample`] and reproduces
/// `effective_gain_dual(optimal_phases(target))` for every antenna without
/// materializing the N×N matrix.
#[derive(Debug, Clone)]
pub struct DualRisLink {
    n: usize,
    n_rx: usize,
    hop1: Rician,
    hop2: Rician,
    mode: CascadeMode,
    factor: f64,
}

impl DualRisLink {
    pub fn new(config: &SystemConfig) -> Result<Self> {
        config.validate()?;
        let mut dual = config.clone();
        dual.topology = Topology::Dual;
        Ok(Self {
            n: config.n_elements,
            n_rx: config.n_rx,
            hop1: Rician::new(config.k1, config.omega1)?,
            hop2: Rician::new(config.k2, config.omega2)?,
            mode: config.cascade,
            factor: dual.power_factor(),
        })
    }
}

impl Link for DualRisLink {
    fn n_rx(&self) -> usize {
        self.n_rx
    }

    fn power_factor(&self) -> f64 {
        self.factor
    }

    fn draw_gains(&self, rng: &mut TrialRng, target: usize, gains: &mut [Complex64]) {
        let n = self.n;
        // column sums over k, accumulated in the same order as the double sum
        let mut col_mag = vec![0.0; n];
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for _k in 0..n {
            for i in 0..n {
                let g = self.hop1.sample(rng);
                match self.mode {
                    CascadeMode::Compensated => col_mag[i] += g.norm_sqr().sqrt(),
                    CascadeMode::Raw => col[i] += g,
                }
            }
        }
        let h: Vec<Complex64> = (0..self.n_rx * n).map(|_| self.hop2.sample(rng)).collect();
        let steer = &h[target * n..(target + 1) * n];
        // e^{jφ_i} times the first-hop column term
        let weights: Vec<Complex64> = match self.mode {
            CascadeMode::Compensated => steer
                .iter()
                .zip(&col_mag)
                .map(|(hm, a)| a * Complex64::from_polar(1.0, -hm.arg()))
                .collect(),
            CascadeMode::Raw => steer
                .iter()
                .zip(&col)
                .map(|(hm, c)| c * Complex64::from_polar(1.0, -(hm * c).arg()))
                .collect(),
        };
        for (p, out) in gains.iter_mut().enumerate().take(self.n_rx) {
            let row = &h[p * n..(p + 1) * n];
            *out = row.iter().zip(&weights).map(|(h, w)| h * w).sum();
        }
        if self.mode == CascadeMode::Compensated {
            // the aligned term is real by construction; drop rounding residue
            gains[target] = Complex64::new(gains[target].norm(), 0.0);
        }
    }
}

/// Single-RIS baseline: one Rician(K₂, Ω₂) hop of N elements, coherent
/// magnitude combining toward the target, path loss (λ/(4π d₂))².
#[derive(Debug, Clone)]
pub struct SingleRisLink {
    n: usize,
    n_rx: usize,
    hop: Rician,
    factor: f64,
}

impl SingleRisLink {
    pub fn new(config: &SystemConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            n: config.n_elements,
            n_rx: config.n_rx,
            hop: Rician::new(config.k2, config.omega2)?,
            factor: single_hop_path_loss(config),
        })
    }
}

impl Link for SingleRisLink {
    fn n_rx(&self) -> usize {
        self.n_rx
    }

    fn power_factor(&self) -> f64 {
        self.factor
    }

    fn draw_gains(&self, rng: &mut TrialRng, target: usize, gains: &mut [Complex64]) {
        let n = self.n;
        let h: Vec<Complex64> = (0..self.n_rx * n).map(|_| self.hop.sample(rng)).collect();
        let steer = &h[target * n..(target + 1) * n];
        for (p, out) in gains.iter_mut().enumerate().take(self.n_rx) {
            let row = &h[p * n..(p + 1) * n];
            *out = row
                .iter()
                .zip(steer)
                .map(|(hp, hm)| hp * Complex64::from_polar(1.0, -hm.arg()))
                .sum();
        }
        gains[target] = Complex64::new(gains[target].norm(), 0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::laguerre_half;
    use rand::SeedableRng;

    fn rng(seed: u64) -> TrialRng {
        TrialRng::seed_from_u64(seed)
    }

    fn real_from_mags(alpha: &[f64], beta: &[f64], n: usize, n_rx: usize) -> ChannelRealization {
        let g = alpha.iter().map(|&a| Complex64::new(a, 0.0)).collect();
        let h = beta.iter().map(|&b| Complex64::new(b, 0.0)).collect();
        ChannelRealization::from_parts(n, n_rx, g, h).unwrap()
    }

    #[test]
    fn pure_los_limit() {
        let mut r = rng(1);
        for _ in 0..100 {
            let c = sample_rician(1e9, 1.0, &mut r).unwrap();
            assert!((c.norm() - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn rician_rejects_bad_parameters() {
        let mut r = rng(1);
        assert!(sample_rician(-1.0, 1.0, &mut r).is_err());
        assert!(sample_rician(1.0, 0.0, &mut r).is_err());
        assert!(sample_rician(f64::NAN, 1.0, &mut r).is_err());
    }

    #[test]
    fn rician_mean_k2() {
        let mut r = rng(7);
        let n = 1_000_000;
        let mean: f64 = (0..n).map(|_| sample_rician(2.0, 1.0, &mut r).unwrap().norm()).sum::<f64>()
            / n as f64;
        let expect = (PI / 12.0).sqrt() * laguerre_half(2.0).unwrap();
        assert!((expect - 0.927_696_649_787_476_8).abs() < 1e-12);
        assert!((mean - expect).abs() < 0.002, "{mean} vs {expect}");
    }

    #[test]
    fn zeta_values() {
        let cfg = SystemConfig::default();
        let z = path_loss_zeta(&cfg);
        assert!((z / 6.323_815_174_603_834e-9 - 1.0).abs() < 1e-12, "{z}");
        let mut far = cfg.clone();
        far.d1_m *= 2.0;
        assert!((path_loss_zeta(&far) * 4.0 / z - 1.0).abs() < 1e-12);
        let mut hi = cfg.clone();
        hi.carrier_hz = 10e9;
        assert!((path_loss_zeta(&hi) / z - 0.09).abs() < 1e-12);
    }

    #[test]
    fn path_loss_monotone() {
        let base = SystemConfig::default();
        let z = path_loss_zeta(&base);
        for f in [
            |c: &mut SystemConfig| c.carrier_hz *= 1.5,
            |c: &mut SystemConfig| c.d1_m *= 1.5,
            |c: &mut SystemConfig| c.d2_m *= 1.5,
        ] {
            let mut c = base.clone();
            f(&mut c);
            assert!(path_loss_zeta(&c) < z);
        }
    }

    #[test]
    fn config_validation() {
        let mut c = SystemConfig::default();
        c.n_rx = 3;
        assert!(c.validate().is_err());
        let mut c = SystemConfig::default();
        c.k1 = -0.5;
        assert!(c.validate().is_err());
        let mut c = SystemConfig::default();
        c.zeta_exponent = 3;
        assert!(c.validate().is_err());
        let mut c = SystemConfig::default();
        c.d2_m = 0.0;
        assert!(c.validate().is_err());
        assert!(SystemConfig::default().validate().is_ok());
    }

    #[test]
    fn zero_phases_for_real_channel() {
        let real = real_from_mags(&[1.0, 2.0, 3.0, 4.0], &[5.0, 6.0, 0.5, 0.5], 2, 2);
        for mode in [CascadeMode::Compensated, CascadeMode::Raw] {
            let p = optimal_phases(&real, 0, mode).unwrap();
            assert!(p.phases.iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn hand_examples() {
        let real = real_from_mags(&[2.0], &[3.0], 1, 1);
        let p = optimal_phases(&real, 0, CascadeMode::Compensated).unwrap();
        let g = effective_gain_dual(&real, &p, 0, CascadeMode::Compensated).unwrap();
        assert!((g - Complex64::new(6.0, 0.0)).norm() < 1e-15);

        let real = real_from_mags(&[1.0, 2.0, 3.0, 4.0], &[5.0, 6.0, 1.0, 1.0], 2, 2);
        let p = optimal_phases(&real, 0, CascadeMode::Compensated).unwrap();
        let g = effective_gain_dual(&real, &p, 0, CascadeMode::Compensated).unwrap();
        assert!((g.re - 56.0).abs() < 1e-12 && g.im.abs() < 1e-12);

        let mut cfg = SystemConfig::default();
        cfg.n_elements = 2;
        // pick N_0 so that ζ² E_s / N_0 = 1e-16
        let n0 = cfg.power_factor() * cfg.es / 1e-16;
        let snr = instantaneous_snr(&cfg, &real, 0, n0).unwrap();
        assert!((snr / 3.136e-13 - 1.0).abs() < 1e-12, "{snr}");
    }

    #[test]
    fn snr_zero_and_quadratic() {
        let cfg = SystemConfig::default();
        let zero = real_from_mags(&[0.0; 4], &[0.0; 4], 2, 2);
        assert_eq!(instantaneous_snr(&cfg, &zero, 0, 1.0).unwrap(), 0.0);
        let one = real_from_mags(&[1.0; 4], &[1.0; 4], 2, 2);
        let two = real_from_mags(&[2.0; 4], &[1.0; 4], 2, 2);
        let a = instantaneous_snr(&cfg, &one, 1, 1.0).unwrap();
        let b = instantaneous_snr(&cfg, &two, 1, 1.0).unwrap();
        assert!((b / a - 4.0).abs() < 1e-12);
        assert!(instantaneous_snr(&cfg, &one, 1, 0.0).is_err());
        assert!(instantaneous_snr(&cfg, &one, 2, 1.0).is_err());
    }

    #[test]
    fn single_gain_examples() {
        let h = [Complex64::new(0.7, 0.0)];
        assert!((effective_gain_single(&h, &PhaseProfile::zeros(1)).unwrap().re - 0.7).abs() < 1e-15);
        let h = [
            Complex64::from_polar(1.0, 0.3),
            Complex64::from_polar(2.0, -1.1),
            Complex64::from_polar(3.0, 2.9),
        ];
        let p = PhaseProfile::new(h.iter().map(|c| -c.arg()).collect());
        let g = effective_gain_single(&h, &p).unwrap();
        assert!((g.re - 6.0).abs() < 1e-12 && g.im.abs() < 1e-12);
        assert!(effective_gain_single(&h, &PhaseProfile::zeros(2)).is_err());
    }

    #[test]
    fn aligned_gain_is_real_and_factorizes() {
        let mut cfg = SystemConfig::default();
        cfg.n_elements = 16;
        cfg.n_rx = 4;
        let mut r = rng(11);
        for _ in 0..20 {
            let real = ChannelRealization::sample(&cfg, &mut r).unwrap();
            for m in 0..4 {
                let p = optimal_phases(&real, m, CascadeMode::Compensated).unwrap();
                let g = effective_gain_dual(&real, &p, m, CascadeMode::Compensated).unwrap();
                assert!(g.re > 0.0 && g.im.abs() <= 1e-9 * g.re);
                let factored: f64 = (0..16)
                    .map(|i| (0..16).map(|k| real.g(k, i).norm()).sum::<f64>() * real.h(m, i).norm())
                    .sum();
                assert!((g.re - factored).abs() < 1e-9 * factored);

                let p = optimal_phases(&real, m, CascadeMode::Raw).unwrap();
                let g = effective_gain_dual(&real, &p, m, CascadeMode::Raw).unwrap();
                assert!(g.re > 0.0 && g.im.abs() <= 1e-9 * g.re);
            }
        }
    }

    #[test]
    fn aligned_gain_beats_random_profiles() {
        let mut cfg = SystemConfig::default();
        cfg.n_elements = 16;
        let mut r = rng(3);
        let real = ChannelRealization::sample(&cfg, &mut r).unwrap();
        for mode in [CascadeMode::Compensated, CascadeMode::Raw] {
            let best = effective_gain_dual(&real, &optimal_phases(&real, 1, mode).unwrap(), 1, mode)
                .unwrap()
                .norm();
            for _ in 0..100 {
                let p = PhaseProfile::new((0..16).map(|_| r.random_range(-PI..PI)).collect());
                let g = effective_gain_dual(&real, &p, 1, mode).unwrap().norm();
                assert!(best >= g);
            }
        }
    }

    #[test]
    fn phase_profile_is_wrapped() {
        let p = PhaseProfile::new(vec![3.0 * PI, -7.0, 0.5]);
        assert!(p.phases.iter().all(|&x| (-PI..PI).contains(&x)));
        assert!((p.phases[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fast_draw_matches_matrix_path() {
        for mode in [CascadeMode::Compensated, CascadeMode::Raw] {
            let mut cfg = SystemConfig::default();
            cfg.n_elements = 12;
            cfg.n_rx = 4;
            cfg.cascade = mode;
            let link = DualRisLink::new(&cfg).unwrap();
            for seed in 0..5 {
                let real = ChannelRealization::sample(&cfg, &mut rng(seed)).unwrap();
                let mut gains = vec![Complex64::new(0.0, 0.0); 4];
                link.draw_gains(&mut rng(seed), 2, &mut gains);
                let p = optimal_phases(&real, 2, mode).unwrap();
                for (ant, g) in gains.iter().enumerate() {
                    let slow = effective_gain_dual(&real, &p, ant, mode).unwrap();
                    assert!((slow - g).norm() < 1e-9 * slow.norm().max(1.0), "{mode:?} {ant}");
                }
            }
        }
    }

    #[test]
    fn single_link_matches_gain_function() {
        let mut cfg = SystemConfig::default();
        cfg.topology = Topology::Single;
        cfg.n_elements = 8;
        let link = SingleRisLink::new(&cfg).unwrap();
        let mut gains = vec![Complex64::new(0.0, 0.0); 2];
        link.draw_gains(&mut rng(5), 0, &mut gains);
        // the single link draws only the second hop
        let hop = Rician::new(cfg.k2, cfg.omega2).unwrap();
        let mut r = rng(5);
        let h: Vec<Complex64> = (0..16).map(|_| hop.sample(&mut r)).collect();
        let mag: f64 = h[..8].iter().map(|c| c.norm()).sum();
        assert!((gains[0].re - mag).abs() < 1e-12);
        assert!(gains[1].norm() <= h[8..].iter().map(|c| c.norm()).sum::<f64>());
        assert!((link.power_factor() - single_hop_path_loss(&cfg)).abs() == 0.0);
    }
}
