//! Reference implementations used as test oracles. None of these share code
//! with the library: different algorithms, written for clarity over speed.

#![allow(dead_code)]

use std::f64::consts::PI;

/// `I_n(x)` from the ascending series, summed until terms vanish.
pub fn bessel_series(n: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut lead = 1.0;
    for k in 1..=n {
        lead *= half / k as f64;
    }
    let q = half * half;
    let mut term = lead;
    let mut sum = lead;
    let mut j = 0.0;
    while term > sum * 1e-18 {
        j += 1.0;
        term *= q / (j * (j + n as f64));
        sum += term;
    }
    sum
}

/// `I_n(x) = (1/π) ∫₀^π e^{x cos t} cos(n t) dt` by the trapezoid rule,
/// which converges geometrically for this periodic integrand.
pub fn bessel_trapezoid(n: u32, x: f64) -> f64 {
    let m = 400;
    let h = PI / m as f64;
    let f = |t: f64| (x * t.cos()).exp() * (n as f64 * t).cos();
    let mut s = 0.5 * (f(0.0) + f(PI));
    for i in 1..m {
        s += f(i as f64 * h);
    }
    s * h / PI
}

/// `L_{1/2}(−K) = e^{−K/2}[(1 + K) I₀(K/2) + K I₁(K/2)]`.
pub fn laguerre_half(k: f64) -> f64 {
    (-k / 2.0).exp() * ((1.0 + k) * bessel_series(0, k / 2.0) + k * bessel_series(1, k / 2.0))
}

/// Mean of a Rician magnitude with K-factor `k` and power `omega`.
pub fn rician_mean(k: f64, omega: f64) -> f64 {
    (PI * omega / (4.0 * (k + 1.0))).sqrt() * laguerre_half(k)
}

/// First-order Marcum Q from the Neumann series
/// `e^{−(a²+b²)/2} Σ_k (a/b)^k I_k(ab)` (for `a < b`), or its complement
/// `1 − e^{−(a²+b²)/2} Σ_{k≥1} (b/a)^k I_k(ab)` (for `a ≥ b`), truncated
/// once terms fall below 1e-20.
pub fn marcum_q1_neumann(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        return 1.0;
    }
    if a == 0.0 {
        return (-b * b / 2.0).exp();
    }
    let x = a * b;
    let pref = (-(a * a + b * b) / 2.0).exp();
    let (ratio, start, complement) = if a < b { (a / b, 0, false) } else { (b / a, 1, true) };
    let mut sum = 0.0;
    let mut k = start;
    loop {
        let t = pref * ratio.powi(k as i32) * bessel_series(k, x);
        sum += t;
        if k > x as u32 + 10 && t < 1e-20 {
            break;
        }
        k += 1;
    }
    if complement {
        1.0 - sum
    } else {
        sum
    }
}

/// `Q(x)`: for `|x| ≤ 2` from the Maclaurin series
/// `1/2 − (1/√(2π)) Σ (−1)ⁿ x^{2n+1} / (2ⁿ n! (2n+1))`, otherwise from Craig's
/// form `(1/π) ∫₀^{π/2} exp(−x²/(2 sin²θ)) dθ` by composite 8-point
/// Gauss–Legendre on 64 panels. Small `x` puts a sharp step in Craig's
/// integrand that the panels cannot resolve, hence the split.
pub fn gaussian_q_oracle(x: f64) -> f64 {
    if x < 0.0 {
        return 1.0 - gaussian_q_oracle(-x);
    }
    if x <= 2.0 {
        let mut pow = x;
        let mut sum = 0.0;
        let mut n = 0.0;
        loop {
            let t = pow / (2.0 * n + 1.0);
            sum += t;
            if t.abs() < 1e-20 {
                break;
            }
            n += 1.0;
            pow *= -x * x / (2.0 * n);
        }
        return 0.5 - sum / (2.0 * PI).sqrt();
    }
    const NODES: [f64; 4] = [
        0.183_434_642_495_649_8,
        0.525_532_409_916_329_0,
        0.796_666_477_413_626_7,
        0.960_289_856_497_536_2,
    ];
    const WEIGHTS: [f64; 4] = [
        0.362_683_783_378_362_0,
        0.313_706_645_877_887_3,
        0.222_381_034_453_374_5,
        0.101_228_536_290_376_3,
    ];
    let f = |t: f64| {
        let s = t.sin();
        if s == 0.0 {
            0.0
        } else {
            (-x * x / (2.0 * s * s)).exp()
        }
    };
    let panels = 64;
    let w = (PI / 2.0) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let c = (p as f64 + 0.5) * w;
        let h = w / 2.0;
        for (n, wt) in NODES.iter().zip(WEIGHTS) {
            total += wt * h * (f(c - h * n) + f(c + h * n));
        }
    }
    total / PI
}

/// Kolmogorov–Smirnov distance between `samples` and a CDF.
pub fn ks_distance(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

/// `(λ/(4π d₁ d₂))²`.
pub fn zeta(carrier_hz: f64, d1: f64, d2: f64) -> f64 {
    let lambda = 299_792_458.0 / carrier_hz;
    (lambda / (4.0 * PI * d1 * d2)).powi(2)
}
