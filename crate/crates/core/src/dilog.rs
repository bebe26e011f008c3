//! Rogers dilogarithm on `[0, 1]`.
//!
//! `L(x) = Li₂(x) + ½ log(x) log(1 − x)`, evaluated with the power series of
//! `Li₂` on `[0, ½]` and the reflection `L(x) + L(1 − x) = π²/6` above that.
//! [`dilog_oracle`] integrates the defining integral directly and shares no
//! code with the series path.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `L(1) = π²/6`.
pub const L_ONE: f64 = PI * PI / 6.0;

/// `6/π²`, the normalisation that turns dilogarithm sums into rationals.
pub const NORMALIZATION: f64 = 6.0 / (PI * PI);

fn check_domain(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(x))
    }
}

/// `Li₂(x) + ½ log x log(1−x)` for `0 < x ≤ ½`.
fn rogers_lower_half(x: f64) -> f64 {
    let mut term = x;
    let mut sum = 0.0f64;
    let mut k = 1.0;
    while term > 1e-18 * sum.max(f64::MIN_POSITIVE) {
        sum += term / (k * k);
        k += 1.0;
        term *= x;
    }
    sum + 0.5 * x.ln() * (-x).ln_1p()
}

pub fn rogers_dilog(x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok(if x == 0.0 {
        0.0
    } else if x == 1.0 {
        L_ONE
    } else if x <= 0.5 {
        rogers_lower_half(x)
    } else {
        L_ONE - rogers_lower_half(1.0 - x)
    })
}

/// Integrand `−½ {log(1−y)/y + log(y)/(1−y)}` given `y` and `1 − y`
/// computed separately so both endpoints keep full relative accuracy.
fn integrand(y: f64, one_minus_y: f64) -> f64 {
    let log_1my = if y < 0.5 {
        (-y).ln_1p()
    } else {
        one_minus_y.ln()
    };
    -0.5 * (log_1my / y + y.ln() / one_minus_y)
}

/// Tanh-sinh quadrature of the defining integral on `[0, x]`, halving the
/// step until consecutive levels agree to `1e-12` relative.
pub fn dilog_oracle(x: f64) -> Result<f64> {
    check_domain(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let half_pi = PI / 2.0;
    let node = |t: f64| -> f64 {
        let u = half_pi * t.sinh();
        let w = half_pi * t.cosh() / (u.cosh() * u.cosh());
        // y = x / (1 + e^{-2u}), x - y = x / (1 + e^{2u})
        let y = x / (1.0 + (-2.0 * u).exp());
        let x_minus_y = x / (1.0 + (2.0 * u).exp());
        let one_minus_y = (1.0 - x) + x_minus_y;
        if y <= 0.0 || one_minus_y <= 0.0 || w == 0.0 {
            return 0.0;
        }
        0.5 * x * w * integrand(y, one_minus_y)
    };
    const T_MAX: f64 = 6.5;
    let mut h = 0.5;
    let mut sum = node(0.0);
    let mut k = 1;
    while k as f64 * h <= T_MAX {
        let t = k as f64 * h;
        sum += node(t) + node(-t);
        k += 1;
    }
    let mut estimate = h * sum;
    for _ in 0..12 {
        h /= 2.0;
        let mut k = 1;
        while k as f64 * h <= T_MAX {
            let t = k as f64 * h;
            sum += node(t) + node(-t);
            k += 2;
        }
        let next = h * sum;
        let converged = (next - estimate).abs() <= 1e-12 * next.abs().max(1e-300);
        estimate = next;
        if converged {
            break;
        }
    }
    Ok(estimate)
}

/// `(6/π²) Σ w_i L(x_i)`.
pub fn normalized_weighted_sum(args: &[f64], weights: &[u32]) -> Result<f64> {
    if args.len() != weights.len() {
        return Err(Error::LengthMismatch {
            left: args.len(),
            right: weights.len(),
        });
    }
    let mut total = 0.0;
    for (&x, &w) in args.iter().zip(weights) {
        total += w as f64 * rogers_dilog(x)?;
    }
    Ok(NORMALIZATION * total)
}
