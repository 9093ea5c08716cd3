//! Log-gamma, log lower incomplete gamma and log-sum-exp helpers.

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k - 1)) for k = 1..=8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const STIRLING_MIN_ARG: f64 = 15.0;

/// Natural log of the gamma function for `a > 0`.
///
/// Arguments below 15 are shifted up by the recurrence
/// `ln Γ(a) = ln Γ(a + m) - ln(a (a + 1) ... (a + m - 1))` and the asymptotic
/// Stirling series is evaluated at the shifted argument.
pub fn log_gamma(a: f64) -> Result<f64> {
    if a.is_nan() || a <= 0.0 {
        return Err(Error::Domain(format!("log_gamma requires a > 0, got {a}")));
    }
    if a.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if a == 1.0 || a == 2.0 {
        return Ok(0.0);
    }
    let mut z = a;
    let mut shift = 0.0;
    if z < STIRLING_MIN_ARG {
        let mut prod = 1.0;
        while z < STIRLING_MIN_ARG {
            prod *= z;
            z += 1.0;
        }
        shift = prod.ln();
    }
    Ok(stirling(z) - shift)
}

fn stirling(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in STIRLING_COEFFS.iter().rev() {
        series = series * inv2 + c;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series * inv
}

const INCGAMMA_EPS: f64 = 1e-17;
const INCGAMMA_MAX_ITER: usize = 100_000;

/// Natural log of the lower incomplete gamma function
/// `γ(a, x) = ∫_0^x t^(a-1) e^(-t) dt`.
///
/// Uses the power series for `x < a + 1` and the continued fraction for the
/// upper function otherwise. Returns `-inf` at `x = 0`.
pub fn log_lower_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    if a.is_nan() || a <= 0.0 || a.is_infinite() {
        return Err(Error::Domain(format!(
            "incomplete gamma requires finite a > 0, got {a}"
        )));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!(
            "incomplete gamma requires x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let lg = log_gamma(a)?;
    if x.is_infinite() {
        return Ok(lg);
    }
    if x < a + 1.0 {
        // γ(a, x) = e^-x x^a Σ_k x^k / (a (a+1) ... (a+k))
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut denom = a;
        for _ in 0..INCGAMMA_MAX_ITER {
            denom += 1.0;
            term *= x / denom;
            sum += term;
            if term.abs() < sum.abs() * INCGAMMA_EPS {
                return Ok(-x + a * x.ln() + sum.ln());
            }
        }
        Err(Error::NumericalFailure(format!(
            "incomplete gamma series did not converge (a = {a}, x = {x})"
        )))
    } else {
        let log_upper = log_upper_gamma_cf(a, x)?;
        let q = (log_upper - lg).exp();
        Ok(lg + (-q).ln_1p())
    }
}

/// ln Γ(a, x) by the modified Lentz continued fraction, valid for x >= a + 1.
fn log_upper_gamma_cf(a: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..INCGAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < INCGAMMA_EPS {
            return Ok(-x + a * x.ln() + h.ln());
        }
    }
    Err(Error::NumericalFailure(format!(
        "incomplete gamma continued fraction did not converge (a = {a}, x = {x})"
    )))
}

/// `ln(e^a + e^b)` without overflow.
#[inline]
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Pairwise log-sum-exp of a slice; `-inf` for an empty slice.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    match values.len() {
        0 => f64::NEG_INFINITY,
        1 => values[0],
        2 => ln_add_exp(values[0], values[1]),
        len => {
            let (left, right) = values.split_at(len / 2);
            ln_add_exp(log_sum_exp(left), log_sum_exp(right))
        }
    }
}
