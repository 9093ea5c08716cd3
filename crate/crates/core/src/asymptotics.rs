//! Large-sample behaviour: limits of `B_p0`, closed-form approximations of
//! the Bayes factors for large `n`, the boundaries of the inconsistency sets
//! when `p` grows linearly with `n`, and consistency verdicts.

use crate::bayes_factors::{BayesFactorKind, RobustRho};
use crate::error::{Error, Result};
use crate::numerics::{log_gamma, log_lower_incomplete_gamma};
use crate::stats::SufficientStatistic;
use serde::{Deserialize, Serialize};

/// Which model the data are sampled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    Null,
    Alternative,
}

/// An asymptotic point: `p = O(n^b)`, `n / p -> r` when `b = 1`, and
/// pseudo-distance limit `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    /// Limit of `n / p`; `+inf` whenever `b < 1`.
    pub r: f64,
    pub delta: f64,
    pub b: f64,
    pub truth: Truth,
}

impl Regime {
    pub fn new(r: f64, delta: f64, b: f64, truth: Truth) -> Result<Self> {
        if !(0.0..=1.0).contains(&b) {
            return Err(Error::InvalidRegime(format!(
                "b must lie in [0, 1], got {b}"
            )));
        }
        if b == 1.0 && !(r > 1.0) {
            return Err(Error::InvalidRegime(format!(
                "r must exceed 1 when b = 1, got {r}"
            )));
        }
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::InvalidRegime(format!(
                "delta must be finite and nonnegative, got {delta}"
            )));
        }
        if truth == Truth::Null && delta != 0.0 {
            return Err(Error::InvalidRegime(
                "delta must be 0 when sampling from the null".into(),
            ));
        }
        let r = if b < 1.0 { f64::INFINITY } else { r };
        Ok(Self { r, delta, b, truth })
    }

    /// `p` grows slower than `n`.
    pub fn sublinear(b: f64, delta: f64, truth: Truth) -> Result<Self> {
        if !(b < 1.0) {
            return Err(Error::InvalidRegime(format!(
                "sublinear growth needs b < 1, got {b}"
            )));
        }
        Self::new(f64::INFINITY, delta, b, truth)
    }

    /// `p` grows like `n / r`.
    pub fn proportional(r: f64, delta: f64, truth: Truth) -> Result<Self> {
        Self::new(r, delta, 1.0, truth)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsistencyOutcome {
    ConsistentToZero,
    ConsistentToInfinity,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyVerdict {
    pub outcome: ConsistencyOutcome,
    pub detail: String,
}

/// Kinds with an explicit inconsistency boundary `delta(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Ip,
    Iph,
    Zs,
    B,
}

impl BoundaryKind {
    pub const ALL: [BoundaryKind; 4] = [
        BoundaryKind::Ip,
        BoundaryKind::Iph,
        BoundaryKind::Zs,
        BoundaryKind::B,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BoundaryKind::Ip => "ip",
            BoundaryKind::Iph => "iph",
            BoundaryKind::Zs => "zs",
            BoundaryKind::B => "b",
        }
    }
}

/// Kinds with a known inconsistency set when `b = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    Ip,
    Iph,
    Zs,
    Fs,
    B,
}

impl SetKind {
    pub fn of(kind: &BayesFactorKind) -> Option<Self> {
        match kind {
            BayesFactorKind::Ip => Some(SetKind::Ip),
            BayesFactorKind::Iph => Some(SetKind::Iph),
            BayesFactorKind::Zs => Some(SetKind::Zs),
            BayesFactorKind::Fs => Some(SetKind::Fs),
            BayesFactorKind::B => Some(SetKind::B),
            _ => None,
        }
    }
}

impl From<BoundaryKind> for SetKind {
    fn from(k: BoundaryKind) -> Self {
        match k {
            BoundaryKind::Ip => SetKind::Ip,
            BoundaryKind::Iph => SetKind::Iph,
            BoundaryKind::Zs => SetKind::Zs,
            BoundaryKind::B => SetKind::B,
        }
    }
}

/// Probability limit of `B_p0`.
pub fn limit_bp0(regime: &Regime) -> Result<f64> {
    let shrink = match regime.truth {
        Truth::Null => 1.0,
        Truth::Alternative => 1.0 / (1.0 + regime.delta),
    };
    if regime.b < 1.0 {
        Ok(shrink)
    } else {
        if !(regime.r > 1.0) {
            return Err(Error::InvalidRegime(format!(
                "r must exceed 1 when b = 1, got {}",
                regime.r
            )));
        }
        Ok((1.0 - 1.0 / regime.r) * shrink)
    }
}

fn open_unit_statistic(stat: &SufficientStatistic) -> Result<f64> {
    let b = stat.bp0();
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::Domain(format!(
            "the approximation needs 0 < B_p0 < 1, got {b}"
        )));
    }
    Ok(b)
}

/// Common part `-((n-1)/2) ln B - ((p+1)/2) ln((1-B)/(2B))`.
fn lemma2_core(b: f64, n: f64, p: f64) -> f64 {
    -0.5 * (n - 1.0) * b.ln() - 0.5 * (p + 1.0) * ((1.0 - b) / (2.0 * b)).ln()
}

/// Log of the large-`n` lower bound on the hyper-g/n Bayes factor:
/// `(1/2) n^(-(p+3)/2) B^(-(n-1)/2) ((1-B)/(2B))^(-(p+1)/2) Γ((p+1)/2)`.
pub fn lemma2_lower_bound_l(stat: &SufficientStatistic) -> Result<f64> {
    let b = open_unit_statistic(stat)?;
    let n = stat.n() as f64;
    let p = stat.p() as f64;
    Ok(-std::f64::consts::LN_2 - 0.5 * (p + 3.0) * n.ln()
        + lemma2_core(b, n, p)
        + log_gamma(0.5 * (p + 1.0))?)
}

/// Log of the large-`n` approximation of the truncated-prior Bayes factor:
/// `(1/2) n^(-p/2) (p+1)^(-1/2) B^(-(n-1)/2) ((1-B)/(2B))^(-(p+1)/2)
/// γ((p+1)/2, (p+1)(1-B)/(2B))`.
pub fn lemma2_approx_b(stat: &SufficientStatistic) -> Result<f64> {
    let b = open_unit_statistic(stat)?;
    let n = stat.n() as f64;
    let p = stat.p() as f64;
    let a = 0.5 * (p + 1.0);
    let x = a * (1.0 - b) / b;
    Ok(
        -std::f64::consts::LN_2 - 0.5 * p * n.ln() - 0.5 * (p + 1.0).ln()
            + lemma2_core(b, n, p)
            + log_lower_incomplete_gamma(a, x)?,
    )
}

/// Log of `(n e / (p+1))^(-p/2) ((1 - p/n) / (1 + delta))^(-(n-p-2)/2)`, the
/// Zellner-Siow Bayes factor for large `n` at pseudo-distance `delta`.
pub fn zs_large_n_approx(n: usize, p: usize, delta: f64) -> Result<f64> {
    if p >= n {
        return Err(Error::Domain(format!("need p < n, got n = {n}, p = {p}")));
    }
    if !(delta >= 0.0) {
        return Err(Error::Domain(format!(
            "delta must be nonnegative, got {delta}"
        )));
    }
    let (nf, pf) = (n as f64, p as f64);
    Ok(-0.5 * pf * (nf.ln() + 1.0 - (pf + 1.0).ln())
        - 0.5 * (nf - pf - 2.0) * ((-pf / nf).ln_1p() - delta.ln_1p()))
}

/// `-(p/2) ln n - ((n-1)/2) ln B`, the fixed-g Bayes factor for large `n`.
pub fn fs_large_n_approx(stat: &SufficientStatistic) -> Result<f64> {
    let b = stat.bp0();
    if !(b > 0.0) {
        return Err(Error::Domain("the approximation needs B_p0 > 0".into()));
    }
    let n = stat.n() as f64;
    Ok(-0.5 * stat.p() as f64 * n.ln() - 0.5 * (n - 1.0) * b.ln())
}

fn check_ratio(r: f64) -> Result<()> {
    if r > 1.0 && !r.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain(format!("r must exceed 1, got {r}")))
    }
}

/// Upper edge `delta(r)` of the inconsistency set in `delta` at ratio `r`.
///
/// The intrinsic and Zellner-Siow boundaries are explicit. The truncated-prior
/// boundary solves `h(r, delta) = 1` by bisection and is `+inf` when the root
/// is not representable.
pub fn delta_boundary(kind: BoundaryKind, r: f64) -> Result<f64> {
    check_ratio(r)?;
    let e = (r - 1.0) / r;
    Ok(match kind {
        BoundaryKind::Ip => (r - 1.0) / (e * r.ln_1p()).exp_m1() - 1.0,
        BoundaryKind::Iph => 2.0 * (r - 1.0) / (e * (2.0 * r).ln_1p()).exp_m1() - 1.0,
        BoundaryKind::Zs => ((r.ln() + 1.0) / (r - 1.0) + (-1.0 / r).ln_1p()).exp_m1(),
        BoundaryKind::B => b_boundary(r),
    })
}

/// Limit of `delta_boundary(kind, r)` as `r -> 1+`.
pub fn delta_boundary_limit(kind: BoundaryKind) -> f64 {
    match kind {
        BoundaryKind::Ip => 1.0 / std::f64::consts::LN_2 - 1.0,
        BoundaryKind::Iph => 2.0 / 3f64.ln() - 1.0,
        BoundaryKind::Zs | BoundaryKind::B => f64::INFINITY,
    }
}

/// `ln h(r, delta)` with
/// `h = (r/(r-1))^(r-1) (1+delta)^r / (1 + delta r) / e`.
pub fn log_bayarri_h(r: f64, delta: f64) -> Result<f64> {
    check_ratio(r)?;
    if !(delta >= 0.0) {
        return Err(Error::Domain(format!(
            "delta must be nonnegative, got {delta}"
        )));
    }
    Ok(log_h_in_x(r, delta.ln_1p()))
}

/// `ln h` as a function of `x = ln(1 + delta)`, usable past the point where
/// `delta` itself overflows.
fn log_h_in_x(r: f64, x: f64) -> f64 {
    let base = -(r - 1.0) * (-1.0 / r).ln_1p() - 1.0;
    // ln(1 + r delta) = ln(1 + r (e^x - 1))
    let log_one_plus_r_delta = if x < 30.0 {
        (r * x.exp_m1()).ln_1p()
    } else {
        x + r.ln() + ((1.0 - r) * (-x).exp() / r).ln_1p()
    };
    base + r * x - log_one_plus_r_delta
}

const B_BOUNDARY_TOL: f64 = 1e-10;

fn b_boundary(r: f64) -> f64 {
    // ln h < 0 at delta = 0 and increases to +inf, so a single root exists.
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while log_h_in_x(r, hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e4 {
            return f64::INFINITY;
        }
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        if log_h_in_x(r, mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        let (dlo, dhi) = (lo.exp_m1(), hi.exp_m1());
        if dhi - dlo <= B_BOUNDARY_TOL * dhi.max(1.0) {
            break;
        }
    }
    let delta = (0.5 * (lo + hi)).exp_m1();
    if delta.is_finite() {
        delta
    } else {
        f64::INFINITY
    }
}

/// Whether `(r, delta)` lies in the inconsistency set, boundary included.
pub fn in_inconsistency_set(kind: SetKind, r: f64, delta: f64) -> Result<bool> {
    check_ratio(r)?;
    if !(delta >= 0.0) {
        return Err(Error::Domain(format!(
            "delta must be nonnegative, got {delta}"
        )));
    }
    Ok(match kind {
        SetKind::Ip => delta <= delta_boundary(BoundaryKind::Ip, r)?,
        SetKind::Iph => delta <= delta_boundary(BoundaryKind::Iph, r)?,
        SetKind::Zs => delta <= delta_boundary(BoundaryKind::Zs, r)?,
        SetKind::Fs => true,
        SetKind::B => log_bayarri_h(r, delta)? <= 0.0,
    })
}

fn verdict(outcome: ConsistencyOutcome, detail: impl Into<String>) -> ConsistencyVerdict {
    ConsistencyVerdict {
        outcome,
        detail: detail.into(),
    }
}

/// Large-sample behaviour of a Bayes factor in a regime.
///
/// For `b = 1` only the intrinsic, Zellner-Siow, fixed-g and truncated kinds
/// are characterized; the others return `UnsupportedRegime`. The robust kind
/// is characterized for `b < 1` only when `rho = d / (d + n)`.
pub fn consistency_verdict(kind: &BayesFactorKind, regime: &Regime) -> Result<ConsistencyVerdict> {
    use ConsistencyOutcome::*;

    let regime = Regime::new(regime.r, regime.delta, regime.b, regime.truth)?;
    let null_divergent = match kind {
        BayesFactorKind::L | BayesFactorKind::Cg => true,
        BayesFactorKind::Robust { rho, .. } => match rho {
            RobustRho::NullMatched => true,
            RobustRho::Fixed(_) => {
                return Err(Error::UnsupportedRegime(
                    "robust prior with a fixed rho is not characterized; use rho = d / (d + n)"
                        .into(),
                ))
            }
        },
        _ => false,
    };

    if regime.b < 1.0 {
        return Ok(match regime.truth {
            Truth::Null if null_divergent => verdict(
                Inconsistent,
                format!(
                    "{kind}: p = O(n^b) with b < 1, null sampling; the prior does not \
                     concentrate fast enough and the Bayes factor does not tend to 0"
                ),
            ),
            Truth::Null => verdict(
                ConsistentToZero,
                format!("{kind}: p = O(n^b) with b < 1, null sampling"),
            ),
            Truth::Alternative => {
                if !(regime.delta > 0.0) {
                    return Err(Error::InvalidRegime(
                        "an alternative with b < 1 needs delta > 0".into(),
                    ));
                }
                verdict(
                    ConsistentToInfinity,
                    format!(
                        "{kind}: p = O(n^b) with b < 1, alternative with delta = {}",
                        regime.delta
                    ),
                )
            }
        });
    }

    let set = SetKind::of(kind).ok_or_else(|| {
        Error::UnsupportedRegime(format!(
            "{kind} is not characterized when p grows like n / r"
        ))
    })?;
    Ok(match regime.truth {
        Truth::Null => verdict(
            ConsistentToZero,
            format!("{kind}: p ~ n / r with r = {}, null sampling", regime.r),
        ),
        Truth::Alternative => {
            if in_inconsistency_set(set, regime.r, regime.delta)? {
                verdict(
                    Inconsistent,
                    format!(
                        "{kind}: (r, delta) = ({}, {}) lies in the inconsistency set",
                        regime.r, regime.delta
                    ),
                )
            } else {
                verdict(
                    ConsistentToInfinity,
                    format!(
                        "{kind}: (r, delta) = ({}, {}) lies outside the inconsistency set",
                        regime.r, regime.delta
                    ),
                )
            }
        }
    })
}
