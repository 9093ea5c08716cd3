//! Log Bayes factors of `M_p` against `M_0` for intrinsic priors and for
//! mixtures of g-priors.
//!
//! Every g-prior mixture shares the conditional likelihood ratio
//!
//! ```text
//! (1 + g)^((n - p - 1) / 2) (1 + g B)^(-(n - 1) / 2)
//! ```
//!
//! which is evaluated as `-(p/2) ln(1 + g) - ((n-1)/2) ln(1 - g (1 - B) / (1 + g))`
//! so that the two large exponents cancel analytically instead of in
//! floating point.

use crate::error::{Error, Result};
use crate::numerics::{
    log_integrate_finite, log_integrate_semiinfinite, LogIntegralResult, QuadratureConfig,
    QuadratureStatus,
};
use crate::stats::SufficientStatistic;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

/// How the truncation parameter of the robust prior is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RobustRho {
    /// A fixed value, which must satisfy `rho >= d / (d + n)` at every `n`
    /// it is evaluated at.
    Fixed(f64),
    /// `rho = d / (d + n)`, the smallest admissible value. The prior is then
    /// supported on the whole half-line.
    NullMatched,
}

impl RobustRho {
    pub fn resolve(self, d: f64, n: usize) -> f64 {
        match self {
            RobustRho::Fixed(rho) => rho,
            RobustRho::NullMatched => d / (d + n as f64),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BayesFactorKind {
    /// Intrinsic prior, heteroscedastic.
    Ip,
    /// Intrinsic prior with a common variance.
    Iph,
    /// Zellner-Siow: inverse-gamma(1/2, n/2) on g.
    Zs,
    /// Fixed g = n.
    Fs,
    /// Hyper-g/n.
    L,
    /// Cui-George: `(1 + g)^-2`.
    Cg,
    /// Bayarri et al.: truncated `(1 + g)^(-3/2)`.
    B,
    /// Robust class with shape `a`, shift `d` and truncation `rho`.
    Robust { a: f64, d: f64, rho: RobustRho },
}

impl BayesFactorKind {
    /// The seven fixed kinds, in a stable order.
    pub const FIXED: [BayesFactorKind; 7] = [
        BayesFactorKind::Ip,
        BayesFactorKind::Iph,
        BayesFactorKind::Zs,
        BayesFactorKind::Fs,
        BayesFactorKind::L,
        BayesFactorKind::Cg,
        BayesFactorKind::B,
    ];

    /// Short lowercase name, used for CLI flags and column headers.
    pub fn label(&self) -> &'static str {
        match self {
            BayesFactorKind::Ip => "ip",
            BayesFactorKind::Iph => "iph",
            BayesFactorKind::Zs => "zs",
            BayesFactorKind::Fs => "fs",
            BayesFactorKind::L => "l",
            BayesFactorKind::Cg => "cg",
            BayesFactorKind::B => "b",
            BayesFactorKind::Robust { .. } => "robust",
        }
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self, BayesFactorKind::Fs | BayesFactorKind::Iph)
    }
}

impl fmt::Display for BayesFactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BayesFactorKind {
    type Err = Error;

    /// Parses the fixed kinds. The robust kind needs hyperparameters and is
    /// built directly.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        BayesFactorKind::FIXED
            .iter()
            .copied()
            .find(|k| k.label() == lower)
            .ok_or_else(|| Error::Domain(format!("unknown Bayes factor kind '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BfStatus {
    ExactClosedForm,
    QuadratureConverged,
    /// The subdivision budget ran out before the tolerance was met; the
    /// value is the best available estimate.
    QuadratureDegraded,
    /// `B_p0 = 0`: the data are fitted exactly and the integral kinds are
    /// infinite.
    PerfectFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogBayesFactor {
    /// Natural log of the Bayes factor of `M_p` against `M_0`.
    pub log_bf: f64,
    pub status: BfStatus,
}

impl LogBayesFactor {
    pub fn log10(&self) -> f64 {
        self.log_bf / std::f64::consts::LN_10
    }

    pub fn posterior_prob_m0(&self) -> f64 {
        posterior_prob_m0(self.log_bf)
    }
}

/// `P(M_0 | data) = 1 / (1 + BF)` under equal prior model probabilities.
pub fn posterior_prob_m0(log_bf: f64) -> f64 {
    if log_bf > 0.0 {
        let e = (-log_bf).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + log_bf.exp())
    }
}

/// `ln[(1+g)^((n-p-1)/2) (1+gB)^(-(n-1)/2)]`.
#[derive(Debug, Clone, Copy)]
struct LikelihoodRatio {
    half_p: f64,
    half_nm1: f64,
    one_minus_b: f64,
}

impl LikelihoodRatio {
    fn new(stat: &SufficientStatistic) -> Self {
        Self {
            half_p: 0.5 * stat.p() as f64,
            half_nm1: 0.5 * (stat.n() as f64 - 1.0),
            one_minus_b: 1.0 - stat.bp0(),
        }
    }

    #[inline]
    fn at(&self, g: f64) -> f64 {
        let w = g / (1.0 + g);
        -self.half_p * g.ln_1p() - self.half_nm1 * (-w * self.one_minus_b).ln_1p()
    }
}

/// A proper prior on `g` on `[lower, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GPrior {
    /// Inverse-gamma(1/2, n/2).
    ZellnerSiow { n: f64 },
    /// `(1 / 2n) (1 + g/n)^(-3/2)`.
    HyperGn { n: f64 },
    /// `(1 + g)^-2`.
    CuiGeorge,
    /// `(1/2) ((1+n)/(1+p))^(1/2) (1 + g)^(-3/2)` on `g > (1+n)/(1+p) - 1`.
    Bayarri { n: f64, p: f64 },
    /// `a [rho (d+n)]^a (g + d)^(-(a+1))` on `g > rho (d+n) - d`.
    Robust { a: f64, d: f64, rho: f64, n: f64 },
}

impl GPrior {
    /// The prior behind a g-mixture kind; `None` for the intrinsic and fixed
    /// kinds.
    pub fn for_kind(kind: &BayesFactorKind, n: usize, p: usize) -> Result<Option<Self>> {
        let nf = n as f64;
        Ok(match *kind {
            BayesFactorKind::Zs => Some(GPrior::ZellnerSiow { n: nf }),
            BayesFactorKind::L => Some(GPrior::HyperGn { n: nf }),
            BayesFactorKind::Cg => Some(GPrior::CuiGeorge),
            BayesFactorKind::B => Some(GPrior::Bayarri { n: nf, p: p as f64 }),
            BayesFactorKind::Robust { a, d, rho } => {
                Some(GPrior::robust(a, d, rho.resolve(d, n), n)?)
            }
            BayesFactorKind::Ip | BayesFactorKind::Iph | BayesFactorKind::Fs => None,
        })
    }

    pub fn robust(a: f64, d: f64, rho: f64, n: usize) -> Result<Self> {
        let nf = n as f64;
        if !(a > 0.0 && a.is_finite()) || !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidHyperparameters(format!(
                "robust prior needs a > 0 and d > 0, got a = {a}, d = {d}"
            )));
        }
        let min_rho = d / (d + nf);
        // allow for the rounding in callers that form d / (d + n) themselves
        if !rho.is_finite() || rho < min_rho * (1.0 - 4.0 * f64::EPSILON) {
            return Err(Error::InvalidHyperparameters(format!(
                "robust prior needs rho >= d / (d + n) = {min_rho}, got rho = {rho}"
            )));
        }
        Ok(GPrior::Robust {
            a,
            d,
            rho: rho.max(min_rho),
            n: nf,
        })
    }

    /// Left end of the support.
    pub fn lower(&self) -> f64 {
        match *self {
            GPrior::ZellnerSiow { .. } | GPrior::HyperGn { .. } | GPrior::CuiGeorge => 0.0,
            GPrior::Bayarri { n, p } => (1.0 + n) / (1.0 + p) - 1.0,
            GPrior::Robust { d, rho, n, .. } => (rho * (d + n) - d).max(0.0),
        }
    }

    /// Log density at `g`; `-inf` left of the support.
    pub fn log_density(&self, g: f64) -> f64 {
        if !(g > self.lower()) {
            return f64::NEG_INFINITY;
        }
        match *self {
            GPrior::ZellnerSiow { n } => {
                // Γ(1/2) = √π
                const HALF_LN_PI: f64 = 0.572_364_942_924_700_1;
                0.5 * (0.5 * n).ln() - HALF_LN_PI - 1.5 * g.ln() - 0.5 * n / g
            }
            GPrior::HyperGn { n } => -(2.0 * n).ln() - 1.5 * (g / n).ln_1p(),
            GPrior::CuiGeorge => -2.0 * g.ln_1p(),
            GPrior::Bayarri { n, p } => {
                -std::f64::consts::LN_2 + 0.5 * ((1.0 + n) / (1.0 + p)).ln() - 1.5 * g.ln_1p()
            }
            GPrior::Robust { a, d, rho, n } => {
                a.ln() + a * (rho * (d + n)).ln() - (a + 1.0) * (g + d).ln()
            }
        }
    }
}

fn perfect_fit() -> LogBayesFactor {
    LogBayesFactor {
        log_bf: f64::INFINITY,
        status: BfStatus::PerfectFit,
    }
}

fn from_quadrature(res: LogIntegralResult, offset: f64, what: &str) -> Result<LogBayesFactor> {
    match res.status {
        QuadratureStatus::Converged => Ok(LogBayesFactor {
            log_bf: res.log_value + offset,
            status: BfStatus::QuadratureConverged,
        }),
        QuadratureStatus::MaxSubdivisionsReached if res.log_value.is_finite() => {
            Ok(LogBayesFactor {
                log_bf: res.log_value + offset,
                status: BfStatus::QuadratureDegraded,
            })
        }
        _ => Err(Error::NumericalFailure(format!(
            "{what} integral did not converge"
        ))),
    }
}

/// Intrinsic-prior Bayes factor, integrated over the angle `phi` in
/// `[0, pi/2]`.
pub fn log_bf_ip(stat: &SufficientStatistic, config: &QuadratureConfig) -> Result<LogBayesFactor> {
    config.validate()?;
    if stat.bp0() == 0.0 {
        return Ok(perfect_fit());
    }
    let n = stat.n() as f64;
    let p = stat.p() as f64;
    let nb = n * stat.bp0();
    let k = p + 2.0;
    let half_num = 0.5 * (n - p - 1.0);
    let log_f = |phi: f64| {
        let s = phi.sin();
        let u = k * s * s;
        // p ln s + A ln(n + u) - (A + p/2) ln(u + nB), grouped as a ratio
        p * s.ln() + half_num * ((n + u) / (u + nb)).ln() - 0.5 * p * (u + nb).ln()
    };
    let res = log_integrate_finite(log_f, 0.0, FRAC_PI_2, config)?;
    from_quadrature(res, 0.5 * p * k.ln() - FRAC_PI_2.ln(), "intrinsic prior")
}

/// `-(p/2) ln(1 + c) - ((n-1)/2) ln(1 - c (1 - B) / (1 + c))`, the g-prior
/// Bayes factor at the point `g = c`.
fn fixed_g(stat: &SufficientStatistic, c: f64) -> LogBayesFactor {
    let lr = LikelihoodRatio::new(stat);
    LogBayesFactor {
        log_bf: lr.at(c),
        status: BfStatus::ExactClosedForm,
    }
}

/// Intrinsic prior with common variance; closed form at `g = 2n / (p + 1)`.
pub fn log_bf_iph(stat: &SufficientStatistic) -> LogBayesFactor {
    fixed_g(stat, 2.0 * stat.n() as f64 / (stat.p() as f64 + 1.0))
}

/// Zellner's g-prior with `g = n`.
pub fn log_bf_fs(stat: &SufficientStatistic) -> LogBayesFactor {
    fixed_g(stat, stat.n() as f64)
}

fn log_bf_mixture(
    stat: &SufficientStatistic,
    prior: &GPrior,
    config: &QuadratureConfig,
    what: &str,
) -> Result<LogBayesFactor> {
    config.validate()?;
    if stat.bp0() == 0.0 {
        return Ok(perfect_fit());
    }
    let lr = LikelihoodRatio::new(stat);
    let lower = prior.lower();
    let res = log_integrate_semiinfinite(
        |g| {
            if g > lower {
                lr.at(g) + prior.log_density(g)
            } else {
                f64::NEG_INFINITY
            }
        },
        lower,
        config,
    )?;
    from_quadrature(res, 0.0, what)
}

pub fn log_bf_zs(stat: &SufficientStatistic, config: &QuadratureConfig) -> Result<LogBayesFactor> {
    let prior = GPrior::ZellnerSiow { n: stat.n() as f64 };
    log_bf_mixture(stat, &prior, config, "Zellner-Siow")
}

pub fn log_bf_l(stat: &SufficientStatistic, config: &QuadratureConfig) -> Result<LogBayesFactor> {
    let prior = GPrior::HyperGn { n: stat.n() as f64 };
    log_bf_mixture(stat, &prior, config, "hyper-g/n")
}

pub fn log_bf_cg(stat: &SufficientStatistic, config: &QuadratureConfig) -> Result<LogBayesFactor> {
    log_bf_mixture(stat, &GPrior::CuiGeorge, config, "Cui-George")
}

pub fn log_bf_b(stat: &SufficientStatistic, config: &QuadratureConfig) -> Result<LogBayesFactor> {
    let prior = GPrior::Bayarri {
        n: stat.n() as f64,
        p: stat.p() as f64,
    };
    log_bf_mixture(stat, &prior, config, "truncated")
}

pub fn log_bf_robust(
    stat: &SufficientStatistic,
    a: f64,
    d: f64,
    rho: RobustRho,
    config: &QuadratureConfig,
) -> Result<LogBayesFactor> {
    let prior = GPrior::robust(a, d, rho.resolve(d, stat.n()), stat.n())?;
    log_bf_mixture(stat, &prior, config, "robust")
}

/// Dispatch on the kind.
pub fn log_bayes_factor(
    kind: &BayesFactorKind,
    stat: &SufficientStatistic,
    config: &QuadratureConfig,
) -> Result<LogBayesFactor> {
    match *kind {
        BayesFactorKind::Ip => log_bf_ip(stat, config),
        BayesFactorKind::Iph => Ok(log_bf_iph(stat)),
        BayesFactorKind::Zs => log_bf_zs(stat, config),
        BayesFactorKind::Fs => Ok(log_bf_fs(stat)),
        BayesFactorKind::L => log_bf_l(stat, config),
        BayesFactorKind::Cg => log_bf_cg(stat, config),
        BayesFactorKind::B => log_bf_b(stat, config),
        BayesFactorKind::Robust { a, d, rho } => log_bf_robust(stat, a, d, rho, config),
    }
}
