//! Bayes factors for comparing a normal linear model with `p` regressors
//! against the intercept-only model, together with their large-sample
//! (in)consistency analysis.
//!
//! Every Bayes factor in this crate depends on the data only through the
//! sufficient statistic `B_p0 = RSS_p / TSS` (one minus the coefficient of
//! determination), the sample size `n` and the number of regressors `p`.
//! All values are carried on the natural-log scale because the exponents
//! involved are of order `n / 2`.
//!
//! Modules:
//!
//! * [`stats`]: datasets, the sufficient statistic and the pseudo-distance
//!   between a sampling model and the null.
//! * [`numerics`]: log-domain adaptive quadrature and special functions.
//! * [`bayes_factors`]: intrinsic-prior and g-prior mixture Bayes factors.
//! * [`asymptotics`]: limits, approximations, inconsistency sets and verdicts.
//! * [`simulation`]: reproducible Monte-Carlo trajectories across `n`.
//! * [`figures`]: data behind posterior-probability curves and
//!   inconsistency-region maps.
//!
//! ```
//! use bfcons_core::{log_bayes_factor, BayesFactorKind, QuadratureConfig, SufficientStatistic};
//!
//! let stat = SufficientStatistic::new(0.6, 100, 5)?;
//! let bf = log_bayes_factor(&BayesFactorKind::Zs, &stat, &QuadratureConfig::default())?;
//! assert!(bf.log_bf > 0.0 && bf.posterior_prob_m0() < 0.5);
//! # Ok::<(), bfcons_core::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod asymptotics;
pub mod bayes_factors;
pub mod error;
pub mod figures;
pub mod numerics;
pub mod simulation;
pub mod stats;

pub use asymptotics::{
    consistency_verdict, delta_boundary, delta_boundary_limit, in_inconsistency_set, limit_bp0,
    BoundaryKind, ConsistencyOutcome, ConsistencyVerdict, Regime, SetKind, Truth,
};
pub use bayes_factors::{
    log_bayes_factor, posterior_prob_m0, BayesFactorKind, BfStatus, GPrior, LogBayesFactor,
    RobustRho,
};
pub use error::{Error, Result};
pub use numerics::{LogIntegralResult, QuadratureConfig, QuadratureStatus};
pub use simulation::{ExperimentResult, ExperimentSpec, PRegime, TrajectoryPoint};
pub use stats::{
    compute_sufficient_statistic, Dataset, ModelParams, PseudoDistance, SufficientStatistic,
};
