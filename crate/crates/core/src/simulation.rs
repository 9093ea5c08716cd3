//! Reproducible Monte-Carlo trajectories of a Bayes factor across sample
//! sizes.
//!
//! Each replicate draws its own standard-normal design and errors from a
//! ChaCha20 stream. The stream is fixed by the experiment seed and the
//! position of the replicate, never by scheduling:
//!
//! ```text
//! rng = ChaCha20Rng::seed_from_u64(seed)
//! rng.set_stream(attempt << 63 | n_index << 32 | replicate)
//! ```
//!
//! `attempt` is 0 for the first draw and 1 for the single retry allowed after
//! a degenerate design.

use crate::asymptotics::Truth;
use crate::bayes_factors::{log_bayes_factor, BayesFactorKind};
use crate::error::{Error, Result};
use crate::numerics::QuadratureConfig;
use crate::stats::{calibrate_on_regressors, compute_sufficient_statistic, Dataset, ModelParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest fraction of failed replicates tolerated at any sample size.
pub const MAX_FAILURE_FRACTION: f64 = 0.1;

/// How the number of regressors follows the sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PRegime {
    FixedP(usize),
    /// `p = round(n / r)`.
    Proportional(f64),
}

impl PRegime {
    pub fn p_for(&self, n: usize) -> usize {
        match *self {
            PRegime::FixedP(p) => p,
            PRegime::Proportional(r) => (n as f64 / r).round() as usize,
        }
    }
}

fn default_sigma() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub kind: BayesFactorKind,
    pub truth: Truth,
    /// Pseudo-distance of the sampling model from the null; 0 under the null.
    pub delta_target: f64,
    pub regime: PRegime,
    /// Strictly ascending sample sizes.
    pub n_grid: Vec<usize>,
    pub replicates: usize,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidExperiment(msg));
        if self.n_grid.is_empty() {
            return bad("n_grid is empty".into());
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!(
                "n_grid must be strictly ascending, got {:?}",
                self.n_grid
            ));
        }
        if self.n_grid.len() > 1 << 31 || self.replicates > u32::MAX as usize {
            return bad("grid or replicate count too large for stream splitting".into());
        }
        if self.replicates == 0 {
            return bad("replicates must be positive".into());
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return bad(format!("sigma must be positive, got {}", self.sigma));
        }
        if !(self.delta_target >= 0.0) || !self.delta_target.is_finite() {
            return bad(format!(
                "delta_target must be finite and nonnegative, got {}",
                self.delta_target
            ));
        }
        match self.truth {
            Truth::Null if self.delta_target != 0.0 => {
                return bad("delta_target must be 0 under the null".into())
            }
            Truth::Alternative if self.delta_target == 0.0 => {
                return bad("delta_target must be positive under the alternative".into())
            }
            _ => {}
        }
        if let PRegime::Proportional(r) = self.regime {
            if !(r > 1.0) || !r.is_finite() {
                return bad(format!("ratio r must exceed 1, got {r}"));
            }
        }
        for &n in &self.n_grid {
            let p = self.regime.p_for(n);
            if p == 0 {
                return bad(format!("n = {n} gives p = 0"));
            }
            if n < p + 3 {
                return bad(format!("n = {n} with p = {p} violates n >= p + 3"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub n: usize,
    pub p: usize,
    pub median_log_bf: f64,
    pub q10: f64,
    pub q90: f64,
    pub median_bstat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub trajectory: Vec<TrajectoryPoint>,
    /// Least-squares slope of the median log Bayes factor against `ln n`;
    /// absent with fewer than two grid points or a non-finite median.
    pub slope: Option<f64>,
    /// Failed replicates summed over the grid.
    pub failures: usize,
}

/// The replicate stream for position `(n_index, replicate)`.
pub fn replicate_rng(seed: u64, n_index: usize, replicate: usize, attempt: u8) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let stream = (u64::from(attempt & 1) << 63) | ((n_index as u64) << 32) | replicate as u64;
    rng.set_stream(stream);
    rng
}

/// Draws one dataset. Regressors are i.i.d. standard normal, filled column by
/// column, followed by the `n` errors. Under the alternative the slope
/// coefficients are equal and scaled so that the pseudo-distance of the
/// realized design is exactly `delta_target`.
pub fn generate_dataset<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    truth: Truth,
    delta_target: f64,
    sigma: f64,
    rng: &mut R,
) -> Result<(Dataset, ModelParams)> {
    if p == 0 || n < p + 3 {
        return Err(Error::TooFewObservations { n, p });
    }
    let regressors: Vec<f64> = (0..n * p).map(|_| rng.sample(StandardNormal)).collect();
    let errors: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();

    let beta = match truth {
        Truth::Null => vec![0.0; p + 1],
        Truth::Alternative => {
            let w = vec![1.0 / (p as f64).sqrt(); p];
            calibrate_on_regressors(&regressors, n, p, sigma, delta_target, &w)?
        }
    };
    let mut y: Vec<f64> = errors.iter().map(|e| sigma * e).collect();
    if truth == Truth::Alternative {
        for (j, &b) in beta.iter().enumerate().skip(1) {
            let col = &regressors[(j - 1) * n..j * n];
            for (yi, x) in y.iter_mut().zip(col) {
                *yi += b * x;
            }
        }
    }
    let data = Dataset::from_column_major(y, regressors, p)?;
    let params = ModelParams::new(0.0, sigma, beta, sigma)?;
    Ok((data, params))
}

struct Draw {
    log_bf: f64,
    bstat: f64,
}

fn one_replicate(
    spec: &ExperimentSpec,
    config: &QuadratureConfig,
    n_index: usize,
    n: usize,
    p: usize,
    replicate: usize,
) -> Option<Draw> {
    for attempt in 0..2u8 {
        let mut rng = replicate_rng(spec.seed, n_index, replicate, attempt);
        let data = match generate_dataset(n, p, spec.truth, spec.delta_target, spec.sigma, &mut rng)
        {
            Ok((data, _)) => data,
            Err(_) => continue,
        };
        let Ok(stat) = compute_sufficient_statistic(&data) else {
            continue;
        };
        let Ok(bf) = log_bayes_factor(&spec.kind, &stat, config) else {
            continue;
        };
        return Some(Draw {
            log_bf: bf.log_bf,
            bstat: stat.bp0(),
        });
    }
    None
}

/// Runs the sweep. Replicates run in parallel; results do not depend on the
/// thread count.
pub fn run_experiment(
    spec: &ExperimentSpec,
    config: &QuadratureConfig,
) -> Result<ExperimentResult> {
    spec.validate()?;
    config.validate()?;
    let mut trajectory = Vec::with_capacity(spec.n_grid.len());
    let mut failures = 0;
    for (n_index, &n) in spec.n_grid.iter().enumerate() {
        let p = spec.regime.p_for(n);
        let draws: Vec<Option<Draw>> = (0..spec.replicates)
            .into_par_iter()
            .map(|rep| one_replicate(spec, config, n_index, n, p, rep))
            .collect();
        let ok: Vec<Draw> = draws.into_iter().flatten().collect();
        let failed = spec.replicates - ok.len();
        if failed as f64 > MAX_FAILURE_FRACTION * spec.replicates as f64 || ok.is_empty() {
            return Err(Error::TooManyFailures {
                n,
                failures: failed,
                replicates: spec.replicates,
            });
        }
        failures += failed;

        let mut bfs: Vec<f64> = ok.iter().map(|d| d.log_bf).collect();
        let mut bstats: Vec<f64> = ok.iter().map(|d| d.bstat).collect();
        bfs.sort_by(f64::total_cmp);
        bstats.sort_by(f64::total_cmp);
        trajectory.push(TrajectoryPoint {
            n,
            p,
            median_log_bf: quantile_sorted(&bfs, 0.5),
            q10: quantile_sorted(&bfs, 0.1),
            q90: quantile_sorted(&bfs, 0.9),
            median_bstat: quantile_sorted(&bstats, 0.5),
        });
    }
    let slope = fitted_slope(&trajectory);
    Ok(ExperimentResult {
        spec: spec.clone(),
        trajectory,
        slope,
        failures,
    })
}

/// Linear-interpolation quantile of sorted data (`h = (N - 1) q`).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

fn fitted_slope(trajectory: &[TrajectoryPoint]) -> Option<f64> {
    if trajectory.len() < 2 || trajectory.iter().any(|t| !t.median_log_bf.is_finite()) {
        return None;
    }
    let xs: Vec<f64> = trajectory.iter().map(|t| (t.n as f64).ln()).collect();
    let ys: Vec<f64> = trajectory.iter().map(|t| t.median_log_bf).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

/// Fitted slope plus `p / 2`. Zero means the median log Bayes factor falls
/// exactly like `-(p/2) ln n`.
pub fn rate_diagnostic(result: &ExperimentResult, p: usize) -> Option<f64> {
    result.slope.map(|s| s + 0.5 * p as f64)
}
