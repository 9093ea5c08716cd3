//! Regression data, the sufficient statistic `B_p0` and the pseudo-distance
//! between a sampling model in `M_p` and the null model `M_0`.

use crate::error::{Error, Result};
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::qr::no_pivoting::factor::{
    qr_in_place, qr_in_place_scratch, recommended_block_size,
};
use faer::{Mat, Par};
use serde::{Deserialize, Serialize};

/// Relative threshold on the diagonal of `R` below which a design column is
/// treated as linearly dependent on the previous ones.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Round-off allowance when clamping `B_p0` into `[0, 1]`.
pub const CLAMP_TOLERANCE: f64 = 1e-12;

/// A response vector with its design matrix.
///
/// The design always carries an intercept column of ones in position 0,
/// inserted here; callers supply only the `p` regressors. The residual sum of
/// squares of the full least-squares fit is computed once at construction
/// from an orthogonal factorization of `[X | y]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n: usize,
    p: usize,
    response: Vec<f64>,
    // column-major n x (p + 1), column 0 all ones
    design: Vec<f64>,
    rss: f64,
}

impl Dataset {
    /// Build from the response and the regressor columns (each of length n).
    pub fn new(response: Vec<f64>, regressors: &[Vec<f64>]) -> Result<Self> {
        let n = response.len();
        let mut flat = Vec::with_capacity(n * regressors.len());
        for (j, col) in regressors.iter().enumerate() {
            if col.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "regressor {j} has {} rows, response has {n}",
                    col.len()
                )));
            }
            flat.extend_from_slice(col);
        }
        Self::from_column_major(response, flat, regressors.len())
    }

    /// Build from the response and a column-major `n x p` block of regressors.
    pub fn from_column_major(response: Vec<f64>, regressors: Vec<f64>, p: usize) -> Result<Self> {
        let n = response.len();
        if regressors.len() != n * p {
            return Err(Error::DimensionMismatch(format!(
                "expected {} regressor entries for n = {n}, p = {p}, got {}",
                n * p,
                regressors.len()
            )));
        }
        if p == 0 {
            return Err(Error::DimensionMismatch(
                "at least one regressor is required".into(),
            ));
        }
        if n < p + 3 {
            return Err(Error::TooFewObservations { n, p });
        }
        if response.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("response"));
        }
        if regressors.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("regressors"));
        }

        let mut design = Vec::with_capacity(n * (p + 1));
        design.resize(n, 1.0);
        design.extend_from_slice(&regressors);

        let rss = residual_sum_of_squares(&design, &response, n, p + 1)?;
        Ok(Self {
            n,
            p,
            response,
            design,
            rss,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn response(&self) -> &[f64] {
        &self.response
    }

    /// Column `j` of the design, `j = 0` being the intercept.
    pub fn design_column(&self, j: usize) -> &[f64] {
        &self.design[j * self.n..(j + 1) * self.n]
    }

    /// The design matrix in column-major order, intercept first.
    pub fn design(&self) -> &[f64] {
        &self.design
    }

    /// Residual sum of squares of the least-squares fit on the full design.
    pub fn residual_sum_of_squares(&self) -> f64 {
        self.rss
    }

    /// Centered total sum of squares of the response.
    pub fn total_sum_of_squares(&self) -> f64 {
        centered_sum_of_squares(&self.response)
    }

    /// `X b` for a coefficient vector of length `p + 1`.
    fn linear_predictor(&self, beta: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (j, &b) in beta.iter().enumerate() {
            if b != 0.0 {
                for (o, x) in out.iter_mut().zip(self.design_column(j)) {
                    *o += b * x;
                }
            }
        }
        out
    }
}

/// Householder QR of the augmented matrix `[X | y]`. The magnitude of the last
/// diagonal entry of `R` is the norm of the residual of `y` on `X`.
fn residual_sum_of_squares(design: &[f64], response: &[f64], n: usize, k: usize) -> Result<f64> {
    let mut a = Mat::<f64>::from_fn(n, k + 1, |i, j| {
        if j < k {
            design[j * n + i]
        } else {
            response[i]
        }
    });
    let size = n.min(k + 1);
    let block = recommended_block_size::<f64>(n, k + 1);
    let mut householder = Mat::<f64>::zeros(block, size);
    let params = Default::default();
    let mut mem = MemBuffer::new(qr_in_place_scratch::<f64>(
        n,
        k + 1,
        block,
        Par::Seq,
        params,
    ));
    qr_in_place(
        a.as_mut(),
        householder.as_mut(),
        Par::Seq,
        MemStack::new(&mut mem),
        params,
    );

    let max_diag = (0..k).map(|j| a[(j, j)].abs()).fold(0.0, f64::max);
    for j in 0..k {
        if !(a[(j, j)].abs() > RANK_TOLERANCE * max_diag) {
            return Err(Error::RankDeficient { column: j });
        }
    }
    let r = a[(k, k)];
    Ok(r * r)
}

fn centered_sum_of_squares(v: &[f64]) -> f64 {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x - mean) * (x - mean)).sum()
}

/// The triple `(B_p0, n, p)` every Bayes factor consumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SufficientStatistic {
    bp0: f64,
    n: usize,
    p: usize,
}

impl SufficientStatistic {
    pub fn new(bp0: f64, n: usize, p: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&bp0) {
            return Err(Error::Domain(format!("B_p0 must lie in [0, 1], got {bp0}")));
        }
        if p == 0 {
            return Err(Error::Domain("p must be at least 1".into()));
        }
        if n < p + 3 {
            return Err(Error::TooFewObservations { n, p });
        }
        Ok(Self { bp0, n, p })
    }

    pub fn bp0(&self) -> f64 {
        self.bp0
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }
}

/// `B_p0 = y'(I - H)y / y'(I - 11'/n)y`, i.e. one minus the coefficient of
/// determination of the full fit.
pub fn compute_sufficient_statistic(data: &Dataset) -> Result<SufficientStatistic> {
    let scale = data.response.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tss = data.total_sum_of_squares();
    if tss <= data.n as f64 * (4.0 * f64::EPSILON * scale).powi(2) {
        return Err(Error::ConstantResponse);
    }
    let raw = data.rss / tss;
    let bp0 = if raw > 1.0 {
        if raw - 1.0 > CLAMP_TOLERANCE {
            return Err(Error::StatisticOutOfRange { value: raw });
        }
        1.0
    } else {
        raw.max(0.0)
    };
    SufficientStatistic::new(bp0, data.n, data.p)
}

/// Parameters of the two sampling models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Intercept of `M_0`.
    pub alpha0: f64,
    /// Error standard deviation of `M_0`.
    pub sigma0: f64,
    /// Coefficients of `M_p`, intercept first (length `p + 1`).
    pub beta: Vec<f64>,
    /// Error standard deviation of `M_p`.
    pub sigma_p: f64,
}

impl ModelParams {
    pub fn new(alpha0: f64, sigma0: f64, beta: Vec<f64>, sigma_p: f64) -> Result<Self> {
        if !(sigma0 > 0.0) || !(sigma_p > 0.0) {
            return Err(Error::Domain(format!(
                "standard deviations must be positive, got sigma0 = {sigma0}, sigma_p = {sigma_p}"
            )));
        }
        Ok(Self {
            alpha0,
            sigma0,
            beta,
            sigma_p,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PseudoDistance(f64);

impl PseudoDistance {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// `δ_p0 = β'X'(H - 11'/n)Xβ / (σ_p² n)`.
///
/// With this scaling the statistic settles at `(1 - p/n) / (1 + δ_p0)` under
/// the alternative, which is the limit the inconsistency boundaries assume.
///
/// `Xβ` already lies in the column span of `X`, so the projection is the
/// identity on it and the quadratic form reduces to the centered squared norm
/// of the linear predictor.
pub fn pseudo_distance(params: &ModelParams, data: &Dataset) -> Result<PseudoDistance> {
    if params.beta.len() != data.p + 1 {
        return Err(Error::DimensionMismatch(format!(
            "beta has length {}, expected p + 1 = {}",
            params.beta.len(),
            data.p + 1
        )));
    }
    let xb = data.linear_predictor(&params.beta);
    let q = centered_sum_of_squares(&xb);
    let sigma2 = params.sigma_p * params.sigma_p;
    Ok(PseudoDistance(q / (sigma2 * data.n as f64)))
}

/// Coefficients with zero intercept and slope part `c * direction`, with `c`
/// chosen so that the pseudo-distance equals `delta_target`.
pub fn calibrate_beta_for_delta(
    data: &Dataset,
    sigma_p: f64,
    delta_target: f64,
    direction: &[f64],
) -> Result<Vec<f64>> {
    calibrate_on_regressors(
        &data.design[data.n..],
        data.n,
        data.p,
        sigma_p,
        delta_target,
        direction,
    )
}

/// Calibration on a column-major `n x p` regressor block, before a response
/// exists.
pub(crate) fn calibrate_on_regressors(
    regressors: &[f64],
    n: usize,
    p: usize,
    sigma_p: f64,
    delta_target: f64,
    direction: &[f64],
) -> Result<Vec<f64>> {
    if direction.len() != p {
        return Err(Error::DimensionMismatch(format!(
            "direction has length {}, expected p = {p}",
            direction.len()
        )));
    }
    if !(sigma_p > 0.0) {
        return Err(Error::Domain(format!(
            "sigma_p must be positive, got {sigma_p}"
        )));
    }
    if !(delta_target >= 0.0) || !delta_target.is_finite() {
        return Err(Error::Domain(format!(
            "delta_target must be finite and nonnegative, got {delta_target}"
        )));
    }
    let norm = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitDirection { norm });
    }

    let mut xw = vec![0.0; n];
    for (j, &w) in direction.iter().enumerate() {
        for (o, x) in xw.iter_mut().zip(&regressors[j * n..(j + 1) * n]) {
            *o += w * x;
        }
    }
    let raw = xw.iter().map(|v| v * v).sum::<f64>() / n as f64;
    let q = centered_sum_of_squares(&xw) / n as f64;
    if !(q > 1e-14 * raw) {
        return Err(Error::DegenerateDirection);
    }
    let c = (sigma_p * sigma_p * delta_target / q).sqrt();
    let mut beta = Vec::with_capacity(p + 1);
    beta.push(0.0);
    beta.extend(direction.iter().map(|w| c * w));
    Ok(beta)
}
