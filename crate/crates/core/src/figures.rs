//! Data behind the posterior-probability curves and the inconsistency-region
//! maps. Plotting is left to external tools.

use crate::asymptotics::{delta_boundary, in_inconsistency_set, BoundaryKind};
use crate::bayes_factors::{log_bayes_factor, posterior_prob_m0, BayesFactorKind};
use crate::error::{Error, Result};
use crate::numerics::QuadratureConfig;
use crate::stats::SufficientStatistic;

/// `B_i = i / grid_size` for `i = 1..=grid_size`; zero is excluded.
pub fn curve_grid(grid_size: usize) -> Result<Vec<f64>> {
    if grid_size == 0 {
        return Err(Error::Domain("curve grid needs at least one point".into()));
    }
    Ok((1..=grid_size)
        .map(|i| i as f64 / grid_size as f64)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveColumn {
    pub kind: BayesFactorKind,
    /// `P(M_0 | B)` per grid point; `None` where the Bayes factor failed.
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorCurve {
    pub n: usize,
    pub p: usize,
    pub bstat: Vec<f64>,
    pub columns: Vec<CurveColumn>,
}

impl PosteriorCurve {
    pub fn failed_cells(&self) -> usize {
        self.columns
            .iter()
            .map(|c| c.values.iter().filter(|v| v.is_none()).count())
            .sum()
    }
}

/// Posterior probability of the null across the statistic grid, one column
/// per kind. Numerical failures leave empty cells; invalid inputs are errors.
pub fn posterior_curve(
    kinds: &[BayesFactorKind],
    n: usize,
    p: usize,
    grid_size: usize,
    config: &QuadratureConfig,
) -> Result<PosteriorCurve> {
    config.validate()?;
    let bstat = curve_grid(grid_size)?;
    SufficientStatistic::new(1.0, n, p)?;
    let mut columns = Vec::with_capacity(kinds.len());
    for kind in kinds {
        let mut values = Vec::with_capacity(bstat.len());
        for &b in &bstat {
            let stat = SufficientStatistic::new(b, n, p)?;
            match log_bayes_factor(kind, &stat, config) {
                Ok(bf) => values.push(Some(posterior_prob_m0(bf.log_bf))),
                Err(e) if e.is_numerical() => values.push(None),
                Err(e) => return Err(e),
            }
        }
        columns.push(CurveColumn {
            kind: *kind,
            values,
        });
    }
    Ok(PosteriorCurve {
        n,
        p,
        bstat,
        columns,
    })
}

/// The statistic at which `P(M_0 | B)` equals `prob`, found by bisection on
/// `(0, 1]`. `None` if the curve never reaches `prob` on that interval.
pub fn posterior_crossing(
    kind: &BayesFactorKind,
    n: usize,
    p: usize,
    prob: f64,
    config: &QuadratureConfig,
) -> Result<Option<f64>> {
    if !(prob > 0.0 && prob < 1.0) {
        return Err(Error::Domain(format!(
            "probability must lie in (0, 1), got {prob}"
        )));
    }
    // P(M_0) = prob  <=>  ln BF = ln((1 - prob) / prob)
    let target = ((1.0 - prob) / prob).ln();
    let f = |b: f64| -> Result<f64> {
        let stat = SufficientStatistic::new(b, n, p)?;
        Ok(log_bayes_factor(kind, &stat, config)?.log_bf - target)
    };
    let mut lo = 1e-12;
    let mut hi = 1.0;
    if f(hi)? > 0.0 || f(lo)? < 0.0 {
        return Ok(None);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) || hi - lo < 1e-13 {
            break;
        }
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Width in `B` over which `P(M_0 | B)` climbs from `low` to `high`.
pub fn crossing_width(
    kind: &BayesFactorKind,
    n: usize,
    p: usize,
    low: f64,
    high: f64,
    config: &QuadratureConfig,
) -> Result<Option<f64>> {
    if !(low < high) {
        return Err(Error::Domain(format!(
            "need low < high, got {low} and {high}"
        )));
    }
    let a = posterior_crossing(kind, n, p, low, config)?;
    let b = posterior_crossing(kind, n, p, high, config)?;
    Ok(a.zip(b).map(|(a, b)| b - a))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionRow {
    pub r: f64,
    pub delta: f64,
    /// Membership per requested kind, in request order.
    pub members: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionMap {
    pub kinds: Vec<BoundaryKind>,
    pub r_values: Vec<f64>,
    pub delta_values: Vec<f64>,
    /// `r` outer, `delta` inner.
    pub rows: Vec<RegionRow>,
    /// `boundaries[k][i]` is the boundary of `kinds[k]` at `r_values[i]`.
    pub boundaries: Vec<Vec<f64>>,
}

/// `r_i = lo + (hi - lo) i / size` for `i = 1..=size`: left-open.
pub fn ratio_grid(lo: f64, hi: f64, size: usize) -> Result<Vec<f64>> {
    if !(lo >= 1.0) || !(hi > lo) || !hi.is_finite() || size == 0 {
        return Err(Error::Domain(format!(
            "ratio range needs 1 <= lo < hi and a positive size, got ({lo}, {hi}] with {size}"
        )));
    }
    Ok((1..=size)
        .map(|i| lo + (hi - lo) * i as f64 / size as f64)
        .collect())
}

/// `delta_j = lo + (hi - lo) j / (size - 1)` for `j = 0..size`: closed.
pub fn delta_grid(lo: f64, hi: f64, size: usize) -> Result<Vec<f64>> {
    if !(lo >= 0.0) || !(hi > lo) || !hi.is_finite() || size < 2 {
        return Err(Error::Domain(format!(
            "delta range needs 0 <= lo < hi and at least two points, got [{lo}, {hi}] with {size}"
        )));
    }
    Ok((0..size)
        .map(|j| lo + (hi - lo) * j as f64 / (size - 1) as f64)
        .collect())
}

/// Membership of every grid point in each kind's inconsistency set, with the
/// boundary curve of each kind along the `r` grid.
pub fn region_map(
    kinds: &[BoundaryKind],
    r_values: Vec<f64>,
    delta_values: Vec<f64>,
) -> Result<RegionMap> {
    let mut rows = Vec::with_capacity(r_values.len() * delta_values.len());
    for &r in &r_values {
        for &delta in &delta_values {
            let members = kinds
                .iter()
                .map(|&k| in_inconsistency_set(k.into(), r, delta))
                .collect::<Result<Vec<bool>>>()?;
            rows.push(RegionRow { r, delta, members });
        }
    }
    let boundaries = kinds
        .iter()
        .map(|&k| {
            r_values
                .iter()
                .map(|&r| delta_boundary(k, r))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionMap {
        kinds: kinds.to_vec(),
        r_values,
        delta_values,
        rows,
        boundaries,
    })
}
