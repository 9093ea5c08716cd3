//! Adaptive Gauss-Kronrod quadrature carried out entirely on the log scale.
//!
//! The integrand is supplied as `log f`. Each panel is evaluated with the
//! 7/15-point Gauss-Kronrod pair after subtracting the largest log-integrand
//! value seen on the panel, so integrands of size `exp(n)` for `n` in the
//! millions never overflow. Panel sums are combined with log-sum-exp.
//!
//! Before refinement starts the integrand is scanned for its mode and the
//! points where it has fallen by fixed amounts on either side. These become
//! the initial panel boundaries, which keeps sharply peaked integrands from
//! slipping between the nodes of a coarse first pass.

use super::special::log_sum_exp;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Drops (in log units) below the mode at which initial breakpoints are placed.
const PEAK_DROPS: [f64; 5] = [0.5, 2.0, 8.0, 32.0, 128.0];
const UNIFORM_SCAN: usize = 64;
const GEOMETRIC_SCAN: i32 = 60;
/// Consecutive non-shrinking splits at an outer endpoint that signal divergence.
const DIVERGENCE_STREAK: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_log_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_log_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_log_tol > 0.0) || !self.abs_log_tol.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "abs_log_tol must be positive, got {}",
                self.abs_log_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidConfig(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureStatus {
    Converged,
    MaxSubdivisionsReached,
    Divergent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogIntegralResult {
    /// Natural log of the integral.
    pub log_value: f64,
    pub status: QuadratureStatus,
    /// Estimated absolute error of `log_value`.
    pub error_estimate: f64,
}

impl LogIntegralResult {
    fn divergent() -> Self {
        Self {
            log_value: f64::INFINITY,
            status: QuadratureStatus::Divergent,
            error_estimate: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Edge {
    Lower,
    Upper,
    Interior,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    log_value: f64,
    log_error: f64,
    edge: Edge,
}

struct Unbounded;

fn evaluate_panel<F: Fn(f64) -> f64>(
    log_f: &F,
    a: f64,
    b: f64,
    edge: Edge,
) -> std::result::Result<Panel, Unbounded> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut vals = [0.0f64; 15];
    vals[7] = log_f(centre);
    for k in 0..7 {
        let dx = half * XGK[k];
        vals[k] = log_f(centre - dx);
        vals[14 - k] = log_f(centre + dx);
    }
    let mut shift = f64::NEG_INFINITY;
    for &v in &vals {
        if v.is_nan() || v == f64::INFINITY {
            return Err(Unbounded);
        }
        shift = shift.max(v);
    }
    if shift == f64::NEG_INFINITY {
        return Ok(Panel {
            a,
            b,
            log_value: f64::NEG_INFINITY,
            log_error: f64::NEG_INFINITY,
            edge,
        });
    }
    let e = |v: f64| (v - shift).exp();
    let mut kronrod = WGK[7] * e(vals[7]);
    let mut gauss = WG[3] * e(vals[7]);
    for k in 0..7 {
        let pair = e(vals[k]) + e(vals[14 - k]);
        kronrod += WGK[k] * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    let err = (kronrod - gauss).abs().max(50.0 * f64::EPSILON * kronrod);
    Ok(Panel {
        a,
        b,
        log_value: shift + (kronrod * half).ln(),
        log_error: shift + (err * half).ln(),
        edge,
    })
}

fn is_splittable(a: f64, b: f64) -> bool {
    let mid = 0.5 * (a + b);
    mid > a && mid < b
}

/// Log of the integral of `exp(log_f)` over `[lower, upper]`.
///
/// `log_f` may return `-inf` where the integrand vanishes. A `NaN` or `+inf`
/// anywhere, or panel estimates that keep growing as an endpoint is
/// approached, yields [`QuadratureStatus::Divergent`].
pub fn log_integrate_finite<F: Fn(f64) -> f64>(
    log_f: F,
    lower: f64,
    upper: f64,
    config: &QuadratureConfig,
) -> Result<LogIntegralResult> {
    config.validate()?;
    if !lower.is_finite() || !upper.is_finite() || !(lower < upper) {
        return Err(Error::Domain(format!(
            "finite integration needs lower < upper, got [{lower}, {upper}]"
        )));
    }
    let breaks = match initial_breakpoints(&log_f, lower, upper) {
        Some(b) => b,
        None => return Ok(LogIntegralResult::divergent()),
    };
    adaptive(&log_f, &breaks, config)
}

/// Log of the integral of `exp(log_f)` over `[lower, inf)`.
///
/// The half-line is mapped onto `[0, 1)` by `g = lower + t / (1 - t)`. The
/// integration variable is `s = 1 - t`, so `g = lower + (1 - s) / s` with
/// log-Jacobian `-2 ln s`: a polynomial tail in `g` becomes an endpoint
/// behaviour at `s = 0`, where floating point is dense enough to resolve it.
pub fn log_integrate_semiinfinite<F: Fn(f64) -> f64>(
    log_f: F,
    lower: f64,
    config: &QuadratureConfig,
) -> Result<LogIntegralResult> {
    if !lower.is_finite() {
        return Err(Error::Domain(format!(
            "semi-infinite integration needs a finite lower limit, got {lower}"
        )));
    }
    let mapped = |s: f64| {
        let g = lower + (1.0 - s) / s;
        if !g.is_finite() {
            // only reachable for subnormal s; the point carries no mass
            return f64::NEG_INFINITY;
        }
        log_f(g) - 2.0 * s.ln()
    };
    log_integrate_finite(mapped, 0.0, 1.0, config)
}

/// Scan for the mode and place breakpoints where the log-integrand has
/// dropped by each of `PEAK_DROPS` on either side. `None` signals an
/// integrand that is `NaN` or `+inf` somewhere on the scan.
fn initial_breakpoints<F: Fn(f64) -> f64>(log_f: &F, a: f64, b: f64) -> Option<Vec<f64>> {
    let width = b - a;
    let mut xs: Vec<f64> = Vec::with_capacity(UNIFORM_SCAN + 2 * GEOMETRIC_SCAN as usize);
    for i in 0..UNIFORM_SCAN {
        xs.push(a + width * (i as f64 + 0.5) / UNIFORM_SCAN as f64);
    }
    for k in 7..=GEOMETRIC_SCAN {
        let off = width * 2f64.powi(-k);
        xs.push(a + off);
        xs.push(b - off);
    }
    xs.retain(|&x| x > a && x < b);
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let ys: Vec<f64> = xs.iter().map(|&x| log_f(x)).collect();
    if ys.iter().any(|y| y.is_nan() || *y == f64::INFINITY) {
        return None;
    }

    let mut breaks = vec![a, b];
    for i in 1..4 {
        breaks.push(a + width * i as f64 / 4.0);
    }

    let (imax, &ymax) = ys
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("scan is never empty");
    if ymax == f64::NEG_INFINITY {
        return Some(breaks);
    }

    let lo = if imax == 0 { a } else { xs[imax - 1] };
    let hi = if imax + 1 == xs.len() {
        b
    } else {
        xs[imax + 1]
    };
    let (mode, fmode) = golden_max(log_f, lo, hi, xs[imax], ymax);
    breaks.push(mode);

    for &drop in &PEAK_DROPS {
        let target = fmode - drop;
        // nearest scan point on each side that sits below the target
        if let Some(j) = (0..xs.len())
            .rev()
            .find(|&j| xs[j] < mode && ys[j] < target)
        {
            breaks.push(bisect_level(log_f, xs[j], mode, target));
        }
        if let Some(j) = (0..xs.len()).find(|&j| xs[j] > mode && ys[j] < target) {
            breaks.push(bisect_level(log_f, mode, xs[j], target));
        }
    }

    breaks.retain(|x| x.is_finite() && *x >= a && *x <= b);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    Some(breaks)
}

fn golden_max<F: Fn(f64) -> f64>(
    log_f: &F,
    mut lo: f64,
    mut hi: f64,
    best_x: f64,
    best_y: f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut bx, mut by) = (best_x, best_y);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = log_f(x1);
    let mut f2 = log_f(x2);
    for _ in 0..80 {
        if !(x1 > lo && x2 < hi && x1 < x2) {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = log_f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = log_f(x2);
        }
        for (x, y) in [(x1, f1), (x2, f2)] {
            if y > by {
                bx = x;
                by = y;
            }
        }
    }
    (bx, by)
}

/// Point in `[lo, hi]` where `log_f` crosses `target`, assuming it is below
/// the target at one end and above at the other.
fn bisect_level<F: Fn(f64) -> f64>(log_f: &F, lo: f64, hi: f64, target: f64) -> f64 {
    let below_at_lo = log_f(lo) < target;
    let (mut l, mut h) = (lo, hi);
    for _ in 0..60 {
        let mid = 0.5 * (l + h);
        if !(mid > l && mid < h) {
            break;
        }
        if (log_f(mid) < target) == below_at_lo {
            l = mid;
        } else {
            h = mid;
        }
    }
    0.5 * (l + h)
}

fn adaptive<F: Fn(f64) -> f64>(
    log_f: &F,
    breaks: &[f64],
    config: &QuadratureConfig,
) -> Result<LogIntegralResult> {
    let first = breaks[0];
    let last = breaks[breaks.len() - 1];
    let mut panels = Vec::with_capacity(config.max_subdivisions.max(breaks.len()));
    for w in breaks.windows(2) {
        let edge = if w[0] == first {
            Edge::Lower
        } else if w[1] == last {
            Edge::Upper
        } else {
            Edge::Interior
        };
        match evaluate_panel(log_f, w[0], w[1], edge) {
            Ok(p) => panels.push(p),
            Err(Unbounded) => return Ok(LogIntegralResult::divergent()),
        }
    }

    let mut lower_streak = 0u32;
    let mut upper_streak = 0u32;
    loop {
        let values: Vec<f64> = panels.iter().map(|p| p.log_value).collect();
        let errors: Vec<f64> = panels.iter().map(|p| p.log_error).collect();
        let total = log_sum_exp(&values);
        let total_err = log_sum_exp(&errors);
        if total == f64::NEG_INFINITY {
            return Ok(LogIntegralResult {
                log_value: total,
                status: QuadratureStatus::Converged,
                error_estimate: 0.0,
            });
        }
        if !total.is_finite() {
            return Ok(LogIntegralResult::divergent());
        }
        let error_estimate = (total_err - total).exp();
        let tol = config.abs_log_tol.max(config.rel_tol * total.abs());
        if error_estimate <= tol {
            return Ok(LogIntegralResult {
                log_value: total,
                status: QuadratureStatus::Converged,
                error_estimate,
            });
        }

        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.log_error.total_cmp(&y.1.log_error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let parent = panels[worst];
        if panels.len() >= config.max_subdivisions || !is_splittable(parent.a, parent.b) {
            let status =
                if lower_streak >= DIVERGENCE_STREAK / 2 || upper_streak >= DIVERGENCE_STREAK / 2 {
                    QuadratureStatus::Divergent
                } else {
                    QuadratureStatus::MaxSubdivisionsReached
                };
            return Ok(LogIntegralResult {
                log_value: total,
                status,
                error_estimate,
            });
        }

        let mid = 0.5 * (parent.a + parent.b);
        let (left_edge, right_edge) = match parent.edge {
            Edge::Lower => (Edge::Lower, Edge::Interior),
            Edge::Upper => (Edge::Interior, Edge::Upper),
            Edge::Interior => (Edge::Interior, Edge::Interior),
        };
        let left = evaluate_panel(log_f, parent.a, mid, left_edge);
        let right = evaluate_panel(log_f, mid, parent.b, right_edge);
        let (left, right) = match (left, right) {
            (Ok(l), Ok(r)) => (l, r),
            _ => return Ok(LogIntegralResult::divergent()),
        };

        // A convergent integrand puts strictly less mass on the half panel
        // next to an endpoint than on the whole panel.
        match parent.edge {
            Edge::Lower => {
                lower_streak = grow_streak(lower_streak, left.log_value, parent.log_value)
            }
            Edge::Upper => {
                upper_streak = grow_streak(upper_streak, right.log_value, parent.log_value)
            }
            Edge::Interior => {}
        }
        if lower_streak >= DIVERGENCE_STREAK || upper_streak >= DIVERGENCE_STREAK {
            return Ok(LogIntegralResult::divergent());
        }

        panels[worst] = left;
        panels.push(right);
    }
}

fn grow_streak(streak: u32, child: f64, parent: f64) -> u32 {
    if child.is_finite() && child >= parent - 1e-12 {
        streak + 1
    } else {
        0
    }
}
