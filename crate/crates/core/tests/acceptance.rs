//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line; the process exits
//! non-zero if any criterion fails.

#![allow(clippy::type_complexity, clippy::neg_cmp_op_on_partial_ord)]

#[path = "oracles/closed_forms.rs"]
mod closed_forms;

use bfcons_core::asymptotics::{
    delta_boundary, delta_boundary_limit, in_inconsistency_set, lemma2_approx_b,
    lemma2_lower_bound_l, BoundaryKind, SetKind, Truth,
};
use bfcons_core::bayes_factors::{
    log_bf_b, log_bf_cg, log_bf_fs, log_bf_ip, log_bf_iph, log_bf_l, log_bf_robust, log_bf_zs,
    GPrior, RobustRho,
};
use bfcons_core::figures::crossing_width;
use bfcons_core::numerics::log_integrate_semiinfinite;
use bfcons_core::simulation::{run_experiment, ExperimentResult, ExperimentSpec, PRegime};
use bfcons_core::{BayesFactorKind, QuadratureConfig, SufficientStatistic};
use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

const LATTICE_N: [usize; 3] = [20, 100, 1000];
const LATTICE_P: [usize; 3] = [1, 3, 10];
const LATTICE_B: [f64; 3] = [0.05, 0.5, 0.95];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn stat(b: f64, n: usize, p: usize) -> SufficientStatistic {
    SufficientStatistic::new(b, n, p).expect("valid statistic")
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn lattice() -> impl Iterator<Item = (usize, usize, f64)> {
    LATTICE_N.into_iter().flat_map(|n| {
        LATTICE_P
            .into_iter()
            .flat_map(move |p| LATTICE_B.into_iter().map(move |b| (n, p, b)))
    })
}

fn scaled_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

fn within_budget(elapsed: Duration, budget_secs: u64) -> bool {
    elapsed <= Duration::from_secs(budget_secs)
}

// ---------------------------------------------------------------------------
// Fixed-grid oracles

/// Composite Simpson on `m` (even) intervals of `exp(log_f)`, max-shifted.
fn simpson_log(log_f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let ys: Vec<f64> = (0..=m).map(|i| log_f(a + i as f64 * h)).collect();
    let shift = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (i, y) in ys.iter().enumerate() {
        let w = if i == 0 || i == m {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += w * (y - shift).exp();
    }
    shift + (sum * h / 3.0).ln()
}

const ORACLE_POINTS: usize = 1_000_000;

/// Oracle for `∫_lower^∞ exp(log_f(g)) dg` in `u = ln(g - lower)`, on the
/// range where the log-integrand is within 60 of its maximum.
fn mixture_oracle(log_f: impl Fn(f64) -> f64, lower: f64) -> f64 {
    let h = |u: f64| log_f(lower + u.exp()) + u;
    let coarse: Vec<(f64, f64)> = (0..=40_000)
        .map(|i| {
            let u = -200.0 + i as f64 * 0.01;
            (u, h(u))
        })
        .collect();
    let top = coarse.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let keep: Vec<f64> = coarse
        .iter()
        .filter(|c| c.1 >= top - 60.0)
        .map(|c| c.0)
        .collect();
    let ua = keep[0] - 0.5;
    let ub = keep[keep.len() - 1] + 0.5;
    simpson_log(h, ua, ub, ORACLE_POINTS)
}

fn textbook_ratio(n: f64, p: f64, b: f64, g: f64) -> f64 {
    (n - p - 1.0) / 2.0 * (1.0 + g).ln() - (n - 1.0) / 2.0 * (1.0 + g * b).ln()
}

fn oracle_ip(n: f64, p: f64, b: f64) -> f64 {
    let c = p / 2.0 * (p + 2.0).ln() - FRAC_PI_2.ln();
    let f = |phi: f64| {
        let s2 = phi.sin().powi(2);
        p * phi.sin().ln() + (n - p - 1.0) / 2.0 * (n + (p + 2.0) * s2).ln()
            - (n - 1.0) / 2.0 * ((p + 2.0) * s2 + n * b).ln()
    };
    c + simpson_log(f, 0.0, FRAC_PI_2, ORACLE_POINTS)
}

fn oracle_zs(n: f64, p: f64, b: f64) -> f64 {
    mixture_oracle(
        |g| {
            textbook_ratio(n, p, b, g) + 0.5 * (n / 2.0).ln()
                - 0.5 * PI.ln()
                - 1.5 * g.ln()
                - n / (2.0 * g)
        },
        0.0,
    )
}

fn oracle_l(n: f64, p: f64, b: f64) -> f64 {
    mixture_oracle(
        |g| textbook_ratio(n, p, b, g) - (2.0 * n).ln() - 1.5 * (1.0 + g / n).ln(),
        0.0,
    )
}

fn oracle_cg(n: f64, p: f64, b: f64) -> f64 {
    mixture_oracle(|g| textbook_ratio(n, p, b, g) - 2.0 * (1.0 + g).ln(), 0.0)
}

fn oracle_b(n: f64, p: f64, b: f64) -> f64 {
    let k = (1.0 + n) / (1.0 + p);
    mixture_oracle(
        |g| textbook_ratio(n, p, b, g) + (0.5 * k.sqrt()).ln() - 1.5 * (1.0 + g).ln(),
        k - 1.0,
    )
}

// ---------------------------------------------------------------------------
// Criteria

fn c1_closed_forms() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &(n, p, b, fs, iph) in closed_forms::CLOSED_FORMS {
        let s = stat(b, n, p);
        worst = worst.max((log_bf_fs(&s).log_bf - fs).abs() / fs.abs());
        worst = worst.max((log_bf_iph(&s).log_bf - iph).abs() / iph.abs());
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-12 && within_budget(elapsed, 1),
        format!(
            "{} values, max relative error {worst:.2e}, {:.3} s",
            2 * closed_forms::CLOSED_FORMS.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn c2_quadrature_vs_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    let mut failures = 0;
    type Lib = fn(
        &SufficientStatistic,
        &QuadratureConfig,
    ) -> bfcons_core::Result<bfcons_core::LogBayesFactor>;
    let kinds: [(&str, Lib, fn(f64, f64, f64) -> f64); 5] = [
        ("ip", log_bf_ip, oracle_ip),
        ("zs", log_bf_zs, oracle_zs),
        ("l", log_bf_l, oracle_l),
        ("cg", log_bf_cg, oracle_cg),
        ("b", log_bf_b, oracle_b),
    ];
    for (name, lib, oracle) in kinds {
        for (n, p, b) in lattice() {
            let want = oracle(n as f64, p as f64, b);
            match lib(&stat(b, n, p), &cfg()) {
                Ok(got) => {
                    let e = scaled_err(got.log_bf, want);
                    if e > worst {
                        worst = e;
                        worst_at = format!("{name} n={n} p={p} B={b}");
                    }
                }
                Err(_) => failures += 1,
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-8 && failures == 0 && within_budget(elapsed, 120),
        format!(
            "135 points, max scaled error {worst:.2e} ({worst_at}), {failures} failures, {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn c3_robust_specializations() -> Outcome {
    let mut worst = 0.0f64;
    for (n, p, b) in lattice() {
        let s = stat(b, n, p);
        let nf = n as f64;
        let pairs = [
            (
                log_bf_l(&s, &cfg()),
                log_bf_robust(&s, 0.5, nf, RobustRho::Fixed(0.5), &cfg()),
            ),
            (
                log_bf_cg(&s, &cfg()),
                log_bf_robust(&s, 1.0, 1.0, RobustRho::Fixed(1.0 / (1.0 + nf)), &cfg()),
            ),
            (
                log_bf_b(&s, &cfg()),
                log_bf_robust(
                    &s,
                    0.5,
                    1.0,
                    RobustRho::Fixed(1.0 / (1.0 + p as f64)),
                    &cfg(),
                ),
            ),
        ];
        for (x, y) in pairs {
            match (x, y) {
                (Ok(x), Ok(y)) => worst = worst.max(scaled_err(y.log_bf, x.log_bf)),
                _ => worst = f64::INFINITY,
            }
        }
    }
    outcome(
        worst <= 1e-10,
        format!("81 identities, max scaled difference {worst:.2e}"),
    )
}

fn c4_prior_normalization() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in LATTICE_N {
        for p in LATTICE_P {
            let nf = n as f64;
            let mut priors = vec![
                GPrior::ZellnerSiow { n: nf },
                GPrior::HyperGn { n: nf },
                GPrior::CuiGeorge,
                GPrior::Bayarri { n: nf, p: p as f64 },
            ];
            for (a, d) in [(0.5, 1.0), (0.7, 2.0), (2.0, 0.3)] {
                priors.push(GPrior::robust(a, d, d / (d + nf), n).unwrap());
                priors.push(GPrior::robust(a, d, 0.5, n).unwrap());
            }
            for prior in priors {
                let r = log_integrate_semiinfinite(|g| prior.log_density(g), prior.lower(), &cfg())
                    .unwrap();
                worst = worst.max(r.log_value.abs());
                count += 1;
            }
        }
    }
    outcome(
        worst <= 1e-8,
        format!("{count} priors, max |log mass| {worst:.2e}"),
    )
}

fn c5_boundary_limits() -> Outcome {
    let ip = delta_boundary_limit(BoundaryKind::Ip);
    let iph = delta_boundary_limit(BoundaryKind::Iph);
    let zs = delta_boundary(BoundaryKind::Zs, 1.0 + 1e-6).unwrap();
    let pass = (ip - 0.4427).abs() <= 5e-5
        && (ip - (1.0 / 2f64.ln() - 1.0)).abs() <= 5e-5
        && (iph - 0.8205).abs() <= 5e-5
        && (iph - (2.0 / 3f64.ln() - 1.0)).abs() <= 5e-5
        && zs > 1e5
        && delta_boundary_limit(BoundaryKind::Zs).is_infinite()
        && delta_boundary_limit(BoundaryKind::B).is_infinite();
    outcome(
        pass,
        format!("IP limit {ip:.6}, IPH limit {iph:.6}, ZS boundary at r = 1 + 1e-6: {zs:e}"),
    )
}

fn c6_region_structure() -> Outcome {
    let start = Instant::now();
    let rs: Vec<f64> = (1..=200).map(|i| 1.0 + 19.0 * i as f64 / 200.0).collect();
    let ds: Vec<f64> = (0..200).map(|j| 10.0 * j as f64 / 199.0).collect();
    let mut violations = 0;
    for &r in &rs {
        for &d in &ds {
            let m = |k| in_inconsistency_set(k, r, d).unwrap();
            let (ip, iph, zs, b) = (
                m(SetKind::Ip),
                m(SetKind::Iph),
                m(SetKind::Zs),
                m(SetKind::B),
            );
            if (ip && !iph) || (iph && !zs) || (b && !zs) {
                violations += 1;
            }
        }
    }

    let mut shape_ok = true;
    let fine: Vec<f64> = (1..=2000).map(|i| 1.0 + 99.0 * i as f64 / 2000.0).collect();
    for kind in [BoundaryKind::Ip, BoundaryKind::Iph, BoundaryKind::Zs] {
        let v: Vec<f64> = fine
            .iter()
            .map(|&r| delta_boundary(kind, r).unwrap())
            .collect();
        if !v.windows(2).all(|w| w[1] < w[0]) {
            shape_ok = false;
        }
        if !v.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] >= -1e-9) {
            shape_ok = false;
        }
        if !(delta_boundary(kind, 1e4).unwrap() < 0.01) {
            shape_ok = false;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        violations == 0 && shape_ok && within_budget(elapsed, 10),
        format!(
            "{violations} inclusion violations on 200x200, boundary shape {}, {:.2} s",
            if shape_ok { "ok" } else { "violated" },
            elapsed.as_secs_f64()
        ),
    )
}

fn experiment(
    kind: BayesFactorKind,
    truth: Truth,
    delta: f64,
    regime: PRegime,
    n_grid: &[usize],
    replicates: usize,
    seed: u64,
) -> bfcons_core::Result<ExperimentResult> {
    let spec = ExperimentSpec {
        kind,
        truth,
        delta_target: delta,
        regime,
        n_grid: n_grid.to_vec(),
        replicates,
        sigma: 1.0,
        seed,
    };
    run_experiment(&spec, &cfg())
}

fn medians(r: &ExperimentResult) -> Vec<f64> {
    r.trajectory.iter().map(|t| t.median_log_bf).collect()
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

fn fmt_series(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3}")).collect();
    format!("[{}]", parts.join(", "))
}

fn c7_statistic_limits() -> Outcome {
    let start = Instant::now();
    let prop = experiment(
        BayesFactorKind::Fs,
        Truth::Null,
        0.0,
        PRegime::Proportional(4.0),
        &[2000],
        500,
        7001,
    );
    let fixed = experiment(
        BayesFactorKind::Fs,
        Truth::Null,
        0.0,
        PRegime::FixedP(2),
        &[2000],
        500,
        7002,
    );
    let elapsed = start.elapsed();
    match (prop, fixed) {
        (Ok(prop), Ok(fixed)) => {
            let a = prop.trajectory[0].median_bstat;
            let b = fixed.trajectory[0].median_bstat;
            outcome(
                (a - 0.75).abs() <= 0.02 && (b - 1.0).abs() <= 0.02 && within_budget(elapsed, 300),
                format!(
                    "median B at n = 2000: p = n/4 {a:.4}, p = 2 {b:.4}, {:.1} s",
                    elapsed.as_secs_f64()
                ),
            )
        }
        (Err(e), _) | (_, Err(e)) => outcome(false, format!("simulation failed: {e}")),
    }
}

fn c8_linear_growth_trajectories() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut pass = true;
    let mut check =
        |label: &str, res: bfcons_core::Result<ExperimentResult>, want_up: bool| match res {
            Ok(r) => {
                let m = medians(&r);
                let ok = if want_up {
                    strictly_increasing(&m)
                } else {
                    strictly_decreasing(&m)
                };
                pass &= ok;
                notes.push(format!("{label} {}", fmt_series(&m)));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("{label} failed: {e}"));
            }
        };

    let small = [50, 200, 800];
    let large = [100, 400, 1600];
    check(
        "fs alt r=5 d=1",
        experiment(
            BayesFactorKind::Fs,
            Truth::Alternative,
            1.0,
            PRegime::Proportional(5.0),
            &small,
            300,
            8001,
        ),
        false,
    );
    check(
        "ip alt r=2 d=1",
        experiment(
            BayesFactorKind::Ip,
            Truth::Alternative,
            1.0,
            PRegime::Proportional(2.0),
            &large,
            300,
            8002,
        ),
        true,
    );
    check(
        "ip alt r=2 d=0.2",
        experiment(
            BayesFactorKind::Ip,
            Truth::Alternative,
            0.2,
            PRegime::Proportional(2.0),
            &large,
            300,
            8003,
        ),
        false,
    );
    for kind in [
        BayesFactorKind::Ip,
        BayesFactorKind::Iph,
        BayesFactorKind::Zs,
        BayesFactorKind::Fs,
        BayesFactorKind::B,
    ] {
        check(
            &format!("{kind} null r=4"),
            experiment(
                kind,
                Truth::Null,
                0.0,
                PRegime::Proportional(4.0),
                &small,
                300,
                8004,
            ),
            false,
        );
    }
    let elapsed = start.elapsed();
    let pass = pass && within_budget(elapsed, 900);
    outcome(
        pass,
        format!("{}; {:.1} s", notes.join("; "), elapsed.as_secs_f64()),
    )
}

fn c9_large_n_approximations() -> Outcome {
    let n = 10_000;
    let mut worst_bound = f64::NEG_INFINITY;
    let mut worst_approx = 0.0f64;
    for p in [1, 3, 5] {
        for b in [0.3, 0.6, 0.9] {
            let s = stat(b, n, p);
            let l = log_bf_l(&s, &cfg()).unwrap().log_bf;
            let bound = lemma2_lower_bound_l(&s).unwrap();
            // how far l falls below the allowed floor, as a fraction of |bound|
            worst_bound = worst_bound.max((bound - 0.01 * bound.abs() - l) / bound.abs());
            let bb = log_bf_b(&s, &cfg()).unwrap().log_bf;
            let approx = lemma2_approx_b(&s).unwrap();
            worst_approx = worst_approx.max((bb - approx).abs() / bb.abs());
        }
    }
    outcome(
        worst_bound <= 0.0 && worst_approx <= 0.01,
        format!(
            "bound slack margin {:.2e} (must be <= 0), max relative gap to approximation {worst_approx:.2e}",
            worst_bound
        ),
    )
}

fn c10_crossing_widths() -> Outcome {
    let start = Instant::now();
    let (n, p) = (100, 20);
    let kinds = [
        BayesFactorKind::Fs,
        BayesFactorKind::Zs,
        BayesFactorKind::Ip,
        BayesFactorKind::Iph,
        BayesFactorKind::B,
    ];
    let mut widths = Vec::new();
    for kind in kinds {
        match crossing_width(&kind, n, p, 0.05, 0.95, &cfg()) {
            Ok(Some(w)) => widths.push((kind, w)),
            _ => return outcome(false, format!("{kind}: crossing not found")),
        }
    }
    let sharp = widths[..2]
        .iter()
        .map(|w| w.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let gradual = widths[2..]
        .iter()
        .map(|w| w.1)
        .fold(f64::INFINITY, f64::min);
    let elapsed = start.elapsed();
    let listing: Vec<String> = widths.iter().map(|(k, w)| format!("{k} {w:.4}")).collect();
    outcome(
        sharp < gradual && within_budget(elapsed, 10),
        format!(
            "widths {}; {:.2} s",
            listing.join(", "),
            elapsed.as_secs_f64()
        ),
    )
}

fn main() {
    // `cargo test` passes harness flags such as `--nocapture`; a name filter
    // that matches nothing here skips the suite.
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        return;
    }
    let filter = args.iter().find(|a| !a.starts_with('-'));
    if filter.is_some_and(|f| !"acceptance".contains(f.as_str())) {
        return;
    }

    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closed-form exactness", c1_closed_forms),
        ("quadrature vs fixed-grid oracles", c2_quadrature_vs_oracle),
        ("robust-class specializations", c3_robust_specializations),
        ("prior normalizations", c4_prior_normalization),
        ("boundary limits", c5_boundary_limits),
        ("inconsistency-region structure", c6_region_structure),
        ("statistic limits by simulation", c7_statistic_limits),
        (
            "linear-growth trajectories by simulation",
            c8_linear_growth_trajectories,
        ),
        ("large-n bound and approximation", c9_large_n_approximations),
        ("posterior curve crossing widths", c10_crossing_widths),
    ];
    // BFCONS_ACCEPTANCE=1,5,10 runs a subset
    let only: Option<Vec<usize>> = std::env::var("BFCONS_ACCEPTANCE")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.as_ref().is_some_and(|o| !o.contains(&(i + 1))) {
            continue;
        }
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {name}: {} ({})",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
