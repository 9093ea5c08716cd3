use bfcons_core::asymptotics::{BoundaryKind, Truth};
use bfcons_core::bayes_factors::{log_bayes_factor, BayesFactorKind, BfStatus};
use bfcons_core::figures::{delta_grid, posterior_curve, ratio_grid, region_map};
use bfcons_core::simulation::{rate_diagnostic, run_experiment, ExperimentSpec, PRegime};
use bfcons_core::{compute_sufficient_statistic, SufficientStatistic};
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::io::{fmt_num, json_num, read_dataset, write_atomic};
use crate::{
    CliError, ComputeArgs, CurveArgs, RegionArgs, RegionKindArg, RobustArgs, SimulateArgs, TruthArg,
};

fn parse_kind(name: &str, robust: &RobustArgs) -> Result<BayesFactorKind, CliError> {
    if name.trim().eq_ignore_ascii_case("robust") {
        let (Some(a), Some(d)) = (robust.a, robust.d) else {
            return Err(CliError::Input(
                "the robust kind needs --a and --d (and optionally --rho)".into(),
            ));
        };
        return Ok(BayesFactorKind::Robust {
            a,
            d,
            rho: robust.rho,
        });
    }
    Ok(name.parse()?)
}

fn status_str(s: BfStatus) -> &'static str {
    match s {
        BfStatus::ExactClosedForm => "exact_closed_form",
        BfStatus::QuadratureConverged => "quadrature_converged",
        BfStatus::QuadratureDegraded => "quadrature_degraded",
        BfStatus::PerfectFit => "perfect_fit",
    }
}

pub fn compute(args: &ComputeArgs) -> Result<(), CliError> {
    let config = args.quad.config()?;
    let kind = parse_kind(&args.kind, &args.robust)?;
    let (stat, source) = match (&args.input, args.bstat, args.n, args.p) {
        (Some(path), None, None, None) => {
            let data = read_dataset(path)?;
            (compute_sufficient_statistic(&data)?, "csv")
        }
        (None, Some(b), Some(n), Some(p)) => (SufficientStatistic::new(b, n, p)?, "statistic"),
        _ => {
            return Err(CliError::Input(
                "give either --bstat with --n and --p, or --input alone".into(),
            ))
        }
    };
    let bf = log_bayes_factor(&kind, &stat, &config)?;
    if bf.status == BfStatus::QuadratureDegraded {
        eprintln!("warning: quadrature budget exhausted; value is approximate");
    }

    let text = if args.json {
        let report = json!({
            "kind": serde_json::to_value(kind).expect("serializable kind"),
            "n": stat.n(),
            "p": stat.p(),
            "bstat": json_num(stat.bp0()),
            "source": source,
            "ln_bf": json_num(bf.log_bf),
            "log10_bf": json_num(bf.log10()),
            "p_m0": json_num(bf.posterior_prob_m0()),
            "status": status_str(bf.status),
        });
        serde_json::to_string_pretty(&report).expect("serializable") + "\n"
    } else {
        [
            format!("kind      {kind}"),
            format!("n         {}", stat.n()),
            format!("p         {}", stat.p()),
            format!("bstat     {} ({source})", fmt_num(stat.bp0())),
            format!("ln_bf     {}", fmt_num(bf.log_bf)),
            format!("log10_bf  {}", fmt_num(bf.log10())),
            format!("p_m0      {}", fmt_num(bf.posterior_prob_m0())),
            format!("status    {}\n", status_str(bf.status)),
        ]
        .join("\n")
    };
    print_stdout(&text)
}

/// Writes to stdout; a reader that closed the pipe early is not an error.
fn print_stdout(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(CliError::Input(format!("stdout: {e}")))
        }
        _ => Ok(()),
    }
}

fn csv_bytes(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn curve(args: &CurveArgs) -> Result<(), CliError> {
    let config = args.quad.config()?;
    let kinds = args
        .kind
        .iter()
        .map(|k| parse_kind(k, &args.robust))
        .collect::<Result<Vec<_>, _>>()?;
    if kinds.is_empty() {
        return Err(CliError::Input("no kinds requested".into()));
    }
    let curve = posterior_curve(&kinds, args.n, args.p, args.grid, &config)?;

    let mut header = vec!["bstat".to_string()];
    header.extend(kinds.iter().map(|k| k.label().to_string()));
    let rows = curve.bstat.iter().enumerate().map(|(i, &b)| {
        let mut row = vec![fmt_num(b)];
        row.extend(
            curve
                .columns
                .iter()
                .map(|c| c.values[i].map(fmt_num).unwrap_or_default()),
        );
        row
    });
    write_atomic(&args.out, &csv_bytes(&header, rows))?;

    let failed = curve.failed_cells();
    if failed > 0 {
        eprintln!("warning: {failed} cells failed numerically and were left empty");
        return Err(CliError::Numerical(format!(
            "{failed} grid points failed; see {}",
            args.out.display()
        )));
    }
    Ok(())
}

fn boundary_kind(k: RegionKindArg) -> BoundaryKind {
    match k {
        RegionKindArg::Ip => BoundaryKind::Ip,
        RegionKindArg::Iph => BoundaryKind::Iph,
        RegionKindArg::Zs => BoundaryKind::Zs,
        RegionKindArg::B => BoundaryKind::B,
    }
}

fn default_boundary_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "region".into());
    out.with_file_name(format!("{stem}_boundary.csv"))
}

pub fn region(args: &RegionArgs) -> Result<(), CliError> {
    if !(args.r_min > 1.0) {
        return Err(CliError::Input(format!(
            "--r-min must exceed 1, got {}",
            args.r_min
        )));
    }
    if args.kind.is_empty() {
        return Err(CliError::Input("no kinds requested".into()));
    }
    let kinds: Vec<BoundaryKind> = args.kind.iter().map(|&k| boundary_kind(k)).collect();
    let rs = ratio_grid(args.r_min, args.r_max, args.grid)?;
    let ds = delta_grid(args.delta_min, args.delta_max, args.grid)?;
    let map = region_map(&kinds, rs, ds)?;

    let mut header = vec!["r".to_string(), "delta".to_string()];
    header.extend(kinds.iter().map(|k| format!("{}_member", k.label())));
    let rows = map.rows.iter().map(|row| {
        let mut cells = vec![fmt_num(row.r), fmt_num(row.delta)];
        cells.extend(
            row.members
                .iter()
                .map(|&m| if m { "1" } else { "0" }.to_string()),
        );
        cells
    });
    write_atomic(&args.out, &csv_bytes(&header, rows))?;

    let mut header = vec!["r".to_string()];
    header.extend(
        kinds
            .iter()
            .map(|k| format!("{}_delta_boundary", k.label())),
    );
    let rows = map.r_values.iter().enumerate().map(|(i, &r)| {
        let mut cells = vec![fmt_num(r)];
        cells.extend(map.boundaries.iter().map(|b| fmt_num(b[i])));
        cells
    });
    let boundary_path = args
        .boundary_out
        .clone()
        .unwrap_or_else(|| default_boundary_path(&args.out));
    write_atomic(&boundary_path, &csv_bytes(&header, rows))?;
    Ok(())
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let config = args.quad.config()?;
    let kind = parse_kind(&args.kind, &args.robust)?;
    let regime = match (args.fixed_p, args.ratio) {
        (Some(p), None) => PRegime::FixedP(p),
        (None, Some(r)) => PRegime::Proportional(r),
        _ => {
            return Err(CliError::Input(
                "give exactly one of --fixed-p and --ratio".into(),
            ))
        }
    };
    let truth = match args.truth {
        TruthArg::Null => Truth::Null,
        TruthArg::Alternative => Truth::Alternative,
    };
    let spec = ExperimentSpec {
        kind,
        truth,
        delta_target: args.delta,
        regime,
        n_grid: args.n_grid.clone(),
        replicates: args.reps,
        sigma: args.sigma,
        seed: args.seed,
    };
    spec.validate()?;
    let result = run_experiment(&spec, &config)?;

    let diagnostic = match (truth, regime) {
        (Truth::Null, PRegime::FixedP(p)) => rate_diagnostic(&result, p),
        _ => None,
    };
    let trajectory: Vec<Value> = result
        .trajectory
        .iter()
        .map(|t| {
            json!({
                "n": t.n,
                "p": t.p,
                "median_log_bf": json_num(t.median_log_bf),
                "q10": json_num(t.q10),
                "q90": json_num(t.q90),
                "median_bstat": json_num(t.median_bstat),
            })
        })
        .collect();
    let report = json!({
        "spec": serde_json::to_value(&result.spec).expect("finite spec"),
        "trajectory": trajectory,
        "slope": result.slope.map(json_num),
        "rate_diagnostic": diagnostic.map(json_num),
        "failures": result.failures,
    });
    let mut text = serde_json::to_string_pretty(&report).expect("serializable");
    text.push('\n');
    write_atomic(&args.out, text.as_bytes())
}
