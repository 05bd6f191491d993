//! Subcommand implementations; each returns the process status.

use std::fs;
use std::path::{Path, PathBuf};

use muskat_core::evolve::{diagnostics_weight, epsilon_continuation, run_trajectory, Outcome, Trajectory};
use muskat_core::verify::{run_suite, InequalityReport, VerifyConfig, SUITES};
use muskat_core::weights::{check_admissible, weight_from_data};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{parse_config, RunMode};
use crate::error::{CliError, Status};
use crate::output::write_run;

fn config_base(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn outcome_status(trs: &[&Trajectory]) -> Status {
    if trs.iter().any(|t| matches!(t.outcome, Outcome::BlowUp { .. })) {
        Status::BlowUp
    } else {
        Status::Ok
    }
}

fn report_outcome(label: &str, tr: &Trajectory) {
    match &tr.outcome {
        Outcome::Completed => eprintln!("{label}: completed, {} steps, {} rejections", tr.steps, tr.rejections),
        Outcome::BlowUp { t, reason } => eprintln!("{label}: stopped at t = {t:e}: {reason:?}"),
    }
}

pub fn run(config: &Path, out: Option<&Path>) -> Result<Status, CliError> {
    let cfg = parse_config(config)?;
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.output.dir.clone());
    let f0 = cfg.initial_field(&config_base(config))?;
    match cfg.mode() {
        RunMode::Single => {
            let solver = cfg.solver(cfg.eps);
            let tr = run_trajectory(&solver, &f0)?;
            write_run(&dir, &cfg, &solver, &tr)?;
            report_outcome(&format!("eps = {:e}", cfg.eps), &tr);
            Ok(outcome_status(&[&tr]))
        }
        RunMode::Continuation => {
            let eps = cfg.eps_list.clone().unwrap_or_default();
            let c = epsilon_continuation(&cfg.solver(eps[0]), &f0, &eps)?;
            for (i, (e, tr)) in c.eps.iter().zip(&c.trajectories).enumerate() {
                write_run(&dir.join(format!("eps_{i:02}")), &cfg, &cfg.solver(*e), tr)?;
                report_outcome(&format!("eps = {e:e}"), tr);
            }
            let decreasing = c.cauchy.windows(2).all(|w| w[1] < w[0]);
            let summary = json!({ "eps": c.eps, "sup_h_half_distance": c.cauchy, "strictly_decreasing": decreasing });
            fs::write(dir.join("continuation.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
            Ok(outcome_status(&c.trajectories.iter().collect::<Vec<_>>()))
        }
    }
}

/// One run per entry of `eps_list` or `amplitude_list`, in parallel.
pub fn sweep(config: &Path, out: Option<&Path>) -> Result<Status, CliError> {
    let cfg = parse_config(config)?;
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.output.dir.clone());
    let base = config_base(config);
    let jobs: Vec<(f64, f64)> = match (&cfg.eps_list, &cfg.amplitude_list) {
        (Some(e), None) => e.iter().map(|&e| (e, cfg.initial_data.amplitude)).collect(),
        (None, Some(a)) => a.iter().map(|&a| (cfg.eps, a)).collect(),
        _ => return Err(CliError::Validation(vec!["sweep needs eps_list or amplitude_list".into()])),
    };
    let results: Vec<Result<(f64, f64, Trajectory), CliError>> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, &(eps, amp))| {
            let f0 = cfg.initial_field_with_amplitude(&base, amp)?;
            let solver = cfg.solver(eps);
            let tr = run_trajectory(&solver, &f0)?;
            write_run(&dir.join(format!("run_{i:03}")), &cfg, &solver, &tr)?;
            Ok((eps, amp, tr))
        })
        .collect();
    let mut rows = Vec::new();
    let mut trs = Vec::new();
    for r in results {
        let (eps, amp, tr) = r?;
        rows.push(json!({
            "eps": eps,
            "amplitude": amp,
            "outcome": tr.outcome,
            "final": tr.records.last(),
            "steps": tr.steps,
        }));
        trs.push(tr);
    }
    fs::write(dir.join("sweep.json"), serde_json::to_string_pretty(&rows)? + "\n")?;
    Ok(outcome_status(&trs.iter().collect::<Vec<_>>()))
}

/// Writes `weights.json` with the data-adapted weight of the initial data.
pub fn weights(config: &Path, out: Option<&Path>) -> Result<Status, CliError> {
    let cfg = parse_config(config)?;
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.output.dir.clone());
    let f0 = cfg.initial_field(&config_base(config))?;
    let w = weight_from_data(&f0.spectrum())?;
    let report = check_admissible(&w);
    let solver_weight = diagnostics_weight(&cfg.solver(cfg.eps), &f0)?;
    let doc = json!({
        "weight": w,
        "admissibility": report,
        "configured_choice": cfg.weight,
        "configured_phi_at_grid": solver_weight.phi(),
    });
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("weights.json"), serde_json::to_string_pretty(&doc)? + "\n")?;
    Ok(if report.all_pass() { Status::Ok } else { Status::Failure })
}

pub fn summary_table(reports: &[InequalityReport]) -> String {
    let mut s = format!("{:<44} {:>12} {:>8} verdict\n", "name", "max_ratio", "samples");
    for r in reports {
        let v = if r.bounded() { "bounded" } else { "SUSPECT-DIVERGENT" };
        s.push_str(&format!("{:<44} {:>12.5e} {:>8} {v}\n", r.name, r.max_ratio, r.sample_count));
    }
    s
}

pub fn verify(suite: &str, seed: u64, trials: Option<usize>, out: &Path) -> Result<Status, CliError> {
    if suite != "all" && !SUITES.contains(&suite) {
        let mut available: Vec<String> = SUITES.iter().map(|s| s.to_string()).collect();
        available.push("all".into());
        return Err(CliError::UnknownSuite { name: suite.into(), available });
    }
    let mut cfg = VerifyConfig { seed, ..VerifyConfig::default() };
    if let Some(t) = trials {
        cfg.trials = t;
    }
    let reports = run_suite(suite, &cfg)?;
    fs::create_dir_all(out)?;
    fs::write(out.join("reports.json"), serde_json::to_string_pretty(&reports)? + "\n")?;
    print!("{}", summary_table(&reports));
    Ok(if reports.iter().all(InequalityReport::bounded) { Status::Ok } else { Status::SuspectDivergent })
}
