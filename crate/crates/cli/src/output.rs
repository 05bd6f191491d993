//! Files written by a run: `ledger.csv`, `meta.json`, snapshots and `plot.gp`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use muskat_core::alpha::AlphaQuadrature;
use muskat_core::diagnostics::{EnergyRecord, CSV_HEADER, CSV_SCHEMA_VERSION};
use muskat_core::evolve::{Outcome, SolverConfig, Trajectory};
use muskat_core::SampledField;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::CliError;

pub fn ledger_text(records: &[EnergyRecord]) -> String {
    let mut s = String::with_capacity(64 * (records.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in records {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// Snapshot file: a `#` header line, then `x,f` rows.
pub fn snapshot_text(t: f64, eps: f64, f: &SampledField) -> String {
    let g = f.grid();
    let mut s = format!("# t={t:e}, N={}, L={:e}, eps={eps:e}\nx,f\n", g.len(), g.half_length());
    for (j, v) in f.values().iter().enumerate() {
        let _ = writeln!(s, "{:e},{:e}", g.x(j), v);
    }
    s
}

/// Reads the `f` column of a snapshot-format file.
pub fn read_profile(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == "x,f" {
            continue;
        }
        let v = line
            .rsplit(',')
            .next()
            .and_then(|c| c.trim().parse::<f64>().ok())
            .ok_or_else(|| CliError::Parse(format!("{}: line {}: expected `x,f`", path.display(), ln + 1)))?;
        out.push(v);
    }
    Ok(out)
}

pub fn plot_script() -> String {
    let cols: Vec<&str> = CSV_HEADER.split(',').collect();
    let mut s = String::from("set datafile separator ','\nset key autotitle columnhead\nset xlabel 't'\nset logscale y\n");
    s.push_str("set terminal pngcairo size 1200,800\nset output 'energies.png'\nplot ");
    let plotted: Vec<String> = ["L2", "H_half", "H_threehalf", "H_threehalf_phi", "A", "B", "coercive_plain"]
        .iter()
        .map(|c| format!("'ledger.csv' using 1:{} with lines", cols.iter().position(|x| x == c).expect("column") + 1))
        .collect();
    s.push_str(&plotted.join(", \\\n     "));
    s.push_str("\nset output 'slope.png'\nunset logscale y\n");
    let k = cols.iter().position(|x| *x == "sup_slope").expect("column") + 1;
    let _ = writeln!(s, "plot 'ledger.csv' using 1:{k} with lines");
    s
}

/// SHA-256 of the normalized configuration and package version.
pub fn provenance_hash(cfg: &ExperimentConfig) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(cfg).expect("config serializes"));
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize)]
struct RunSummary<'a> {
    eps: f64,
    outcome: &'a Outcome,
    steps: usize,
    rejections: usize,
    max_l2_growth: f64,
    records: usize,
}

pub fn meta_json(cfg: &ExperimentConfig, solver: &SolverConfig, tr: &Trajectory) -> Result<Value, CliError> {
    let grid = cfg.grid()?;
    let aq = AlphaQuadrature::new(&grid, 1, 1, solver.alpha_extent)?;
    Ok(json!({
        "csv_schema_version": CSV_SCHEMA_VERSION,
        "csv_columns": CSV_HEADER.split(',').collect::<Vec<_>>(),
        "config": cfg,
        "provenance": {
            "package": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "config_sha256": provenance_hash(cfg),
        },
        "solver": solver,
        "tolerances": {
            "energy_guard": solver.energy_guard,
            "dt_min": solver.dt_min,
            "blowup_slope": solver.blowup_slope,
            "max_steps": solver.max_steps,
        },
        "quadrature": {
            "alpha_step": aq.step(),
            "alpha_nodes": aq.nodes(),
            "alpha_extent": aq.extent(),
            "far_field": "closed-form per-mode tail",
            "dealias_fraction": solver.dealias_fraction,
        },
        "run": RunSummary {
            eps: solver.eps,
            outcome: &tr.outcome,
            steps: tr.steps,
            rejections: tr.rejections,
            max_l2_growth: tr.max_l2_growth,
            records: tr.records.len(),
        },
    }))
}

/// Writes every artifact of one trajectory into `dir`.
pub fn write_run(dir: &Path, cfg: &ExperimentConfig, solver: &SolverConfig, tr: &Trajectory) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("ledger.csv"), ledger_text(&tr.records))?;
    let meta = meta_json(cfg, solver, tr)?;
    fs::write(dir.join("meta.json"), serde_json::to_string_pretty(&meta)? + "\n")?;
    for (i, (t, f)) in tr.snapshots.iter().enumerate() {
        fs::write(dir.join(format!("snapshot_{i:03}.csv")), snapshot_text(*t, solver.eps, f))?;
    }
    fs::write(dir.join("plot.gp"), plot_script())?;
    Ok(())
}
