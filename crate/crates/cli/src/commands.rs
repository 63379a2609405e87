//! The four subcommands: preference analysis, the design SDP, the ex-post
//! sweep, and figure-data emission.

use std::fs;
use std::path::Path;

use lqg_infodesign_core::config::{load_config, LoadedConfig};
use lqg_infodesign_core::game::StatePrior;
use lqg_infodesign_core::montecarlo::{
    role_tables, run_expost, Anchor, SimulationConfig,
};
use lqg_infodesign_core::preference::{
    fig2_csv, fig2_data, preference_csv, preference_report, star_check_csv, symmetric_star_beta,
};
use lqg_infodesign_core::sdp::{
    assemble_problem, solution_csv, verify_full_disclosure_optimality, FMode, SolverOptions,
};
use lqg_infodesign_core::CoreError;

use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use crate::plot::{line_chart, sim_table_series, Series};

fn read_config(path: &Path) -> CliResult<LoadedConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    Ok(load_config(&text)?)
}

fn ensure_out_dir(out: &Path) -> CliResult<()> {
    fs::create_dir_all(out)
        .map_err(|e| CliError::Io(format!("cannot create output directory {}: {e}", out.display())))
}

/// Star instances whose closed-form denominator vanishes are rejected up
/// front with a message naming the denominator.
fn guard_star_denominator(cfg: &LoadedConfig) -> CliResult<()> {
    if let Some(beta) = symmetric_star_beta(&cfg.spec) {
        let n = cfg.spec.n();
        let denom = (n as f64 - 1.0) * beta * beta - 1.0;
        if denom.abs() < 1e-9 {
            return Err(CliError::Numerical(
                CoreError::SingularStarDenominator { n, beta }.to_string(),
            ));
        }
    }
    Ok(())
}

pub fn cmd_analyze(config_path: &Path, out: &Path) -> CliResult<()> {
    let cfg = read_config(config_path)?;
    ensure_out_dir(out)?;
    guard_star_denominator(&cfg)?;

    let report = preference_report(&cfg.spec)?;
    let beta = cfg.beta.or_else(|| symmetric_star_beta(&cfg.spec));
    let mut manifest = RunManifest::new("analyze", &cfg.canonical_json, 0);

    fs::write(
        out.join("preference.csv"),
        preference_csv(&report, cfg.spec.n(), beta),
    )?;
    manifest.record("preference.csv");

    if let Some(star_csv) = star_check_csv(&cfg.spec, &report) {
        fs::write(out.join("star_check.csv"), star_csv)?;
        manifest.record("star_check.csv");
    }

    manifest.write(out)?;
    Ok(())
}

pub fn cmd_sdp(
    config_path: &Path,
    out: &Path,
    mode: FMode,
    tol: Option<f64>,
    max_iter: usize,
) -> CliResult<()> {
    let cfg = read_config(config_path)?;
    ensure_out_dir(out)?;

    let mut opts = SolverOptions {
        max_iter,
        ..SolverOptions::default()
    };
    if let Some(t) = tol {
        if !t.is_finite() || t <= 0.0 {
            return Err(CliError::Config(format!(
                "--tol must be strictly positive, got {t}"
            )));
        }
        opts.feas_tol = t;
        opts.psd_tol = t / 10.0;
    }

    let problem = assemble_problem(&cfg.spec, mode)?;
    let report = verify_full_disclosure_optimality(&cfg.spec, mode, opts)?;

    let mut manifest = RunManifest::new("sdp", &cfg.canonical_json, 0);
    fs::write(out.join("sdp_problem.json"), problem.to_json())?;
    manifest.record("sdp_problem.json");
    fs::write(out.join("sdp_solution.csv"), solution_csv(&report))?;
    manifest.record("sdp_solution.csv");
    manifest.write(out)?;

    println!(
        "sdp: objective {:.9e}, full-disclosure objective {:.9e}, gap {:.3e}, residual {:.3e}, {} iterations",
        report.solution.objective,
        report.full_objective,
        report.gap,
        report.solution.max_equality_residual,
        report.solution.iterations
    );
    if !report.solution.converged {
        return Err(CliError::NonConvergence(format!(
            "solver did not converge within {} iterations (residual {:.3e}); diagnostics written",
            report.solution.iterations, report.solution.max_equality_residual
        )));
    }
    Ok(())
}

pub fn cmd_simulate(
    config_path: &Path,
    out: &Path,
    seed_flag: Option<u64>,
    anchor_flag: Option<Anchor>,
) -> CliResult<()> {
    let cfg = read_config(config_path)?;
    ensure_out_dir(out)?;

    // Seed precedence: flag > LQG_SEED > config.
    let seed = match seed_flag {
        Some(s) => s,
        None => match std::env::var("LQG_SEED") {
            Ok(v) => v.parse::<u64>().map_err(|_| {
                CliError::Config(format!("LQG_SEED must be an unsigned integer, got \"{v}\""))
            })?,
            Err(_) => cfg.simulation.seed,
        },
    };
    let anchor = anchor_flag.unwrap_or(cfg.simulation.anchor);

    let sim = SimulationConfig {
        spec: cfg.spec.clone(),
        beta_grid: cfg.simulation.beta_grid.clone(),
        mu_draw_count: cfg.simulation.mu_draws,
        gamma_draw_count: cfg.simulation.gamma_draws,
        seed,
        anchor,
    };
    let run = run_expost(&sim)?;
    let mu0 = match cfg.spec.prior() {
        StatePrior::CommonHierarchical { mu0, .. } => *mu0,
        StatePrior::GeneralGaussian { .. } => unreachable!("validated by run_expost"),
    };
    let (central, peripheral) = role_tables(&run, mu0);

    let mut manifest = RunManifest::new("simulate", &cfg.canonical_json, seed);
    manifest.anchor = Some(anchor.as_str());
    fs::write(out.join("expost_central.csv"), central)?;
    manifest.record("expost_central.csv");
    fs::write(out.join("expost_peripheral.csv"), peripheral)?;
    manifest.record("expost_peripheral.csv");
    manifest.write(out)?;

    match anchor {
        Anchor::HyperPriorMu0 => println!(
            "simulate: seed {seed}, anchor mu0 — no-disclosure actions use the hyper-prior mean; \
             note the realized-mean form averages to sigma^2 H_ii x_i^2 >= 0 per cell and cannot \
             produce negative hub curves, so the two anchors differ qualitatively"
        ),
        Anchor::RealizedMu => println!(
            "simulate: seed {seed}, anchor realized — no-disclosure actions use the realized \
             prior mean; every cell mean estimates sigma^2 H_ii x_i^2 >= 0"
        ),
    }
    Ok(())
}

pub fn cmd_figures(out: &Path, no_plots: bool) -> CliResult<()> {
    ensure_out_dir(out)?;
    let rows = fig2_data(3, 20)?;
    let csv = fig2_csv(&rows);
    let mut manifest = RunManifest::new("figures", "", 0);
    fs::write(out.join("fig2.csv"), &csv)?;
    manifest.record("fig2.csv");

    if !no_plots {
        let series = vec![
            Series {
                name: "lower bound".into(),
                points: rows.iter().map(|r| (r.n as f64, r.lower)).collect(),
                color: "#1f77b4".into(),
                dashed: false,
            },
            Series {
                name: "upper bound".into(),
                points: rows.iter().map(|r| (r.n as f64, r.upper)).collect(),
                color: "#d62728".into(),
                dashed: false,
            },
            Series {
                name: "1/(n-1)".into(),
                points: rows.iter().map(|r| (r.n as f64, r.diag_dominance)).collect(),
                color: "#2ca02c".into(),
                dashed: true,
            },
        ];
        fs::write(
            out.join("fig2.svg"),
            line_chart(
                "Spoke-advantage interval vs diagonal dominance",
                "number of agents n",
                "coupling beta",
                &series,
            ),
        )?;
        manifest.record("fig2.svg");

        // Render any simulation tables already present in the directory.
        for (file, title, svg_name) in [
            (
                "expost_central.csv",
                "Ex-post hub preference",
                "expost_central.svg",
            ),
            (
                "expost_peripheral.csv",
                "Ex-post spoke preference",
                "expost_peripheral.svg",
            ),
        ] {
            let path = out.join(file);
            if let Ok(text) = fs::read_to_string(&path) {
                let series = sim_table_series(&text);
                if !series.is_empty() {
                    fs::write(
                        out.join(svg_name),
                        line_chart(title, "coupling beta", "mean delta u", &series),
                    )?;
                    manifest.record(svg_name);
                }
            }
        }
    }

    manifest.write(out)?;
    Ok(())
}
