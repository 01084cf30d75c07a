//! `pcp`: generate, solve, benchmark and inspect low-rank + sparse
//! decomposition problems.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use pcp_cli::check::{check_solution, rerun_with_oracles};
use pcp_cli::configs::{config_to_file_json, load_config_file, SolverConfig, SolverKind};
use pcp_cli::experiment::{run_experiment, BenchSpec};
use pcp_cli::pgm::export_pgm;
use pcp_cli::records::{records_to_csv, RunRecord};
use pcp_cli::tables::render_summary_table;
use pcp_core::io::{read_lrsd, write_lrsd};
use pcp_core::problems::{load_instance, save_instance};

#[derive(Parser)]
#[command(
    name = "pcp",
    about = "Low-rank plus sparse decomposition: instance generation, four first-order solvers, benchmark tables and frame export",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance into a directory.
    Generate {
        /// Instance family: noiseless with missing data, or noisy SPCP.
        #[arg(long, value_parser = ["rpcp", "spcp"])]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.05)]
        c_r: f64,
        #[arg(long, default_value_t = 0.05)]
        c_p: f64,
        /// Observed fraction (rpcp only).
        #[arg(long, default_value_t = 1.0)]
        sample_ratio: f64,
        /// Signal-to-noise ratio in dB (spcp only); omit for noiseless.
        #[arg(long)]
        snr_db: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve an instance directory and write the decomposition.
    Solve {
        #[arg(long, value_enum)]
        solver: SolverKind,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// JSON config file; solver defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Print the effective config instead of solving.
        #[arg(long)]
        dump_config: bool,
        /// Override: continuation ratio eta.
        #[arg(long)]
        eta: Option<f64>,
        /// Override: relative infeasibility tolerance (eadm/iadm/alm).
        #[arg(long)]
        tol: Option<f64>,
        /// Override: iteration budget.
        #[arg(long)]
        max_iters: Option<usize>,
        /// Override: initial-penalty factor.
        #[arg(long)]
        rho0_factor: Option<f64>,
        /// Override: continuation cutoff K-bar (pspg).
        #[arg(long)]
        k_bar: Option<usize>,
        /// Override: stopping multiplier on the noise level (pspg).
        #[arg(long)]
        stop_factor: Option<f64>,
    },
    /// Run a benchmark spec and emit CSV + aligned tables.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Verify a solved instance against its record; optionally re-run the
    /// solver with residual/KKT oracles.
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        rerun: bool,
    },
    /// Export a matrix column as an 8-bit PGM frame.
    Export {
        /// LRSD matrix file (for example a solved low-rank component).
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        frame_h: usize,
        #[arg(long)]
        frame_w: usize,
        #[arg(long, default_value_t = 0)]
        frame: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Generate {
            kind,
            n,
            c_r,
            c_p,
            sample_ratio,
            snr_db,
            seed,
            out,
        } => {
            let instance = match kind.as_str() {
                "rpcp" => pcp_core::gen_rpcp_missing(n, c_r, c_p, sample_ratio, seed)?,
                "spcp" => {
                    pcp_core::gen_spcp(n, c_r, c_p, snr_db.unwrap_or(f64::INFINITY), seed)?
                }
                other => bail!("unknown kind '{other}'"),
            };
            save_instance(&instance, &out)?;
            let id = instance
                .origin
                .as_ref()
                .map(|o| o.instance_id())
                .unwrap_or_default();
            println!("wrote instance {id} to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }

        Command::Solve {
            solver,
            instance,
            out,
            config,
            dump_config,
            eta,
            tol,
            max_iters,
            rho0_factor,
            k_bar,
            stop_factor,
        } => {
            let inst = load_instance(&instance)
                .with_context(|| format!("loading instance {}", instance.display()))?;
            let mut cfg = match config {
                Some(path) => load_config_file(&path, solver)?,
                None => SolverConfig::defaults_for(solver, &inst),
            };
            apply_overrides(&mut cfg, eta, tol, max_iters, rho0_factor, k_bar, stop_factor)?;
            if dump_config {
                println!("{}", config_to_file_json(&cfg)?);
                return Ok(ExitCode::SUCCESS);
            }

            let start = std::time::Instant::now();
            let result = cfg.run(&inst)?;
            let wall = start.elapsed().as_secs_f64();

            std::fs::create_dir_all(&out)?;
            write_lrsd(&out.join("low_rank.lrsd"), &result.low_rank)?;
            write_lrsd(&out.join("sparse.lrsd"), &result.sparse)?;
            let id = inst
                .origin
                .as_ref()
                .map(|o| o.instance_id())
                .unwrap_or_else(|| instance.display().to_string());
            let record = RunRecord::new(id, solver.name(), cfg.to_json(), &inst, &result, wall);
            std::fs::write(
                out.join("record.json"),
                serde_json::to_vec_pretty(&record)?,
            )?;
            println!(
                "{}: {} iterations, {} SVDs ({} lsv), objective {:.6e}, infeasibility {:.3e}{}{}",
                solver.name(),
                record.iterations,
                record.svd_count,
                record.lsv_count,
                record.objective,
                record.infeasibility,
                record
                    .rel_l
                    .map(|v| format!(", relL {v:.3e}"))
                    .unwrap_or_default(),
                record
                    .rel_s
                    .map(|v| format!(", relS {v:.3e}"))
                    .unwrap_or_default(),
            );
            if !record.converged {
                eprintln!("warning: iteration budget reached before the tolerance");
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Bench { spec, out, threads } => {
            let text = std::fs::read_to_string(&spec)
                .with_context(|| format!("reading spec {}", spec.display()))?;
            let mut bench: BenchSpec = serde_json::from_str(&text)?;
            if threads.is_some() {
                bench.threads = threads;
            }
            let outcome = run_experiment(&bench)?;
            std::fs::create_dir_all(&out)?;
            std::fs::write(out.join("runs.csv"), records_to_csv(&outcome.records)?)?;
            let table = render_summary_table(&outcome.summaries);
            std::fs::write(out.join("summary.txt"), &table)?;
            print!("{table}");
            for e in &outcome.errors {
                eprintln!("failed run: {e}");
            }
            if outcome.any_violation() {
                eprintln!("acceptance bounds violated");
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Check {
            instance,
            solution,
            rerun,
        } => {
            let inst = load_instance(&instance)?;
            let report = check_solution(&inst, &solution)?;
            println!(
                "objective (recomputed): {:.6e}; observed-part infeasibility: {:.3e}",
                report.objective_recomputed, report.observed_infeasibility
            );
            for n in &report.notes {
                println!("ok: {n}");
            }
            for f in &report.failures {
                println!("FAIL: {f}");
            }
            if rerun {
                let record: RunRecord = serde_json::from_slice(&std::fs::read(
                    solution.join("record.json"),
                )?)?;
                for note in rerun_with_oracles(&inst, &record.solver, &record.config)? {
                    println!("oracle: {note}");
                }
            }
            if report.failures.is_empty() {
                println!("check passed");
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }

        Command::Export {
            matrix,
            frame_h,
            frame_w,
            frame,
            out,
        } => {
            let x = read_lrsd(&matrix)?;
            export_pgm(&x, &out, (frame_h, frame_w), frame)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn apply_overrides(
    cfg: &mut SolverConfig,
    eta: Option<f64>,
    tol: Option<f64>,
    max_iters: Option<usize>,
    rho0_factor: Option<f64>,
    k_bar: Option<usize>,
    stop_factor: Option<f64>,
) -> anyhow::Result<()> {
    match cfg {
        SolverConfig::Eadm(c) | SolverConfig::Iadm(c) => {
            if let Some(v) = eta {
                c.eta = v;
            }
            if let Some(v) = tol {
                c.rel_infeas_tol = v;
            }
            if let Some(v) = max_iters {
                c.max_outer_iters = v;
            }
            if let Some(v) = rho0_factor {
                c.rho0_factor = v;
            }
            if k_bar.is_some() || stop_factor.is_some() {
                bail!("--k-bar/--stop-factor apply to the pspg solver only");
            }
        }
        SolverConfig::Alm(c) => {
            if let Some(v) = eta {
                c.eta = v;
            }
            if let Some(v) = tol {
                c.rel_infeas_tol = v;
            }
            if let Some(v) = max_iters {
                c.max_iters = v;
            }
            if let Some(v) = rho0_factor {
                c.rho0_factor = v;
            }
            if k_bar.is_some() || stop_factor.is_some() {
                bail!("--k-bar/--stop-factor apply to the pspg solver only");
            }
        }
        SolverConfig::Pspg(c) => {
            if let Some(v) = eta {
                c.eta = v;
            }
            if let Some(v) = max_iters {
                c.max_iters = v;
            }
            if let Some(v) = rho0_factor {
                c.mu0_factor = v;
            }
            if let Some(v) = k_bar {
                c.k_bar = v;
            }
            if let Some(v) = stop_factor {
                c.stop_factor = v;
            }
            if tol.is_some() {
                bail!("--tol applies to the eadm/iadm/alm solvers; use --stop-factor for pspg");
            }
        }
    }
    Ok(())
}
