use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use nfsec_core::beamformer::{clusters, determine_plan, pairwise_link};
use nfsec_core::geometry::build_interference_sets;
use nfsec_core::secrecy::diagnose;
use nfsec_core::BeamSpec;
use nfsec_cli::experiment::ResultRow;
use nfsec_cli::scenario::build_scenario;
use nfsec_cli::{bench_runtime, emit_csv, emit_json, run_experiment, ExperimentConfig, HarnessError};

#[derive(Parser, Debug)]
#[command(name = "nfsec", version, about = "Near-field physical-layer security simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Replace the config's seed list with this single seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, env = "NFSEC_OUT_DIR", default_value = "results")]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an experiment sweep and write its rows.
    Run { config: PathBuf },
    /// Time the proposed pipeline against the full optimizer.
    Bench { config: PathBuf },
    /// Print the single-link secrecy diagnosis of every user.
    Diagnose { config: PathBuf },
    /// Print the interference sets, clusters and beamformer plan.
    Sets { config: PathBuf },
}

fn load(path: &Path, global: &Global) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::from_path(path)?;
    if let Some(seed) = global.seed {
        cfg.seeds = vec![seed];
    }
    Ok(cfg)
}

fn write_rows(rows: &[ResultRow], dir: &Path, stem: &str, format: Format) -> anyhow::Result<PathBuf> {
    let path = dir.join(format!("{stem}.{}", if format == Format::Csv { "csv" } else { "json" }));
    match format {
        Format::Csv => emit_csv(rows, &path)?,
        Format::Json => emit_json(rows, &path)?,
    }
    Ok(path)
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let g = &cli.global;
    if let Some(n) = g.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    match &cli.command {
        Command::Run { config } => {
            let cfg = load(config, g)?;
            std::fs::create_dir_all(&g.out)
                .map_err(|source| HarnessError::Io { path: g.out.clone(), source })?;
            let out = run_experiment(&cfg)?;
            let stem = cfg.experiment.name();
            println!("{}", write_rows(&out.rows, &g.out, stem, g.format)?.display());
            for panel in &out.panels {
                let rows: Vec<ResultRow> = out.rows.iter().filter(|r| r.scheme == panel.label).cloned().collect();
                let path = write_rows(&rows, &g.out, &format!("{stem}_{}", panel.label), g.format)?;
                println!("{} eve ({}, {}) {}", path.display(), panel.eve[0], panel.eve[1], panel.case_label.label());
            }
            println!("{:>12} {:>14} {:>12} {:>12} {:>6} {:>6}", "sweep", "scheme", "rate", "runtime_s", "opt", "fail");
            for s in &out.summary {
                println!(
                    "{:>12.6} {:>14} {:>12.6} {:>12.6} {:>6.2} {:>6}",
                    s.sweep, s.scheme, s.mean_rate_bps_hz, s.mean_runtime_s, s.mean_opt_count, s.failures
                );
            }
        }
        Command::Bench { config } => {
            let cfg = load(config, g)?;
            let rows = bench_runtime(&cfg)?;
            println!("{:>3} {:>4} {:>14} {:>14} {:>8} {:>5}", "K", "N", "conventional_s", "proposed_s", "ratio", "opt");
            for r in &rows {
                println!(
                    "{:>3} {:>4} {:>14.6} {:>14.6} {:>8.4} {:>5}",
                    r.num_users, r.num_antennas, r.conventional_s, r.proposed_s, r.ratio, r.proposed_opt_count
                );
            }
            std::fs::create_dir_all(&g.out)
                .map_err(|source| HarnessError::Io { path: g.out.clone(), source })?;
            let path = g.out.join("bench.json");
            std::fs::write(&path, serde_json::to_string_pretty(&rows)?)
                .map_err(|source| HarnessError::Io { path: path.clone(), source })?;
        }
        Command::Diagnose { config } => {
            let cfg = load(config, g)?;
            let s = build_scenario(&cfg, cfg.seeds[0])?;
            let report = (0..s.num_users())
                .map(|k| pairwise_link(&s, k, s.total_power).map(|l| diagnose(&l)))
                .collect::<Result<Vec<_>, _>>()?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Sets { config } => {
            let cfg = load(config, g)?;
            let s = build_scenario(&cfg, cfg.seeds[0])?;
            let spec = BeamSpec::new(s.phi_db)?;
            let sets = build_interference_sets(&s.geom, &spec, &s.positions(), s.distribution())?;
            let plan = determine_plan(&s, &sets)?;
            let report = serde_json::json!({ "sets": sets, "clusters": clusters(&sets), "plan": plan });
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let class = err
        .downcast_ref::<HarnessError>()
        .map(HarnessError::class)
        .or_else(|| err.downcast_ref::<nfsec_core::Error>().map(|_| "model"));
    match class {
        Some("config") => 2,
        Some("io") => 3,
        Some("model") => 4,
        Some("solver") => 5,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("nfsec: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
