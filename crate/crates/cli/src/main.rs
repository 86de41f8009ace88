use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ferrohyst::scenario::{
    run_beam, run_convergence, run_scenario, run_verify, write_table, Check, ConvergenceOptions, RunConfig, Target,
    VerifyOptions, CONVERGENCE_HEADER,
};

#[derive(Parser)]
#[command(
    name = "ferrohyst",
    version,
    about = "Preisach ferroelectric material model: scenarios, property suites, beam solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in scenario (bipolar-linear, stress-linear, bipolar-quartic, stress-quartic, beam-demo).
    Run {
        scenario: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a property suite (dissipation, lipschitz, brokate, madelung, rate-independence,
    /// clausius-duhem, convergence).
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        /// lipschitz: number of random pairs per bound
        #[arg(long)]
        pairs: Option<usize>,
        /// lipschitz: sup of the coefficient b
        #[arg(long, default_value_t = 1.0)]
        bbar: f64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Refinement study for the material point (r-grid) or the beam (h and dt).
    Convergence {
        target: String,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long)]
        base: Option<usize>,
        #[arg(long, default_value_t = 2)]
        ratio: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Simulate the piezoelectric beam described by the [beam] section of a config.
    SimulateBeam {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// `--out-dir` wins, then `FERROHYST_OUT`, then the config's `out_dir`, then `./out`.
fn resolve_out(flag: Option<PathBuf>, cfg: Option<&RunConfig>) -> PathBuf {
    flag.or_else(|| std::env::var_os("FERROHYST_OUT").filter(|v| !v.is_empty()).map(PathBuf::from))
        .or_else(|| cfg.and_then(|c| c.out_dir.clone()))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn load_config(path: Option<&Path>, scenario: Option<&str>) -> Result<RunConfig> {
    let cfg = match path {
        Some(p) => RunConfig::load(p, scenario)?,
        None => RunConfig::builtin(scenario.unwrap_or("bipolar-linear"))?,
    };
    if let Some(name) = scenario {
        if cfg.scenario != name {
            bail!("scenario '{name}' conflicts with '{}' in the config file", cfg.scenario);
        }
    }
    Ok(cfg)
}

fn report(files: &[PathBuf], checks: &[Check]) -> ExitCode {
    for f in files {
        println!("wrote {}", f.display());
    }
    for c in checks {
        println!("{c}");
    }
    if checks.iter().all(Check::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run { scenario, config, out_dir, seed } => {
            if scenario.is_none() && config.is_none() {
                bail!("give a scenario name or --config FILE");
            }
            let mut cfg = load_config(config.as_deref(), scenario.as_deref())?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let out = resolve_out(out_dir, Some(&cfg));
            let outcome = run_scenario(&cfg, &out).with_context(|| format!("scenario {}", cfg.scenario))?;
            Ok(report(&outcome.files, &outcome.checks))
        }
        Command::SimulateBeam { config, out_dir, seed } => {
            let mut cfg = match config.as_deref() {
                Some(p) => RunConfig::load(p, Some("beam-demo"))?,
                None => RunConfig::builtin("beam-demo")?,
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let out = resolve_out(out_dir, Some(&cfg));
            let outcome = run_beam(&cfg, &out).context("beam simulation")?;
            Ok(report(&outcome.files, &outcome.checks))
        }
        Command::Verify { suite, seed, cases, pairs, bbar, out_dir } => {
            let opts = VerifyOptions { seed, cases, pairs, bbar };
            let rep = run_verify(&suite, &opts)?;
            let path = resolve_out(out_dir, None).join(format!("verify_{suite}.csv"));
            write_table(&path, &rep.header, rep.rows.clone())?;
            Ok(report(&[path], &rep.checks))
        }
        Command::Convergence { target, levels, base, ratio, out_dir } => {
            let t: Target = target.parse()?;
            let rep = run_convergence(t, &ConvergenceOptions { levels, base, ratio })?;
            let path = resolve_out(out_dir, None).join(format!("convergence_{target}.csv"));
            write_table(&path, &CONVERGENCE_HEADER, rep.rows.clone())?;
            Ok(report(&[path], &rep.checks))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
