mod cmd;
mod config;
mod error;
mod output;

use std::collections::HashSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;

use crate::config::{load, Params, RunConfig, Subcommand};
use crate::error::CliError;
use crate::output::{write_run, Artifacts};

/// Runs multiple-scale and perturbation computations from JSON configs.
#[derive(Debug, Parser)]
#[command(name = "asymptotica", version)]
struct Cli {
    #[arg(value_enum)]
    subcommand: Subcommand,
    /// Run configuration; repeat for several independent runs.
    #[arg(long, required = true, num_args = 1..)]
    config: Vec<PathBuf>,
    /// Worker threads shared by all runs.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

type Runner<P> = fn(&P, u64) -> Result<Artifacts, CliError>;

fn execute<P: Params>(cli: &Cli, run: Runner<P>) -> u8 {
    let mut configs: Vec<RunConfig<P>> = Vec::new();
    let mut names = HashSet::new();
    for path in &cli.config {
        match load::<P>(path, cli.subcommand) {
            Ok(cfg) => {
                let name = cfg.name.clone().unwrap_or_default();
                if !names.insert(name.clone()) {
                    eprintln!("error: two configs write outputs named `{name}`");
                    return 2;
                }
                configs.push(cfg);
            }
            Err(e) => {
                eprintln!("error: {e}");
                return e.exit_code() as u8;
            }
        }
    }

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 3;
        }
    };
    let results: Vec<_> = pool.install(|| {
        configs
            .par_iter()
            .map(|cfg| run(&cfg.params, cfg.seed).and_then(|art| write_run(&cli.out_dir, cfg, &art)))
            .collect()
    });

    let mut code = 0;
    for (cfg, res) in configs.iter().zip(results) {
        let name = cfg.name.as_deref().unwrap_or("run");
        match res {
            Ok((passed, outcomes)) => {
                let ok = outcomes.iter().filter(|o| o.passed).count();
                println!("{name}: {} ({ok}/{} checks)", if passed { "ok" } else { "FAILED" }, outcomes.len());
                for o in outcomes.iter().filter(|o| !o.passed) {
                    let value = o.value.map_or("missing".to_string(), output::fmt_f64);
                    eprintln!("  check `{}` failed: value {value}", o.check.metric);
                }
                if !passed && code == 0 {
                    code = 1;
                }
            }
            Err(e) => {
                eprintln!("{name}: error: {e}");
                code = 3;
            }
        }
    }
    code
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.subcommand {
        Subcommand::Pi => execute(&cli, cmd::pi::run),
        Subcommand::Roots => execute(&cli, cmd::roots::run),
        Subcommand::Euler => execute(&cli, cmd::euler::run),
        Subcommand::Ode => execute(&cli, cmd::ode::run),
        Subcommand::Blayer => execute(&cli, cmd::blayer::run),
        Subcommand::Pde => execute(&cli, cmd::pde::run),
    };
    ExitCode::from(code)
}
