use aag_cli::commands::{self, Outcome, Overrides, Trials};
use aag_cli::JobSpec;
use aag_core::GroupSpec;
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Covering witnesses for asymptotic approximate groups.
#[derive(Parser)]
#[command(name = "aag", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct JobArgs {
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    h: Option<u64>,
    #[arg(long)]
    h_max: Option<u64>,
}

#[derive(Args)]
struct Out {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Construct witnesses for every h in the job's range.
    Witness {
        job: PathBuf,
        #[command(flatten)]
        params: JobArgs,
        #[command(flatten)]
        out: Out,
    },
    /// Construct and check witnesses. Without a job file, runs random finite sets.
    Verify {
        job: Option<PathBuf>,
        #[command(flatten)]
        params: JobArgs,
        /// Coefficient cap for the window check.
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long)]
        exact_kappa_limit: Option<usize>,
        /// Seed for random trials (only without a job file).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Free rank of the group for random trials.
        #[arg(long, default_value_t = 1)]
        free_rank: usize,
        /// Torsion orders for random trials, comma separated.
        #[arg(long, value_delimiter = ',')]
        torsion: Vec<i64>,
        #[command(flatten)]
        out: Out,
    },
    /// Certify the rational cover of the unit simplex.
    CoverSimplex {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Integer translates covering the lattice points of Δ_k(rh).
    LatticeCover {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        h: u64,
        /// Check the cover by enumeration.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Minimal number of translates of hA covering rhA.
    Kappa {
        job: PathBuf,
        #[command(flatten)]
        params: JobArgs,
        #[arg(long)]
        exact_kappa_limit: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Growth table |hA| for h up to --h-max and the ratio test.
    Growth {
        job: PathBuf,
        #[arg(long)]
        r: Option<u64>,
        /// Table length H.
        #[arg(long)]
        h_max: Option<u64>,
        /// Ratio constant L.
        #[arg(long)]
        l: Option<u64>,
        #[arg(long)]
        h0: Option<u64>,
        #[command(flatten)]
        out: Out,
    },
    /// Split bounded linear sets into unbounded ones.
    Decompose {
        job: PathBuf,
        #[command(flatten)]
        out: Out,
    },
}

fn load(path: &Path, o: Overrides) -> Result<JobSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let job: JobSpec = serde_json::from_str(&text).with_context(|| format!("malformed job in {}", path.display()))?;
    o.apply(job)
        .with_context(|| format!("invalid job in {}", path.display()))
}

fn overrides(p: &JobArgs) -> Overrides {
    Overrides {
        r: p.r,
        h: p.h,
        h_max: p.h_max,
        ..Overrides::default()
    }
}

fn emit(outcome: &Outcome, out: &Out) -> Result<()> {
    let text = serde_json::to_string_pretty(&outcome.document)? + "\n";
    match &out.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    let (outcome, out) = match cli.command {
        Command::Witness { job, params, out } => (commands::witness(&load(&job, overrides(&params))?)?, out),
        Command::Verify {
            job,
            params,
            cap,
            exact_kappa_limit,
            seed,
            trials,
            k,
            free_rank,
            torsion,
            out,
        } => match job {
            Some(path) => {
                let o = Overrides {
                    cap,
                    exact_kappa_limit,
                    ..overrides(&params)
                };
                (commands::verify(&load(&path, o)?)?, out)
            }
            None => {
                let Some(seed) = seed else {
                    bail!("verify needs a job file or --seed")
                };
                let h = params.h.unwrap_or(1);
                let t = Trials {
                    seed,
                    trials,
                    k,
                    r: params.r.unwrap_or(2),
                    h,
                    h_max: params.h_max.unwrap_or(h),
                    group: GroupSpec::new(free_rank, torsion)?,
                };
                (commands::random_trials(&t)?, out)
            }
        },
        Command::CoverSimplex { k, r, out } => (commands::cover_simplex(k, r)?, out),
        Command::LatticeCover { k, r, h, verify, out } => (commands::lattice_cover_cmd(k, r, h, verify)?, out),
        Command::Kappa {
            job,
            params,
            exact_kappa_limit,
            out,
        } => {
            let o = Overrides {
                exact_kappa_limit,
                ..overrides(&params)
            };
            (commands::kappa(&load(&job, o)?)?, out)
        }
        Command::Growth {
            job,
            r,
            h_max,
            l,
            h0,
            out,
        } => {
            let o = Overrides {
                r,
                ..Overrides::default()
            };
            (commands::growth(&load(&job, o)?, h_max, l, h0)?, out)
        }
        Command::Decompose { job, out } => (commands::decompose(&load(&job, Overrides::default())?)?, out),
    };
    emit(&outcome, &out)?;
    Ok(outcome.ok)
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("aag: one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("aag: {e:#}");
            ExitCode::from(2)
        }
    }
}
