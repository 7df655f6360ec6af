//! `ntn`: spherical stochastic-geometry modeling of non-terrestrial
//! networks — constellation sampling, topology statistics, Monte Carlo
//! coverage and localizability, and the two built-in case studies.
//!
//! Every run resolves its parameters into a canonical key-value
//! configuration, executes deterministically from an explicit seed, and
//! writes a manifest with per-output checksums. Re-running with a manifest
//! as `--config` reproduces the outputs byte-for-byte at any thread count.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric
//! non-convergence, 4 I/O error.

mod commands;
mod config;
mod error;
mod manifest;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::study::Which;
use error::Result;

#[derive(Parser)]
#[command(name = "ntn", version, about = "Spherical stochastic-geometry NTN modeling toolkit")]
struct Cli {
    /// Worker threads (0 = all cores). NTN_THREADS supplies the default;
    /// outputs are identical for every thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Key-value config file (or a previous run's manifest JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one config key: --set key=value (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one constellation realization and write it as CSV.
    Sample {
        #[command(flatten)]
        common: CommonArgs,
        /// Point-process model (hom-bpp, hom-ppp, nonhom-bpp, cpp, dsbpp, ogm, plp).
        #[arg(long)]
        model: Option<String>,
        /// Point count for the BPP models.
        #[arg(long)]
        count: Option<u32>,
        /// Orbit count (dsbpp/ogm).
        #[arg(long)]
        orbits: Option<u32>,
        /// Satellites per orbit (dsbpp/ogm).
        #[arg(long)]
        sats_per_orbit: Option<u32>,
        /// Shell altitude above the surface, km.
        #[arg(long)]
        altitude_km: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV path.
        #[arg(short, long, default_value = "points.csv")]
        output: PathBuf,
    },
    /// Closed-form topology statistics over a central-angle grid.
    Topology {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of NTPs (homogeneous BPP closed forms).
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        altitude_km: Option<f64>,
        /// K for the K-availability column.
        #[arg(long)]
        k: Option<u32>,
        /// Add an empirical contact-CDF column from seeded samples.
        #[arg(long)]
        empirical: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long, default_value = "topology.csv")]
        output: PathBuf,
    },
    /// Monte Carlo coverage probability.
    Coverage {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        count: Option<u32>,
        #[arg(long)]
        altitude_km: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long, default_value = "coverage.csv")]
        output: PathBuf,
    },
    /// Monte Carlo K-localizability (single spec or a DSBPP count sweep).
    Localize {
        #[command(flatten)]
        common: CommonArgs,
        /// Satellite counts to sweep, e.g. `24..31` or `24,28,31`
        /// (GPS-style DSBPP with `sats-per-orbit` per orbit).
        #[arg(long)]
        sat_counts: Option<String>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        altitude_km: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long, default_value = "localizability.csv")]
        output: PathBuf,
    },
    /// Reproduce a built-in case study (planar | localizability).
    Study {
        /// Which study to run.
        #[arg(value_parser = ["planar", "localizability"])]
        which: String,
        #[command(flatten)]
        common: CommonArgs,
        /// Monte Carlo trials per grid point (localizability study).
        #[arg(long)]
        trials: Option<u64>,
        /// Couplings per grid point (planar study).
        #[arg(long)]
        couplings: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for the curve CSVs and the manifest.
        #[arg(short, long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn push_flag<T: ToString>(sets: &mut Vec<String>, key: &str, value: &Option<T>) {
    if let Some(v) = value {
        sets.push(format!("{key}={}", v.to_string()));
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sample { common, model, count, orbits, sats_per_orbit, altitude_km, seed, output } => {
            let mut sets = common.sets;
            push_flag(&mut sets, "model", &model);
            push_flag(&mut sets, "count", &count);
            push_flag(&mut sets, "orbits", &orbits);
            push_flag(&mut sets, "sats-per-orbit", &sats_per_orbit);
            push_flag(&mut sets, "altitude", &altitude_km.map(|v| format!("{v} km")));
            push_flag(&mut sets, "seed", &seed);
            commands::sample::run(&commands::sample::Args { config: common.config, sets, output })
        }
        Command::Topology { common, n, altitude_km, k, empirical, seed, output } => {
            let mut sets = common.sets;
            push_flag(&mut sets, "n", &n);
            push_flag(&mut sets, "altitude", &altitude_km.map(|v| format!("{v} km")));
            push_flag(&mut sets, "k", &k);
            if empirical {
                sets.push("empirical=true".into());
            }
            push_flag(&mut sets, "seed", &seed);
            commands::topology::run(&commands::topology::Args {
                config: common.config,
                sets,
                output,
            })
        }
        Command::Coverage { common, model, count, altitude_km, trials, seed, output } => {
            let mut sets = common.sets;
            push_flag(&mut sets, "model", &model);
            push_flag(&mut sets, "count", &count);
            push_flag(&mut sets, "altitude", &altitude_km.map(|v| format!("{v} km")));
            push_flag(&mut sets, "trials", &trials);
            push_flag(&mut sets, "seed", &seed);
            commands::coverage::run(&commands::coverage::Args {
                config: common.config,
                sets,
                output,
            })
        }
        Command::Localize { common, sat_counts, k, altitude_km, trials, seed, output } => {
            let mut sets = common.sets;
            push_flag(&mut sets, "sat-counts", &sat_counts);
            push_flag(&mut sets, "k", &k);
            push_flag(&mut sets, "altitude", &altitude_km.map(|v| format!("{v} km")));
            push_flag(&mut sets, "trials", &trials);
            push_flag(&mut sets, "seed", &seed);
            commands::localize::run(&commands::localize::Args {
                config: common.config,
                sets,
                output,
            })
        }
        Command::Study { which, common, trials, couplings, seed, out_dir } => {
            let mut sets = common.sets;
            push_flag(&mut sets, "trials", &trials);
            push_flag(&mut sets, "couplings", &couplings);
            push_flag(&mut sets, "seed", &seed);
            let which = match which.as_str() {
                "planar" => Which::Planar,
                _ => Which::Localizability,
            };
            commands::study::run(&commands::study::Args {
                which,
                config: common.config,
                sets,
                out_dir,
            })
        }
    }
}

fn main() {
    let cli = Cli::parse();

    // --threads wins over NTN_THREADS; 0 or unset means all cores.
    let threads = cli.threads.or_else(|| {
        std::env::var("NTN_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads.filter(|&n| n > 0) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{{\"error\":\"{e}\",\"kind\":\"config\"}}");
            std::process::exit(2);
        }
    }

    if let Err(e) = dispatch(cli) {
        let msg = serde_json::json!({ "error": e.to_string(), "kind": e.kind() });
        eprintln!("{msg}");
        std::process::exit(e.exit_code());
    }
}
