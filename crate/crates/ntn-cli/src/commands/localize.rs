//! `ntn localize`: K-localizability by seeded Monte Carlo — either one
//! constellation spec, or a sweep over GPS-style DSBPP satellite counts.

use ntn_core::mc::{self, MetricConfig};
use ntn_core::process::{sample, sample_dsbpp_total};
use ntn_core::rng::derive_seed;

use crate::commands::common::{
    apply_sets, parallel_successes, resolve_fading, resolve_interference, resolve_link,
    resolve_model, resolve_shell, resolve_subset, resolve_visibility,
};
use crate::commands::coverage::TRIAL_CHUNK;
use crate::commands::sample::manifest_path;
use crate::config::Config;
use crate::error::{CliError, Result};
use crate::manifest::RunManifest;
use crate::output::{fmt_f64, Csv};

pub struct Args {
    pub config: Option<std::path::PathBuf>,
    pub sets: Vec<String>,
    pub output: std::path::PathBuf,
}

pub fn run(args: &Args) -> Result<()> {
    let started = std::time::Instant::now();
    let mut cfg = match &args.config {
        Some(p) => Config::load(p)?,
        None => Config::new(),
    };
    apply_sets(&mut cfg, &args.sets)?;
    cfg.set_default("trials", "100000");
    cfg.set_default("seed", "0");
    cfg.set_default("k", "4");
    cfg.set_default("interference", "none");
    cfg.set_default("subset", "detection-count");

    let (radius, r_earth) = resolve_shell(&mut cfg)?;
    let link = resolve_link(&mut cfg)?;
    let fading = resolve_fading(&mut cfg)?;
    let trials = cfg.req_u64("trials")?;
    if trials == 0 {
        return Err(CliError::Config("at least one trial required".into()));
    }
    let seed = cfg.req_u64("seed")?;
    let base = MetricConfig {
        trials,
        seed,
        association: mc::Association::Nearest,
        visibility: resolve_visibility(&cfg)?,
        k: cfg.req_u32("k")?,
        interference: resolve_interference(&cfg)?,
        subset: resolve_subset(&cfg)?,
    };

    let mut csv = Csv::new(&["n_sats", "estimate", "std_error", "trials"]);
    if let Some(counts) = cfg.get_u32_list("sat-counts")? {
        // GPS-style DSBPP sweep: per-orbit size fixed, remainder in one
        // deficient orbit; per-point seeds keyed by the count value.
        cfg.set_default("sats-per-orbit", "4");
        let per_orbit = cfg.req_u32("sats-per-orbit")?;
        if counts.is_empty() {
            return Err(CliError::Config("empty `sat-counts`".into()));
        }
        for &n in &counts {
            let mcfg = MetricConfig { seed: derive_seed(seed, n as u64), ..base.clone() };
            let successes = parallel_successes(trials, TRIAL_CHUNK, |range| {
                mc::k_localizability_success_count(
                    |s| sample_dsbpp_total(n, per_orbit, radius, s),
                    r_earth,
                    &link,
                    &fading,
                    &mcfg,
                    range,
                )
                .map_err(CliError::from)
            })?;
            let p = successes as f64 / trials as f64;
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            csv.row(&[n.to_string(), fmt_f64(p), fmt_f64(se), trials.to_string()]);
        }
    } else {
        let spec = resolve_model(&cfg)?;
        let successes = parallel_successes(trials, TRIAL_CHUNK, |range| {
            mc::k_localizability_success_count(
                |s| sample(&spec, radius, s),
                r_earth,
                &link,
                &fading,
                &base,
                range,
            )
            .map_err(CliError::from)
        })?;
        let p = successes as f64 / trials as f64;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        csv.row(&[
            fmt_f64(spec.expected_count()),
            fmt_f64(p),
            fmt_f64(se),
            trials.to_string(),
        ]);
    }
    csv.write(&args.output)?;

    let mut manifest = RunManifest::new(&["localize"], &cfg, seed);
    manifest.add_output(&args.output)?;
    manifest.duration_seconds = started.elapsed().as_secs_f64();
    manifest.write(&manifest_path(&args.output))?;
    println!("wrote {}", args.output.display());
    Ok(())
}
