//! `ntn coverage`: seeded Monte Carlo coverage probability for one
//! constellation spec, link budget, and fading model.

use ntn_core::mc::{self, MetricConfig};

use crate::commands::common::{
    apply_sets, parallel_successes, resolve_association, resolve_fading, resolve_interference,
    resolve_link, resolve_model, resolve_shell, resolve_subset, resolve_visibility,
};
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

pub const TRIAL_CHUNK: u64 = 4096;

pub fn run(args: &Args) -> Result<()> {
    let started = std::time::Instant::now();
    let mut cfg = match &args.config {
        Some(p) => Config::load(p)?,
        None => Config::new(),
    };
    apply_sets(&mut cfg, &args.sets)?;
    cfg.set_default("model", "hom-bpp");
    cfg.set_default("trials", "100000");
    cfg.set_default("seed", "0");
    cfg.set_default("association", "nearest");
    cfg.set_default("interference", "none");

    let (radius, r_earth) = resolve_shell(&mut cfg)?;
    let spec = resolve_model(&cfg)?;
    let link = resolve_link(&mut cfg)?;
    let fading = resolve_fading(&mut cfg)?;
    let trials = cfg.req_u64("trials")?;
    let seed = cfg.req_u64("seed")?;
    let mcfg = MetricConfig {
        trials,
        seed,
        association: resolve_association(&cfg)?,
        visibility: resolve_visibility(&cfg)?,
        k: 1,
        interference: resolve_interference(&cfg)?,
        subset: resolve_subset(&cfg)?,
    };
    if trials == 0 {
        return Err(CliError::Config("at least one trial required".into()));
    }
    if mcfg.association == mc::Association::Random && spec.expected_count() == 0.0 {
        return Err(CliError::Config(
            "random association with a process that never has points".into(),
        ));
    }

    let successes = parallel_successes(trials, TRIAL_CHUNK, |range| {
        mc::coverage_success_count(&spec, radius, r_earth, &link, &fading, &mcfg, range)
            .map_err(CliError::from)
    })?;
    let p = successes as f64 / trials as f64;
    let se = (p * (1.0 - p) / trials as f64).sqrt();

    let mut csv = Csv::new(&["metric", "estimate", "std_error", "trials"]);
    csv.row(&["coverage".into(), fmt_f64(p), fmt_f64(se), trials.to_string()]);
    csv.write(&args.output)?;

    let mut manifest = RunManifest::new(&["coverage"], &cfg, seed);
    manifest.add_output(&args.output)?;
    manifest.duration_seconds = started.elapsed().as_secs_f64();
    manifest.write(&manifest_path(&args.output))?;
    println!("coverage = {p:.6} ± {se:.6} ({trials} trials)");
    Ok(())
}
