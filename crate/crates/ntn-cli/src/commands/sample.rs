//! `ntn sample`: draw one constellation realization and write it as CSV.

use std::path::Path;

use ntn_core::process;

use crate::commands::common::{apply_sets, resolve_model, resolve_shell};
use crate::config::Config;
use crate::error::Result;
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
    cfg.set_default("model", "hom-bpp");
    cfg.set_default("seed", "0");
    let seed = cfg.req_u64("seed")?;
    let (radius, _) = resolve_shell(&mut cfg)?;
    let spec = resolve_model(&cfg)?;

    let sample = process::sample(&spec, radius, seed);
    let mut csv = Csv::new(&["x_km", "y_km", "z_km", "polar_rad", "azimuth_rad"]);
    for p in &sample.points {
        let [x, y, z] = p.to_cartesian();
        csv.row(&[fmt_f64(x), fmt_f64(y), fmt_f64(z), fmt_f64(p.polar_rad), fmt_f64(p.azimuth_rad)]);
    }
    csv.write(&args.output)?;

    let mut manifest = RunManifest::new(&["sample"], &cfg, seed);
    manifest.add_output(&args.output)?;
    manifest.duration_seconds = started.elapsed().as_secs_f64();
    manifest.write(&manifest_path(&args.output))?;
    println!("wrote {} points to {}", sample.points.len(), args.output.display());
    Ok(())
}

pub fn manifest_path(output: &Path) -> std::path::PathBuf {
    let mut p = output.as_os_str().to_owned();
    p.push(".manifest.json");
    std::path::PathBuf::from(p)
}
