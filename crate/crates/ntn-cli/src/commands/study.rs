//! `ntn study planar | localizability`: the two turnkey case studies,
//! parallelized over independent grid points and emitting curve CSVs plus a
//! run manifest.

use std::path::{Path, PathBuf};

use ntn_core::fading::SRParams;
use ntn_core::study::{
    localizability_study_point, planar_study_point, LocalizabilityStudyConfig, PlanarStudyConfig,
    PlaneHeightRule,
};
use rayon::prelude::*;

use crate::commands::common::{apply_sets, resolve_link, resolve_subset};
use crate::config::Config;
use crate::error::{CliError, Result};
use crate::manifest::RunManifest;
use crate::output::{fmt_f64, Csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Planar,
    Localizability,
}

pub struct Args {
    pub which: Which,
    pub config: Option<PathBuf>,
    pub sets: Vec<String>,
    pub out_dir: PathBuf,
}

pub fn run(args: &Args) -> Result<()> {
    let started = std::time::Instant::now();
    let mut cfg = match &args.config {
        Some(p) => Config::load(p)?,
        None => Config::new(),
    };
    apply_sets(&mut cfg, &args.sets)?;
    match args.which {
        Which::Planar => run_planar(args, &mut cfg, started),
        Which::Localizability => run_localizability(args, &mut cfg, started),
    }
}

fn parse_height_rule(cfg: &Config) -> Result<PlaneHeightRule> {
    match cfg.get("height-rule").unwrap_or("min-sq-error") {
        "midpoint" => Ok(PlaneHeightRule::Midpoint),
        "min-abs-error" => Ok(PlaneHeightRule::MinMeanAbsError),
        "min-sq-error" => Ok(PlaneHeightRule::MinMeanSqError),
        other => Err(CliError::Config(format!(
            "unknown height-rule `{other}`; valid: midpoint, min-abs-error, min-sq-error"
        ))),
    }
}

fn run_planar(args: &Args, cfg: &mut Config, started: std::time::Instant) -> Result<()> {
    cfg.set_default("n-ntp", "100");
    cfg.set_default("altitudes", "20 km, 500 km, 20000 km");
    cfg.set_default("cap-angles", "1..30:30 deg");
    cfg.set_default("couplings", "200");
    cfg.set_default("seed", "42");
    cfg.set_default("height-rule", "min-sq-error");
    cfg.set_default("r-earth", "6371 km");

    let study = PlanarStudyConfig {
        n_ntp: cfg.req_u32("n-ntp")?,
        altitudes_km: cfg.get_length_list_km("altitudes")?.unwrap(),
        cap_angle_grid_rad: cfg.get_angle_list_rad("cap-angles")?.unwrap(),
        couplings: cfg.req_u32("couplings")?,
        seed: cfg.req_u64("seed")?,
        height_rule: parse_height_rule(cfg)?,
        r_earth_km: cfg.get_length_km("r-earth")?.unwrap(),
    };
    if study.n_ntp == 0 || study.couplings == 0 {
        return Err(CliError::Config("planar study needs points and couplings".into()));
    }
    if study.altitudes_km.is_empty() || study.cap_angle_grid_rad.is_empty() {
        return Err(CliError::Config("planar study needs altitudes and cap angles".into()));
    }
    for &a in &study.cap_angle_grid_rad {
        if !(a > 0.0 && a <= std::f64::consts::PI) {
            return Err(CliError::Config(format!("cap angle {a} rad outside (0, pi]")));
        }
    }

    // Grid points are independent; evaluate them in parallel and emit in
    // grid order.
    let grid: Vec<(f64, f64)> = study
        .altitudes_km
        .iter()
        .flat_map(|&alt| study.cap_angle_grid_rad.iter().map(move |&ang| (alt, ang)))
        .collect();
    let rows: Vec<_> = grid
        .par_iter()
        .map(|&(alt, ang)| planar_study_point(&study, alt, ang))
        .collect();

    let mut csv = Csv::new(&[
        "altitude_km",
        "cap_angle_deg",
        "e_bar_pct",
        "std_error_pct",
        "plane_height_km",
    ]);
    for r in &rows {
        csv.row(&[
            fmt_f64(r.altitude_km),
            fmt_f64(r.cap_angle_rad.to_degrees()),
            fmt_f64(r.e_bar_pct),
            fmt_f64(r.std_error_pct),
            fmt_f64(r.plane_height_km),
        ]);
    }
    let out = args.out_dir.join("planar_error.csv");
    csv.write(&out)?;
    finish_manifest(&["study", "planar"], cfg, study.seed, &out, started)
}

fn run_localizability(args: &Args, cfg: &mut Config, started: std::time::Instant) -> Result<()> {
    cfg.set_default("sat-counts", "24..31");
    cfg.set_default("altitudes", "10000 km, 20000 km");
    cfg.set_default("k-values", "4, 6");
    cfg.set_default("sats-per-orbit", "4");
    cfg.set_default("trials", "100000");
    cfg.set_default("seed", "42");
    cfg.set_default("subset", "detection-count");
    cfg.set_default("gamma-approx", "false");
    cfg.set_default("r-earth", "6371 km");

    let link = resolve_link(cfg)?;
    cfg.set_default("sr-omega", "1.29");
    cfg.set_default("sr-b0", "0.158");
    cfg.set_default("sr-m", "19.4");
    let sr = SRParams::new(
        cfg.get_f64("sr-omega")?.unwrap(),
        cfg.get_f64("sr-b0")?.unwrap(),
        cfg.get_f64("sr-m")?.unwrap(),
    )
    .map_err(CliError::from)?;

    let study = LocalizabilityStudyConfig {
        sat_counts: cfg.get_u32_list("sat-counts")?.unwrap(),
        altitudes_km: cfg.get_length_list_km("altitudes")?.unwrap(),
        k_values: cfg.get_u32_list("k-values")?.unwrap(),
        sats_per_orbit: cfg.req_u32("sats-per-orbit")?,
        link,
        sr,
        use_gamma_approx: cfg.get_bool("gamma-approx")?.unwrap(),
        subset: resolve_subset(cfg)?,
        trials: cfg.req_u64("trials")?,
        seed: cfg.req_u64("seed")?,
        r_earth_km: cfg.get_length_km("r-earth")?.unwrap(),
    };
    if study.sat_counts.is_empty() || study.altitudes_km.is_empty() || study.k_values.is_empty() {
        return Err(CliError::Config("localizability study needs a nonempty grid".into()));
    }
    if study.trials == 0 {
        return Err(CliError::Config("at least one trial required".into()));
    }
    if study.sats_per_orbit == 0 {
        return Err(CliError::Config("sats-per-orbit must be positive".into()));
    }

    let mut grid: Vec<(f64, u32, u32)> = Vec::new();
    for &alt in &study.altitudes_km {
        for &k in &study.k_values {
            for &n in &study.sat_counts {
                grid.push((alt, k, n));
            }
        }
    }
    let rows: Vec<_> = grid
        .par_iter()
        .map(|&(alt, k, n)| localizability_study_point(&study, alt, k, n).map_err(CliError::from))
        .collect::<Result<Vec<_>>>()?;

    let mut csv = Csv::new(&["altitude_km", "k", "n_sats", "estimate", "std_error", "trials"]);
    for r in &rows {
        csv.row(&[
            fmt_f64(r.altitude_km),
            r.k.to_string(),
            r.n_sats.to_string(),
            fmt_f64(r.result.estimate),
            fmt_f64(r.result.std_error),
            r.result.trials.to_string(),
        ]);
    }
    let out = args.out_dir.join("localizability.csv");
    csv.write(&out)?;
    finish_manifest(&["study", "localizability"], cfg, study.seed, &out, started)
}

fn finish_manifest(
    command: &[&str],
    cfg: &Config,
    seed: u64,
    out: &Path,
    started: std::time::Instant,
) -> Result<()> {
    let mut manifest = RunManifest::new(command, cfg, seed);
    manifest.add_output(out)?;
    manifest.duration_seconds = started.elapsed().as_secs_f64();
    let mpath = crate::commands::sample::manifest_path(out);
    manifest.write(&mpath)?;
    println!("wrote {} and {}", out.display(), mpath.display());
    Ok(())
}
