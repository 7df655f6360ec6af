//! `ntn topology`: closed-form contact/availability statistics on an angle
//! grid, with an optional empirical column estimated from seeded samples.

use ntn_core::geometry::{central_angle_to_distance, CentralAngle, SpacePoint};
use ntn_core::process::sample_hom_bpp;
use ntn_core::topology::{
    contact_angle_cdf, contact_angle_pdf, contact_distance_cdf, empirical_contact_angle,
    k_availability, TopologyParams,
};

use crate::commands::common::apply_sets;
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
    cfg.set_default("n", "100");
    cfg.set_default("r-earth", "6371 km");
    cfg.set_default("k", "4");
    cfg.set_default("theta-start", "0 deg");
    cfg.set_default("theta-stop", "90 deg");
    cfg.set_default("theta-steps", "91");
    cfg.set_default("empirical", "false");
    cfg.set_default("samples", "100000");
    cfg.set_default("seed", "0");

    let n = cfg.req_u32("n")?;
    let r_earth = cfg.get_length_km("r-earth")?.unwrap();
    let radius = match (cfg.get_length_km("altitude")?, cfg.get_length_km("radius")?) {
        (Some(a), None) => r_earth + a,
        (None, Some(r)) => r,
        (None, None) => return Err(CliError::Config("missing `altitude` (or `radius`)".into())),
        _ => return Err(CliError::Config("give either `altitude` or `radius`, not both".into())),
    };
    let k = cfg.req_u32("k")?;
    let params = TopologyParams::new(n, radius, r_earth).map_err(CliError::from)?;
    if k > n {
        return Err(CliError::Config(format!("k = {k} exceeds n = {n}")));
    }

    let start = cfg.get_angle_rad("theta-start")?.unwrap();
    let stop = cfg.get_angle_rad("theta-stop")?.unwrap();
    let steps = cfg.req_u32("theta-steps")? as usize;
    if steps < 2 || stop <= start {
        return Err(CliError::Config("need theta-stop > theta-start and at least 2 steps".into()));
    }

    let empirical = cfg.get_bool("empirical")?.unwrap();
    let emp_cdf = if empirical {
        let samples = cfg.req_u64("samples")?;
        let seed = cfg.req_u64("seed")?;
        let draws: Vec<_> = (0..samples)
            .map(|i| sample_hom_bpp(n, radius, ntn_core::rng::derive_seed(seed, i)))
            .collect();
        let reference = SpacePoint::new(radius, 0.0, 0.0);
        Some(empirical_contact_angle(&draws, &reference).map_err(CliError::from)?)
    } else {
        None
    };

    let mut header = vec![
        "theta_deg",
        "distance_km",
        "contact_cdf",
        "contact_pdf",
        "contact_distance_cdf",
        "availability",
        "k_availability",
    ];
    if empirical {
        header.push("empirical_cdf");
    }
    let mut csv = Csv::new(&header);
    for i in 0..steps {
        let theta = start + (stop - start) * i as f64 / (steps - 1) as f64;
        let angle = CentralAngle::new(theta).map_err(CliError::from)?;
        let d = central_angle_to_distance(angle, radius, r_earth).map_err(CliError::from)?;
        let mut row = vec![
            fmt_f64(theta.to_degrees()),
            fmt_f64(d),
            fmt_f64(contact_angle_cdf(theta, &params)),
            fmt_f64(contact_angle_pdf(theta, &params)),
            fmt_f64(contact_distance_cdf(d, &params).map_err(CliError::from)?),
            fmt_f64(contact_angle_cdf(theta, &params)), // availability = P[≥1 within θ]
            fmt_f64(k_availability(k, theta, &params).map_err(CliError::from)?),
        ];
        if let Some(e) = &emp_cdf {
            row.push(fmt_f64(e.eval(theta)));
        }
        csv.row(&row);
    }
    csv.write(&args.output)?;

    if let Some(e) = &emp_cdf {
        let ks = e.ks_against(|t| contact_angle_cdf(t, &params));
        println!("empirical vs closed-form contact CDF: KS = {ks:.5}");
    }

    let seed = cfg.req_u64("seed")?;
    let mut manifest = RunManifest::new(&["topology"], &cfg, seed);
    manifest.add_output(&args.output)?;
    manifest.duration_seconds = started.elapsed().as_secs_f64();
    manifest.write(&manifest_path(&args.output))?;
    println!("wrote {}", args.output.display());
    Ok(())
}
