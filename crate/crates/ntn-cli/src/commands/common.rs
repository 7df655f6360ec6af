//! Shared resolution from the canonical config map to core types, and the
//! deterministic parallel trial driver.

use ntn_core::fading::{
    FadingModel, MixedLognormalParams, NakagamiParams, PointingErrorParams, RicianParams, SRParams,
};
use ntn_core::link::LinkParams;
use ntn_core::mc::{Association, Interference, LocalizabilitySubset, VisibilityRule};
use ntn_core::process::ProcessSpec;
use rayon::prelude::*;

use crate::config::Config;
use crate::error::{CliError, Result};

pub const MODELS: &[&str] = &["hom-bpp", "hom-ppp", "nonhom-bpp", "cpp", "dsbpp", "ogm", "plp"];

/// Applies repeated `--set key=value` overrides.
pub fn apply_sets(cfg: &mut Config, sets: &[String]) -> Result<()> {
    for s in sets {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--set expects key=value, got `{s}`")))?;
        cfg.set(k.trim(), v.trim());
    }
    Ok(())
}

/// Reads the point-process model and its parameters.
pub fn resolve_model(cfg: &Config) -> Result<ProcessSpec> {
    let model = cfg.get("model").unwrap_or("hom-bpp");
    let need_u32 = |key: &str| -> Result<u32> {
        cfg.get_u32(key)?
            .ok_or_else(|| CliError::Config(format!("model `{model}` needs `{key}`")))
    };
    let need_f64 = |key: &str| -> Result<f64> {
        cfg.get_f64(key)?
            .ok_or_else(|| CliError::Config(format!("model `{model}` needs `{key}`")))
    };
    match model {
        "hom-bpp" => Ok(ProcessSpec::HomBpp { count: need_u32("count")? }),
        "hom-ppp" => Ok(ProcessSpec::HomPpp { mean_count: need_f64("mean-count")? }),
        "nonhom-bpp" => Ok(ProcessSpec::NonHomBpp { count: need_u32("count")? }),
        "cpp" => Ok(ProcessSpec::Cpp {
            mean_orbits: need_f64("mean-orbits")?,
            mean_sats_per_orbit: need_f64("mean-sats-per-orbit")?,
        }),
        "dsbpp" => Ok(ProcessSpec::Dsbpp {
            orbits: need_u32("orbits")?,
            sats_per_orbit: need_u32("sats-per-orbit")?,
        }),
        "ogm" => Ok(ProcessSpec::Ogm {
            orbits: need_u32("orbits")?,
            inclination_rad: cfg
                .get_angle_rad("inclination")?
                .ok_or_else(|| CliError::Config("model `ogm` needs `inclination`".into()))?,
            sats_per_orbit: need_u32("sats-per-orbit")?,
            equal_phase: cfg.get_bool("equal-phase")?.unwrap_or(false),
        }),
        "plp" => Ok(ProcessSpec::Plp {
            inclination_rad: cfg
                .get_angle_rad("inclination")?
                .ok_or_else(|| CliError::Config("model `plp` needs `inclination`".into()))?,
            sats: need_u32("sats")?,
        }),
        other => Err(CliError::Config(format!(
            "unknown model `{other}`; valid models: {}",
            MODELS.join(", ")
        ))),
    }
}

/// Fills the canonical link-budget keys with the GPS-L1-style defaults so
/// the manifest snapshot is self-contained, then reads them.
pub fn resolve_link(cfg: &mut Config) -> Result<LinkParams> {
    cfg.set_default("tx-power", "18 dBW");
    cfg.set_default("tx-gain", "20.9 dBi");
    cfg.set_default("rx-gain", "20.9 dBi");
    cfg.set_default("frequency", "1.575 GHz");
    cfg.set_default("extra-attenuation", "-2 dB");
    cfg.set_default("pathloss-exp", "2");
    cfg.set_default("noise-power", "-98 dBm");
    cfg.set_default("threshold", "0 dB");
    let link = LinkParams {
        tx_power_w: cfg.get_power_w("tx-power")?.unwrap(),
        tx_gain: cfg.get_gain("tx-gain")?.unwrap(),
        rx_gain: cfg.get_gain("rx-gain")?.unwrap(),
        carrier_freq_hz: cfg.get_freq_hz("frequency")?.unwrap(),
        extra_atten: cfg.get_ratio("extra-attenuation")?.unwrap(),
        pathloss_exp: cfg.get_f64("pathloss-exp")?.unwrap(),
        noise_power_w: cfg.get_power_w("noise-power")?.unwrap(),
        sinr_threshold: cfg.get_ratio("threshold")?.unwrap(),
    };
    link.validate().map_err(CliError::from)?;
    Ok(link)
}

/// Reads the fading family, defaulting the shadowed-Rician parameters.
pub fn resolve_fading(cfg: &mut Config) -> Result<FadingModel> {
    cfg.set_default("fading", "shadowed-rician");
    let family = cfg.get("fading").unwrap().to_string();
    match family.as_str() {
        "nakagami" => {
            cfg.set_default("nakagami-m", "1");
            Ok(FadingModel::Nakagami(
                NakagamiParams::new(cfg.get_f64("nakagami-m")?.unwrap()).map_err(CliError::from)?,
            ))
        }
        "shadowed-rician" | "sr-gamma" => {
            cfg.set_default("sr-omega", "1.29");
            cfg.set_default("sr-b0", "0.158");
            cfg.set_default("sr-m", "19.4");
            let sr = SRParams::new(
                cfg.get_f64("sr-omega")?.unwrap(),
                cfg.get_f64("sr-b0")?.unwrap(),
                cfg.get_f64("sr-m")?.unwrap(),
            )
            .map_err(CliError::from)?;
            if family == "sr-gamma" {
                Ok(FadingModel::ShadowedRicianGamma(ntn_core::fading::sr_gamma_approx(&sr)))
            } else {
                Ok(FadingModel::ShadowedRician(sr))
            }
        }
        "rician" => {
            cfg.set_default("rician-k", "5");
            Ok(FadingModel::Rician(
                RicianParams::new(cfg.get_f64("rician-k")?.unwrap()).map_err(CliError::from)?,
            ))
        }
        "pointing-error" => {
            cfg.set_default("pe-a0", "0.9");
            cfg.set_default("pe-eta", "1.2");
            cfg.set_default("pe-jitter", "1 mrad");
            Ok(FadingModel::PointingError(
                PointingErrorParams::new(
                    cfg.get_f64("pe-a0")?.unwrap(),
                    cfg.get_f64("pe-eta")?.unwrap(),
                    cfg.get_angle_rad("pe-jitter")?.unwrap(),
                )
                .map_err(CliError::from)?,
            ))
        }
        "mixed-lognormal" => {
            // Environment constants have no universal defaults; all five
            // parameters must be supplied explicitly.
            let need = |key: &str| -> Result<f64> {
                cfg.get_db(key)?
                    .ok_or_else(|| CliError::Config(format!("mixed-lognormal fading needs `{key}` (dB)")))
            };
            let beta = cfg
                .get_f64("ml-beta")?
                .ok_or_else(|| CliError::Config("mixed-lognormal fading needs `ml-beta`".into()))?;
            Ok(FadingModel::MixedLognormal(
                MixedLognormalParams::new(
                    need("ml-mu-los")?,
                    need("ml-sigma-los")?,
                    need("ml-mu-nlos")?,
                    need("ml-sigma-nlos")?,
                    beta,
                )
                .map_err(CliError::from)?,
            ))
        }
        other => Err(CliError::Config(format!(
            "unknown fading family `{other}`; valid: nakagami, shadowed-rician, sr-gamma, rician, pointing-error, mixed-lognormal"
        ))),
    }
}

pub fn resolve_visibility(cfg: &Config) -> Result<VisibilityRule> {
    Ok(VisibilityRule {
        horizon: cfg.get_bool("horizon")?.unwrap_or(true),
        max_distance_km: cfg.get_length_km("max-distance")?,
        min_elevation_rad: cfg.get_angle_rad("min-elevation")?,
    })
}

pub fn resolve_association(cfg: &Config) -> Result<Association> {
    match cfg.get("association").unwrap_or("nearest") {
        "nearest" => Ok(Association::Nearest),
        "random" => Ok(Association::Random),
        other => Err(CliError::Config(format!(
            "unknown association `{other}`; valid: nearest, random"
        ))),
    }
}

pub fn resolve_interference(cfg: &Config) -> Result<Interference> {
    match cfg.get("interference").unwrap_or("none") {
        "none" => Ok(Interference::None),
        "all-visible-others" => Ok(Interference::AllVisibleOthers),
        other => Err(CliError::Config(format!(
            "unknown interference mode `{other}`; valid: none, all-visible-others"
        ))),
    }
}

pub fn resolve_subset(cfg: &Config) -> Result<LocalizabilitySubset> {
    match cfg.get("subset").unwrap_or("detection-count") {
        "detection-count" => Ok(LocalizabilitySubset::DetectionCount),
        "nearest-k" => Ok(LocalizabilitySubset::NearestK),
        other => Err(CliError::Config(format!(
            "unknown subset rule `{other}`; valid: detection-count, nearest-k"
        ))),
    }
}

/// Shell geometry: `altitude` (km above the surface) or `radius` (km from
/// the center), plus `r-earth`.
pub fn resolve_shell(cfg: &mut Config) -> Result<(f64, f64)> {
    cfg.set_default("r-earth", "6371 km");
    let r_earth = cfg.get_length_km("r-earth")?.unwrap();
    let radius = match (cfg.get_length_km("altitude")?, cfg.get_length_km("radius")?) {
        (Some(alt), None) => r_earth + alt,
        (None, Some(r)) => r,
        (Some(_), Some(_)) => {
            return Err(CliError::Config("give either `altitude` or `radius`, not both".into()))
        }
        (None, None) => return Err(CliError::Config("missing `altitude` (or `radius`)".into())),
    };
    if radius < r_earth {
        return Err(CliError::Config(format!(
            "shell radius {radius} km is below the Earth radius {r_earth} km"
        )));
    }
    Ok((radius, r_earth))
}

/// Fixed-size trial chunks summed in parallel: the chunk boundaries do not
/// depend on the worker count, so any thread count produces the same total.
pub fn parallel_successes<F>(trials: u64, chunk: u64, eval: F) -> Result<u64>
where
    F: Fn(core::ops::Range<u64>) -> Result<u64> + Sync,
{
    let chunk = chunk.max(1);
    let starts: Vec<u64> = (0..trials).step_by(chunk as usize).collect();
    let partials: Vec<Result<u64>> = starts
        .par_iter()
        .map(|&s| eval(s..(s + chunk).min(trials)))
        .collect();
    let mut total = 0u64;
    for p in partials {
        total += p?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_model_lists_valid_ones() {
        let mut cfg = Config::new();
        cfg.set("model", "walker");
        let err = resolve_model(&cfg).unwrap_err().to_string();
        for m in MODELS {
            assert!(err.contains(m), "{err}");
        }
    }

    #[test]
    fn link_defaults_are_filled_into_config() {
        let mut cfg = Config::new();
        let link = resolve_link(&mut cfg).unwrap();
        assert_eq!(cfg.get("tx-power"), Some("18 dBW"));
        assert!((link.tx_power_w - 63.09573444801933).abs() < 1e-10);
        assert!((link.sinr_threshold - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mixed_lognormal_requires_explicit_parameters() {
        let mut cfg = Config::new();
        cfg.set("fading", "mixed-lognormal");
        let err = resolve_fading(&mut cfg).unwrap_err().to_string();
        assert!(err.contains("mixed-lognormal fading needs"), "{err}");
    }

    #[test]
    fn shell_resolution() {
        let mut cfg = Config::new();
        cfg.set("altitude", "500 km");
        let (r, re) = resolve_shell(&mut cfg).unwrap();
        assert_eq!((r, re), (6871.0, 6371.0));
        let mut cfg2 = Config::new();
        cfg2.set("radius", "7000 km");
        assert_eq!(resolve_shell(&mut cfg2).unwrap().0, 7000.0);
        let mut cfg3 = Config::new();
        assert!(resolve_shell(&mut cfg3).is_err());
    }

    #[test]
    fn parallel_successes_chunking_is_exact() {
        let total = parallel_successes(10_001, 128, |r| Ok(r.end - r.start)).unwrap();
        assert_eq!(total, 10_001);
    }
}
