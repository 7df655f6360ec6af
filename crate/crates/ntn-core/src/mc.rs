//! Seeded Monte Carlo evaluation of channel-level metrics over constellation
//! realizations: coverage probability and K-localizability.
//!
//! The typical user sits at the north pole of the Earth sphere, so a point's
//! central angle to the user is its polar angle. Each trial derives its own
//! seed from `(config seed, trial index)`; the per-range counting functions
//! let callers split the trial loop across threads and still reproduce the
//! serial result bit-for-bit (the reduction is an integer sum).

use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fading::FadingModel;
use crate::geometry::{central_to_zenith, CentralAngle};
use crate::link::{self, LinkParams};
use crate::process::{self, ConstellationSample, ProcessSpec};
use crate::rng::{derive_seed, substream};

/// How the served NTP is chosen among the visible ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Association {
    /// Nearest visible NTP (maximum average received power).
    Nearest,
    /// Uniformly random visible NTP.
    Random,
}

/// Interference accounting for the SINR denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Interference {
    /// Noise-limited links.
    None,
    /// Every other visible NTP interferes with its own fading draw.
    AllVisibleOthers,
}

/// Which satellites must clear the SINR threshold for K-localizability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum LocalizabilitySubset {
    /// At least K of all visible satellites exceed the threshold.
    DetectionCount,
    /// The K nearest visible satellites all exceed the threshold
    /// (fewer than K visible fails the trial).
    NearestK,
}

/// Visibility constraints applied before association.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VisibilityRule {
    /// Require the NTP to sit above the geometric horizon
    /// (R_NTP·cos θ_c > R⊕).
    pub horizon: bool,
    /// Optional maximum-reliable-distance bound, km.
    pub max_distance_km: Option<f64>,
    /// Optional minimum-elevation mask, rad (off by default; the bare
    /// horizon matches the analytic availability forms).
    pub min_elevation_rad: Option<f64>,
}

impl Default for VisibilityRule {
    fn default() -> Self {
        VisibilityRule { horizon: true, max_distance_km: None, min_elevation_rad: None }
    }
}

/// Monte Carlo metric configuration.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricConfig {
    pub trials: u64,
    pub seed: u64,
    pub association: Association,
    pub visibility: VisibilityRule,
    /// K for localizability metrics.
    pub k: u32,
    pub interference: Interference,
    pub subset: LocalizabilitySubset,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            trials: 10_000,
            seed: 0,
            association: Association::Nearest,
            visibility: VisibilityRule::default(),
            k: 4,
            interference: Interference::None,
            subset: LocalizabilitySubset::DetectionCount,
        }
    }
}

/// A Monte Carlo estimate with its binomial standard error and the
/// configuration that produced it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricResult {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub config: MetricConfig,
}

fn finish(successes: u64, cfg: &MetricConfig) -> MetricResult {
    let n = cfg.trials as f64;
    let p = successes as f64 / n;
    MetricResult {
        estimate: p,
        std_error: libm::sqrt(p * (1.0 - p) / n),
        trials: cfg.trials,
        config: cfg.clone(),
    }
}

struct VisiblePoint {
    theta_rad: f64,
    distance_m: f64,
}

/// Collects the visible points of a sample for a pole user, with central
/// angles and distances.
fn visible_points(
    sample: &ConstellationSample,
    rule: &VisibilityRule,
    r_earth_km: f64,
) -> Vec<VisiblePoint> {
    let r = sample.shell_radius_km;
    let mut out = Vec::with_capacity(sample.points.len());
    for p in &sample.points {
        let theta = p.polar_rad;
        if rule.horizon && r * libm::cos(theta) <= r_earth_km {
            continue;
        }
        let d_km = libm::sqrt(
            r * r + r_earth_km * r_earth_km - 2.0 * r * r_earth_km * libm::cos(theta),
        );
        if let Some(max_d) = rule.max_distance_km {
            if d_km > max_d {
                continue;
            }
        }
        if let Some(min_el) = rule.min_elevation_rad {
            let zenith = central_to_zenith(
                CentralAngle::new(theta).unwrap_or_else(|_| CentralAngle::new(0.0).unwrap()),
                r,
                r_earth_km,
            )
            .map(|z| z.rad())
            .unwrap_or(core::f64::consts::PI);
            if zenith > core::f64::consts::FRAC_PI_2 - min_el {
                continue;
            }
        }
        out.push(VisiblePoint { theta_rad: theta, distance_m: d_km * 1e3 });
    }
    out
}

/// Received signal powers for all visible points, one independent fading
/// draw per point, in point order.
fn draw_signals(
    visible: &[VisiblePoint],
    link: &LinkParams,
    fading: &FadingModel,
    r_ntp_km: f64,
    r_earth_km: f64,
    rng: &mut crate::rng::SimRng,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(visible.len());
    for v in visible {
        let factor =
            fading.draw_channel_factor(link.extra_atten, v.theta_rad, r_ntp_km, r_earth_km, rng)?;
        // The channel factor already folds in ζ; feed received_power with
        // extra_atten 1 to avoid double counting.
        let unit = LinkParams { extra_atten: 1.0, ..*link };
        out.push(link::received_power(&unit, v.distance_m, factor)?);
    }
    Ok(out)
}

/// Number of covered trials among trial indices `range` (see
/// [`coverage_probability`] for the trial definition). Splitting the full
/// range across workers and summing reproduces the serial count exactly.
pub fn coverage_success_count(
    spec: &ProcessSpec,
    shell_radius_km: f64,
    r_earth_km: f64,
    link: &LinkParams,
    fading: &FadingModel,
    cfg: &MetricConfig,
    range: core::ops::Range<u64>,
) -> Result<u64> {
    let mut successes = 0u64;
    for trial in range {
        let trial_seed = derive_seed(cfg.seed, trial);
        let sample = process::sample(spec, shell_radius_km, trial_seed);
        let visible = visible_points(&sample, &cfg.visibility, r_earth_km);
        if visible.is_empty() {
            continue;
        }
        let mut rng = substream(trial_seed, 1);
        let chosen = match cfg.association {
            Association::Nearest => {
                let mut best = 0usize;
                for (i, v) in visible.iter().enumerate() {
                    if v.theta_rad < visible[best].theta_rad {
                        best = i;
                    }
                }
                best
            }
            Association::Random => rng.random_range(0..visible.len()),
        };
        let ok = match cfg.interference {
            Interference::None => {
                let v = &visible[chosen];
                let factor = fading.draw_channel_factor(
                    link.extra_atten,
                    v.theta_rad,
                    shell_radius_km,
                    r_earth_km,
                    &mut rng,
                )?;
                let unit = LinkParams { extra_atten: 1.0, ..*link };
                let s = link::received_power(&unit, v.distance_m, factor)?;
                s / link.noise_power_w > link.sinr_threshold
            }
            Interference::AllVisibleOthers => {
                let signals =
                    draw_signals(&visible, link, fading, shell_radius_km, r_earth_km, &mut rng)?;
                let total: f64 = signals.iter().sum();
                let s = signals[chosen];
                s / (link.noise_power_w + (total - s)) > link.sinr_threshold
            }
        };
        successes += u64::from(ok);
    }
    Ok(successes)
}

/// Coverage probability: the fraction of trials in which the associated
/// visible NTP's SINR exceeds the threshold. Trials with no visible NTP
/// count as failures.
pub fn coverage_probability(
    spec: &ProcessSpec,
    shell_radius_km: f64,
    r_earth_km: f64,
    link: &LinkParams,
    fading: &FadingModel,
    cfg: &MetricConfig,
) -> Result<MetricResult> {
    if cfg.trials == 0 {
        return Err(Error::Config("at least one trial required"));
    }
    link.validate()?;
    if cfg.association == Association::Random && spec.expected_count() == 0.0 {
        return Err(Error::Config("random association with a process that never has points"));
    }
    let successes = coverage_success_count(
        spec,
        shell_radius_km,
        r_earth_km,
        link,
        fading,
        cfg,
        0..cfg.trials,
    )?;
    Ok(finish(successes, cfg))
}

/// Number of localizable trials among trial indices `range`, for an
/// arbitrary constellation sampler (seed ↦ sample).
pub fn k_localizability_success_count<S>(
    sampler: S,
    r_earth_km: f64,
    link: &LinkParams,
    fading: &FadingModel,
    cfg: &MetricConfig,
    range: core::ops::Range<u64>,
) -> Result<u64>
where
    S: Fn(u64) -> ConstellationSample,
{
    let k = cfg.k as usize;
    let mut successes = 0u64;
    for trial in range {
        let trial_seed = derive_seed(cfg.seed, trial);
        let sample = sampler(trial_seed);
        let r_ntp_km = sample.shell_radius_km;
        let mut visible = visible_points(&sample, &cfg.visibility, r_earth_km);
        if k == 0 {
            successes += 1; // vacuous success, exposed for testing
            continue;
        }
        if visible.len() < k {
            continue;
        }
        let mut rng = substream(trial_seed, 1);
        let ok = match cfg.subset {
            LocalizabilitySubset::DetectionCount => {
                let signals =
                    draw_signals(&visible, link, fading, r_ntp_km, r_earth_km, &mut rng)?;
                let total: f64 = signals.iter().sum();
                let mut detected = 0usize;
                for &s in &signals {
                    let denom = match cfg.interference {
                        Interference::None => link.noise_power_w,
                        Interference::AllVisibleOthers => link.noise_power_w + (total - s),
                    };
                    detected += usize::from(s / denom > link.sinr_threshold);
                }
                detected >= k
            }
            LocalizabilitySubset::NearestK => {
                // Signals are drawn for all visible satellites in point
                // order (they interfere under AllVisibleOthers); the K
                // nearest must each clear the threshold.
                let signals =
                    draw_signals(&visible, link, fading, r_ntp_km, r_earth_km, &mut rng)?;
                let mut idx: Vec<usize> = (0..visible.len()).collect();
                idx.sort_by(|&a, &b| {
                    visible[a].theta_rad.partial_cmp(&visible[b].theta_rad).unwrap()
                });
                let total: f64 = signals.iter().sum();
                idx[..k].iter().all(|&i| {
                    let s = signals[i];
                    let denom = match cfg.interference {
                        Interference::None => link.noise_power_w,
                        Interference::AllVisibleOthers => link.noise_power_w + (total - s),
                    };
                    s / denom > link.sinr_threshold
                })
            }
        };
        visible.clear();
        successes += u64::from(ok);
    }
    Ok(successes)
}

/// K-localizability: the probability that the ground target can detect at
/// least K satellites simultaneously (SINR above threshold; satellites
/// below the horizon contribute nothing).
///
/// `subset` picks the detection event: `DetectionCount` (default; at least
/// K of all visible pass) or `NearestK` (the K nearest all pass).
pub fn k_localizability(
    spec: &ProcessSpec,
    shell_radius_km: f64,
    r_earth_km: f64,
    link: &LinkParams,
    fading: &FadingModel,
    cfg: &MetricConfig,
) -> Result<MetricResult> {
    if cfg.trials == 0 {
        return Err(Error::Config("at least one trial required"));
    }
    link.validate()?;
    let successes = k_localizability_success_count(
        |seed| process::sample(spec, shell_radius_km, seed),
        r_earth_km,
        link,
        fading,
        cfg,
        0..cfg.trials,
    )?;
    Ok(finish(successes, cfg))
}

/// Runs `eval` over a parameter grid with independent, reproducible
/// per-point seeds derived from `(base_seed, key(item))`. Because the seed
/// is keyed by the grid *value*, permuting the grid permutes the results
/// without changing any of them.
pub fn run_sweep<T, K, F>(grid: &[T], key: K, base_seed: u64, eval: F) -> Result<Vec<MetricResult>>
where
    K: Fn(&T) -> u64,
    F: Fn(&T, u64) -> Result<MetricResult>,
{
    if grid.is_empty() {
        return Err(Error::Config("empty sweep grid"));
    }
    let mut out = Vec::with_capacity(grid.len());
    for (i, item) in grid.iter().enumerate() {
        let seed = derive_seed(base_seed, key(item));
        match eval(item, seed) {
            Ok(r) => out.push(r),
            Err(e) => return Err(Error::Sweep { index: i, source: Box::new(e) }),
        }
    }
    Ok(out)
}
