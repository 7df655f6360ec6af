//! Turnkey drivers for the two quantitative case studies:
//!
//! * **Planar approximation error**: couple a cap-restricted spherical BPP
//!   with a planar disc BPP through shared uniforms, and measure the mean
//!   relative distance error Ē seen by a ground user under the cap apex, as
//!   a function of the cap angle and the plane height.
//! * **K-localizability of a GPS-like MEO shell**: DSBPP constellations with
//!   four satellites per orbit (one deficient orbit takes any remainder),
//!   shadowed-Rician fading and an L1 link budget, swept over satellite
//!   count, altitude, and K.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fading::{sr_gamma_approx, FadingModel, SRParams};
use crate::geometry::EARTH_RADIUS_KM;
use crate::link::LinkParams;
use crate::mc::{self, LocalizabilitySubset, MetricConfig, MetricResult, VisibilityRule};
use crate::numeric::golden_section_min;
use crate::process::{sample_cap_bpp, sample_dsbpp_total, ConstellationSample};
use crate::rng::derive_seed;

// ---------------------------------------------------------------------------
// Planar-approximation study
// ---------------------------------------------------------------------------

/// How the plane height is chosen for each curve point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum PlaneHeightRule {
    /// Midpoint of the admissible interval (R cos θ_c, R).
    Midpoint,
    /// Height minimizing the mean relative distance error Ē itself.
    MinMeanAbsError,
    /// Height minimizing the mean squared distance error.
    MinMeanSqError,
}

/// Configuration of the planar-approximation error study.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlanarStudyConfig {
    /// Points per realization.
    pub n_ntp: u32,
    /// Shell altitudes to evaluate, km.
    pub altitudes_km: Vec<f64>,
    /// Cap angles (the figure's x-axis values), rad. Each value is used
    /// directly as the cap half-angle of the polar-angle mapping.
    pub cap_angle_grid_rad: Vec<f64>,
    /// Independent couplings averaged per curve point.
    pub couplings: u32,
    pub seed: u64,
    pub height_rule: PlaneHeightRule,
    pub r_earth_km: f64,
}

impl Default for PlanarStudyConfig {
    fn default() -> Self {
        let deg = core::f64::consts::PI / 180.0;
        PlanarStudyConfig {
            n_ntp: 100,
            altitudes_km: alloc::vec![20.0, 500.0, 20_000.0],
            cap_angle_grid_rad: (1..=30).map(|i| i as f64 * deg).collect(),
            couplings: 200,
            seed: 42,
            height_rule: PlaneHeightRule::MinMeanSqError,
            r_earth_km: EARTH_RADIUS_KM,
        }
    }
}

/// One point of a planar twin: cylindrical coordinates on the disc.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlanarPoint {
    /// Radial distance from the disc center, km.
    pub radial_km: f64,
    /// Same azimuth as the spherical twin point.
    pub azimuth_rad: f64,
    /// Distance of the disc plane from the Earth center, km.
    pub height_km: f64,
}

/// Maps a cap-restricted spherical sample onto its planar twin: point n sits
/// at radius √u⁽ⁿ⁾·R·sin θ_c on a disc at height `h_planar_km`, reusing the
/// spherical twin's azimuths (shared-randomness coupling).
pub fn planar_twin(
    cap_sample: &ConstellationSample,
    uniforms: &[f64],
    cap_half_angle_rad: f64,
    h_planar_km: f64,
) -> Result<Vec<PlanarPoint>> {
    let r = cap_sample.shell_radius_km;
    let lo = r * libm::cos(cap_half_angle_rad);
    if !(h_planar_km > lo && h_planar_km < r) {
        return Err(Error::Domain {
            what: "plane height outside (R cos theta_c, R)",
            value: h_planar_km,
        });
    }
    assert_eq!(cap_sample.points.len(), uniforms.len(), "twins must share the coupling");
    let disc_radius = r * libm::sin(cap_half_angle_rad);
    Ok(cap_sample
        .points
        .iter()
        .zip(uniforms)
        .map(|(p, &u)| PlanarPoint {
            radial_km: libm::sqrt(u) * disc_radius,
            azimuth_rad: p.azimuth_rad,
            height_km: h_planar_km,
        })
        .collect())
}

/// Mean relative distance error Ē (percent) between coupled twins, seen by
/// a user on the Earth surface under the cap apex.
pub fn relative_error(
    spherical: &ConstellationSample,
    planar: &[PlanarPoint],
    r_earth_km: f64,
) -> f64 {
    assert_eq!(spherical.points.len(), planar.len(), "twins must share the coupling");
    let r = spherical.shell_radius_km;
    let n = planar.len();
    if n == 0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for (p, q) in spherical.points.iter().zip(planar) {
        let d_sph = libm::sqrt(
            r * r + r_earth_km * r_earth_km
                - 2.0 * r * r_earth_km * libm::cos(p.polar_rad),
        );
        let dz = q.height_km - r_earth_km;
        let d_pla = libm::sqrt(q.radial_km * q.radial_km + dz * dz);
        acc += libm::fabs(d_sph - d_pla) / d_sph;
    }
    acc / n as f64 * 100.0
}

/// Precomputed couplings for one (cap angle, altitude) pair: per point, the
/// spherical distance and the squared disc radius. The plane height enters
/// only through (h − R⊕)², so these arrays make Ē(h) cheap to re-evaluate.
struct Couplings {
    d_sph_km: Vec<f64>,
    rho2_km2: Vec<f64>,
    per_coupling: usize,
}

impl Couplings {
    fn build(cfg: &PlanarStudyConfig, cap_half_angle_rad: f64, altitude_km: f64) -> Self {
        let r = cfg.r_earth_km + altitude_km;
        let re = cfg.r_earth_km;
        let n = cfg.n_ntp as usize;
        let total = n * cfg.couplings as usize;
        let disc2 = (r * libm::sin(cap_half_angle_rad)) * (r * libm::sin(cap_half_angle_rad));
        let mut d_sph = Vec::with_capacity(total);
        let mut rho2 = Vec::with_capacity(total);
        for c in 0..cfg.couplings {
            // Couplings are keyed by index only, shared across the angle
            // grid (common random numbers keep the curves smooth in θ_c).
            let (sample, uniforms) =
                sample_cap_bpp(cfg.n_ntp, cap_half_angle_rad, r, derive_seed(cfg.seed, c as u64));
            for (p, &u) in sample.points.iter().zip(&uniforms) {
                d_sph.push(libm::sqrt(
                    r * r + re * re - 2.0 * r * re * libm::cos(p.polar_rad),
                ));
                rho2.push(u * disc2);
            }
        }
        Couplings { d_sph_km: d_sph, rho2_km2: rho2, per_coupling: n }
    }

    /// Ē(h) in percent, pooled over all couplings.
    fn mean_abs_rel_error(&self, h_km: f64, r_earth_km: f64) -> f64 {
        let dz2 = (h_km - r_earth_km) * (h_km - r_earth_km);
        let mut acc = 0.0;
        for (&d, &r2) in self.d_sph_km.iter().zip(&self.rho2_km2) {
            acc += libm::fabs(d - libm::sqrt(r2 + dz2)) / d;
        }
        acc / self.d_sph_km.len() as f64 * 100.0
    }

    fn mean_sq_error(&self, h_km: f64, r_earth_km: f64) -> f64 {
        let dz2 = (h_km - r_earth_km) * (h_km - r_earth_km);
        let mut acc = 0.0;
        for (&d, &r2) in self.d_sph_km.iter().zip(&self.rho2_km2) {
            let diff = d - libm::sqrt(r2 + dz2);
            acc += diff * diff;
        }
        acc / self.d_sph_km.len() as f64
    }

    /// Per-coupling Ē means (for the standard error across couplings).
    fn per_coupling_errors(&self, h_km: f64, r_earth_km: f64) -> Vec<f64> {
        let dz2 = (h_km - r_earth_km) * (h_km - r_earth_km);
        self.d_sph_km
            .chunks(self.per_coupling)
            .zip(self.rho2_km2.chunks(self.per_coupling))
            .map(|(ds, rs)| {
                let mut acc = 0.0;
                for (&d, &r2) in ds.iter().zip(rs) {
                    acc += libm::fabs(d - libm::sqrt(r2 + dz2)) / d;
                }
                acc / ds.len() as f64 * 100.0
            })
            .collect()
    }
}

/// Minimizes `objective(h)` over h ∈ (lo, hi). The objective depends on h
/// only through (h − R⊕)², so the search runs over u = |h − R⊕| (this keeps
/// golden section valid even when the interval straddles the Earth radius
/// and the error curve is mirror-symmetric); a coarse grid scan backs it up
/// since unimodality is empirical, not proven.
fn minimize_over_height<F: Fn(f64) -> f64>(
    objective: F,
    lo: f64,
    hi: f64,
    r_earth_km: f64,
    tol_h: f64,
) -> (f64, f64) {
    // Map u = |h − R⊕| back to an admissible height, preferring the branch
    // above the Earth radius.
    let to_h = |u: f64| -> f64 {
        let up = r_earth_km + u;
        if up < hi && up > lo {
            up
        } else {
            (r_earth_km - u).clamp(lo + 1e-12 * (hi - lo), hi - 1e-12 * (hi - lo))
        }
    };
    let (u_lo, u_hi) = if lo >= r_earth_km {
        (lo - r_earth_km, hi - r_earth_km)
    } else {
        (0.0, libm::fmax(r_earth_km - lo, hi - r_earth_km))
    };
    let f_u = |u: f64| objective(to_h(u));
    let (mut best_u, mut best_f) = golden_section_min(f_u, u_lo, u_hi, tol_h);
    // Grid fallback across the admissible range.
    const GRID: usize = 128;
    for i in 0..=GRID {
        let u = u_lo + (u_hi - u_lo) * i as f64 / GRID as f64;
        let v = f_u(u);
        if v < best_f {
            // Refine around the better basin.
            let span = (u_hi - u_lo) / GRID as f64;
            let (u2, f2) = golden_section_min(
                f_u,
                libm::fmax(u_lo, u - span),
                libm::fmin(u_hi, u + span),
                tol_h,
            );
            if f2 < best_f {
                best_u = u2;
                best_f = f2;
            }
        }
    }
    (to_h(best_u), best_f)
}

/// Plane height minimizing the coupling-averaged Ē for one cap angle and
/// altitude, to a height tolerance of 1e-4·(R − R cos θ_c). Returns
/// `(h_planar_km, Ē_min_pct)`.
pub fn optimal_plane_height(
    cfg: &PlanarStudyConfig,
    cap_half_angle_rad: f64,
    altitude_km: f64,
) -> (f64, f64) {
    let couplings = Couplings::build(cfg, cap_half_angle_rad, altitude_km);
    let r = cfg.r_earth_km + altitude_km;
    let lo = r * libm::cos(cap_half_angle_rad);
    let tol = 1e-4 * (r - lo);
    minimize_over_height(
        |h| couplings.mean_abs_rel_error(h, cfg.r_earth_km),
        lo,
        r,
        cfg.r_earth_km,
        tol,
    )
}

/// One point of the planar-error curve.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlanarCurvePoint {
    pub altitude_km: f64,
    /// The grid value (cap half-angle), rad.
    pub cap_angle_rad: f64,
    /// Mean relative error, percent.
    pub e_bar_pct: f64,
    /// Standard error of the mean across couplings, percent.
    pub std_error_pct: f64,
    /// The plane height the rule selected, km.
    pub plane_height_km: f64,
}

/// Evaluates one curve point under the configured height rule.
pub fn planar_study_point(
    cfg: &PlanarStudyConfig,
    altitude_km: f64,
    cap_half_angle_rad: f64,
) -> PlanarCurvePoint {
    let couplings = Couplings::build(cfg, cap_half_angle_rad, altitude_km);
    let r = cfg.r_earth_km + altitude_km;
    let lo = r * libm::cos(cap_half_angle_rad);
    let tol = 1e-4 * (r - lo);
    let h = match cfg.height_rule {
        PlaneHeightRule::Midpoint => 0.5 * (lo + r),
        PlaneHeightRule::MinMeanAbsError => {
            minimize_over_height(
                |h| couplings.mean_abs_rel_error(h, cfg.r_earth_km),
                lo,
                r,
                cfg.r_earth_km,
                tol,
            )
            .0
        }
        PlaneHeightRule::MinMeanSqError => {
            minimize_over_height(
                |h| couplings.mean_sq_error(h, cfg.r_earth_km),
                lo,
                r,
                cfg.r_earth_km,
                tol,
            )
            .0
        }
    };
    let per = couplings.per_coupling_errors(h, cfg.r_earth_km);
    let n = per.len() as f64;
    let mean = per.iter().sum::<f64>() / n;
    let var = per.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    PlanarCurvePoint {
        altitude_km,
        cap_angle_rad: cap_half_angle_rad,
        e_bar_pct: mean,
        std_error_pct: libm::sqrt(var / n),
        plane_height_km: h,
    }
}

/// Runs the full planar-error study over the configured grid.
pub fn run_planar_study(cfg: &PlanarStudyConfig) -> Result<Vec<PlanarCurvePoint>> {
    if cfg.cap_angle_grid_rad.is_empty() || cfg.altitudes_km.is_empty() {
        return Err(Error::Config("planar study needs at least one altitude and cap angle"));
    }
    if cfg.n_ntp == 0 || cfg.couplings == 0 {
        return Err(Error::Config("planar study needs points and couplings"));
    }
    let mut out = Vec::new();
    for &alt in &cfg.altitudes_km {
        for &angle in &cfg.cap_angle_grid_rad {
            out.push(planar_study_point(cfg, alt, angle));
        }
    }
    Ok(out)
}

/// Locates the cap angle where the Ē curve first crosses `target_pct`,
/// scanning `[lo_rad, hi_rad]` and bisecting the bracketing interval.
/// Returns `None` if no upward crossing is found in the window.
pub fn planar_error_crossing(
    cfg: &PlanarStudyConfig,
    altitude_km: f64,
    target_pct: f64,
    lo_rad: f64,
    hi_rad: f64,
) -> Option<f64> {
    let eval = |angle: f64| planar_study_point(cfg, altitude_km, angle).e_bar_pct - target_pct;
    const SCAN: usize = 60;
    let mut prev = eval(lo_rad);
    for i in 1..=SCAN {
        let x = lo_rad + (hi_rad - lo_rad) * i as f64 / SCAN as f64;
        let cur = eval(x);
        if prev < 0.0 && cur >= 0.0 {
            let a = lo_rad + (hi_rad - lo_rad) * (i - 1) as f64 / SCAN as f64;
            return Some(crate::numeric::bisect(eval, a, x, 1e-5));
        }
        prev = cur;
    }
    None
}

// ---------------------------------------------------------------------------
// Localizability study
// ---------------------------------------------------------------------------

/// Configuration of the GPS-like MEO localizability study.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LocalizabilityStudyConfig {
    pub sat_counts: Vec<u32>,
    pub altitudes_km: Vec<f64>,
    pub k_values: Vec<u32>,
    /// Satellites per orbit; a remainder shares one deficient orbit.
    pub sats_per_orbit: u32,
    pub link: LinkParams,
    pub sr: SRParams,
    /// Use the Gamma moment-matched stand-in instead of the exact
    /// shadowed-Rician sampler.
    pub use_gamma_approx: bool,
    pub subset: LocalizabilitySubset,
    pub trials: u64,
    pub seed: u64,
    pub r_earth_km: f64,
}

impl Default for LocalizabilityStudyConfig {
    fn default() -> Self {
        LocalizabilityStudyConfig {
            sat_counts: (24..=31).collect(),
            altitudes_km: alloc::vec![10_000.0, 20_000.0],
            k_values: alloc::vec![4, 6],
            sats_per_orbit: 4,
            link: LinkParams::gps_l1_defaults(),
            sr: SRParams::light_shadowing(),
            use_gamma_approx: false,
            subset: LocalizabilitySubset::DetectionCount,
            trials: 100_000,
            seed: 42,
            r_earth_km: EARTH_RADIUS_KM,
        }
    }
}

/// One point of the localizability curves.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LocalizabilityCurvePoint {
    pub altitude_km: f64,
    pub k: u32,
    pub n_sats: u32,
    pub result: MetricResult,
}

/// Deterministic per-point seed: chained hashes of altitude bits, K, and
/// satellite count, so every grid point is independent and reproducible in
/// any evaluation order.
pub fn localizability_point_seed(base_seed: u64, altitude_km: f64, k: u32, n_sats: u32) -> u64 {
    let s1 = derive_seed(base_seed, altitude_km.to_bits());
    let s2 = derive_seed(s1, k as u64);
    derive_seed(s2, n_sats as u64)
}

/// Evaluates one localizability grid point.
pub fn localizability_study_point(
    cfg: &LocalizabilityStudyConfig,
    altitude_km: f64,
    k: u32,
    n_sats: u32,
) -> Result<LocalizabilityCurvePoint> {
    let fading = if cfg.use_gamma_approx {
        FadingModel::ShadowedRicianGamma(sr_gamma_approx(&cfg.sr))
    } else {
        FadingModel::ShadowedRician(cfg.sr)
    };
    let mcfg = MetricConfig {
        trials: cfg.trials,
        seed: localizability_point_seed(cfg.seed, altitude_km, k, n_sats),
        association: mc::Association::Nearest,
        visibility: VisibilityRule::default(),
        k,
        interference: mc::Interference::None,
        subset: cfg.subset,
    };
    let shell = cfg.r_earth_km + altitude_km;
    let successes = mc::k_localizability_success_count(
        |seed| sample_dsbpp_total(n_sats, cfg.sats_per_orbit, shell, seed),
        cfg.r_earth_km,
        &cfg.link,
        &fading,
        &mcfg,
        0..cfg.trials,
    )?;
    let n = cfg.trials as f64;
    let p = successes as f64 / n;
    Ok(LocalizabilityCurvePoint {
        altitude_km,
        k,
        n_sats,
        result: MetricResult {
            estimate: p,
            std_error: libm::sqrt(p * (1.0 - p) / n),
            trials: cfg.trials,
            config: mcfg,
        },
    })
}

/// Runs the full localizability study over the configured grid, ordered by
/// altitude, then K, then satellite count.
pub fn run_localizability_study(
    cfg: &LocalizabilityStudyConfig,
) -> Result<Vec<LocalizabilityCurvePoint>> {
    if cfg.sat_counts.is_empty() || cfg.altitudes_km.is_empty() || cfg.k_values.is_empty() {
        return Err(Error::Config("localizability study needs a nonempty grid"));
    }
    if cfg.trials == 0 {
        return Err(Error::Config("at least one trial required"));
    }
    cfg.link.validate()?;
    let mut out = Vec::new();
    for &alt in &cfg.altitudes_km {
        for &k in &cfg.k_values {
            for &n in &cfg.sat_counts {
                out.push(localizability_study_point(cfg, alt, k, n)?);
            }
        }
    }
    Ok(out)
}
