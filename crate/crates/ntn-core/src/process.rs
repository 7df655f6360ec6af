//! Seeded generation of the seven spherical point-process constellation
//! models, plus cap-restricted BPP sampling for the planar-error study.
//!
//! Every sampler is a pure function of `(parameters, shell radius, seed)`:
//! identical inputs give bit-identical output. Draw order within each sampler
//! is fixed and documented where it matters.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::geometry::SpacePoint;
use crate::rng::{substream, SimRng};

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;
const PI: f64 = core::f64::consts::PI;

/// Which of the seven point-process models to draw from, with its parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "model", rename_all = "kebab-case"))]
pub enum ProcessSpec {
    /// Homogeneous binomial point process: fixed count, uniform on the sphere.
    HomBpp { count: u32 },
    /// Homogeneous Poisson point process: Poisson-distributed count
    /// (density λ = mean_count / (4πR²)), positions as in `HomBpp`.
    HomPpp { mean_count: f64 },
    /// Non-homogeneous BPP with the polar angle uniform on [0, π):
    /// clusters points toward the poles.
    NonHomBpp { count: u32 },
    /// Cox point process: Poisson orbit count, random orbit orientations,
    /// Poisson satellites per orbit.
    Cpp { mean_orbits: f64, mean_sats_per_orbit: f64 },
    /// Dual-stochastic BPP: fixed orbit count with random orientations,
    /// fixed satellites per orbit at random phases.
    Dsbpp { orbits: u32, sats_per_orbit: u32 },
    /// Orbit geometry model: equally spaced orbit planes at a given
    /// inclination. In-orbit placement is seeded-random by default; set
    /// `equal_phase` for equal in-orbit spacing (random common phase).
    Ogm { orbits: u32, inclination_rad: f64, sats_per_orbit: u32, equal_phase: bool },
    /// Single orbit at a given inclination with a random plane azimuth.
    Plp { inclination_rad: f64, sats: u32 },
}

impl ProcessSpec {
    /// Expected number of points in one realization.
    pub fn expected_count(&self) -> f64 {
        match *self {
            ProcessSpec::HomBpp { count } | ProcessSpec::NonHomBpp { count } => count as f64,
            ProcessSpec::HomPpp { mean_count } => mean_count,
            ProcessSpec::Cpp { mean_orbits, mean_sats_per_orbit } => {
                mean_orbits * mean_sats_per_orbit
            }
            ProcessSpec::Dsbpp { orbits, sats_per_orbit } => (orbits * sats_per_orbit) as f64,
            ProcessSpec::Ogm { orbits, sats_per_orbit, .. } => (orbits * sats_per_orbit) as f64,
            ProcessSpec::Plp { sats, .. } => sats as f64,
        }
    }
}

/// One realized constellation: the generating spec, the shell, the seed, and
/// the points (all with `radius_km` equal to `shell_radius_km`).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstellationSample {
    pub shell_radius_km: f64,
    pub points: Vec<SpacePoint>,
    pub spec: ProcessSpec,
    pub seed: u64,
}

/// Orientation of one orbital plane: the polar angle of its normal vector
/// and the azimuth of the plane, plus the orbit radius.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrbitSpec {
    pub inclination_rad: f64,
    pub azimuth_rad: f64,
    pub radius_km: f64,
}

impl OrbitSpec {
    /// Unit normal of the orbit plane: Rz(azimuth)·Rx(inclination)·ẑ.
    pub fn normal(&self) -> [f64; 3] {
        let (si, ci) = (libm::sin(self.inclination_rad), libm::cos(self.inclination_rad));
        let (sa, ca) = (libm::sin(self.azimuth_rad), libm::cos(self.azimuth_rad));
        [sa * si, -ca * si, ci]
    }

    /// Maps an in-plane angle to a point on the tilted orbit circle:
    /// Rz(azimuth)·Rx(inclination)·[R cos ψ, R sin ψ, 0].
    pub fn point_at(&self, in_plane_rad: f64) -> SpacePoint {
        let r = self.radius_km;
        let (sp, cp) = (libm::sin(in_plane_rad), libm::cos(in_plane_rad));
        let (si, ci) = (libm::sin(self.inclination_rad), libm::cos(self.inclination_rad));
        let (sa, ca) = (libm::sin(self.azimuth_rad), libm::cos(self.azimuth_rad));
        // After Rx: (x, y ci, y si) with x = R cos ψ, y = R sin ψ.
        let x1 = r * cp;
        let y1 = r * sp * ci;
        let z1 = r * sp * si;
        SpacePoint::from_cartesian([ca * x1 - sa * y1, sa * x1 + ca * y1, z1])
    }
}

/// Draws one realization of `spec` on the shell of radius `radius_km`.
pub fn sample(spec: &ProcessSpec, radius_km: f64, seed: u64) -> ConstellationSample {
    match *spec {
        ProcessSpec::HomBpp { count } => sample_hom_bpp(count, radius_km, seed),
        ProcessSpec::HomPpp { mean_count } => sample_hom_ppp(mean_count, radius_km, seed),
        ProcessSpec::NonHomBpp { count } => sample_nonhom_bpp(count, radius_km, seed),
        ProcessSpec::Cpp { mean_orbits, mean_sats_per_orbit } => {
            sample_cpp(mean_orbits, mean_sats_per_orbit, radius_km, seed)
        }
        ProcessSpec::Dsbpp { orbits, sats_per_orbit } => {
            sample_dsbpp(orbits, sats_per_orbit, radius_km, seed)
        }
        ProcessSpec::Ogm { orbits, inclination_rad, sats_per_orbit, equal_phase } => {
            sample_ogm(orbits, inclination_rad, sats_per_orbit, equal_phase, radius_km, seed)
        }
        ProcessSpec::Plp { inclination_rad, sats } => {
            sample_plp(inclination_rad, sats, radius_km, seed)
        }
    }
}

/// Uniform point on the sphere: azimuth = 2πu, polar = arccos(1 − 2v),
/// drawing u then v.
fn uniform_sphere_point(radius_km: f64, rng: &mut SimRng) -> SpacePoint {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    SpacePoint::new(radius_km, libm::acos(1.0 - 2.0 * v), TWO_PI * u)
}

/// Homogeneous BPP: exactly `count` i.i.d. uniform points on the shell.
pub fn sample_hom_bpp(count: u32, radius_km: f64, seed: u64) -> ConstellationSample {
    let mut rng = substream(seed, 0);
    let points = (0..count).map(|_| uniform_sphere_point(radius_km, &mut rng)).collect();
    ConstellationSample {
        shell_radius_km: radius_km,
        points,
        spec: ProcessSpec::HomBpp { count },
        seed,
    }
}

fn poisson_count(mean: f64, rng: &mut SimRng) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let p = Poisson::new(mean).expect("positive finite mean");
    let v: f64 = p.sample(rng);
    v as u64
}

/// Homogeneous PPP: Poisson(mean_count) points, positions as in the BPP.
pub fn sample_hom_ppp(mean_count: f64, radius_km: f64, seed: u64) -> ConstellationSample {
    let mut rng = substream(seed, 0);
    let n = poisson_count(mean_count, &mut rng);
    let points = (0..n).map(|_| uniform_sphere_point(radius_km, &mut rng)).collect();
    ConstellationSample {
        shell_radius_km: radius_km,
        points,
        spec: ProcessSpec::HomPpp { mean_count },
        seed,
    }
}

/// Non-homogeneous BPP: polar angle uniform on [0, π), azimuth uniform.
/// Clusters points near the poles relative to the homogeneous BPP.
pub fn sample_nonhom_bpp(count: u32, radius_km: f64, seed: u64) -> ConstellationSample {
    let mut rng = substream(seed, 0);
    let points = (0..count)
        .map(|_| {
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            SpacePoint::new(radius_km, PI * v, TWO_PI * u)
        })
        .collect();
    ConstellationSample {
        shell_radius_km: radius_km,
        points,
        spec: ProcessSpec::NonHomBpp { count },
        seed,
    }
}

/// Cox point process, with per-orbit detail.
///
/// Orbit count ~ Poisson(mean_orbits); each orbit has longitude uniform on
/// [0, π) and inclination with density sin(θ)/2 (the rectangle intensity of
/// the orbit process factorizes, so inverse-CDF sampling is exact); each
/// orbit carries Poisson(mean_sats) satellites uniform on its circle.
pub fn sample_cpp_detailed(
    mean_orbits: f64,
    mean_sats: f64,
    radius_km: f64,
    seed: u64,
) -> (ConstellationSample, Vec<(OrbitSpec, u32)>) {
    let mut rng = substream(seed, 0);
    let n_orbits = poisson_count(mean_orbits, &mut rng);
    let mut points = Vec::new();
    let mut orbits = Vec::with_capacity(n_orbits as usize);
    for _ in 0..n_orbits {
        let lon: f64 = rng.random::<f64>() * PI;
        let inc = libm::acos(1.0 - 2.0 * rng.random::<f64>());
        let orbit = OrbitSpec { inclination_rad: inc, azimuth_rad: lon, radius_km };
        let n_sats = poisson_count(mean_sats, &mut rng) as u32;
        for _ in 0..n_sats {
            let psi: f64 = rng.random::<f64>() * TWO_PI;
            points.push(orbit.point_at(psi));
        }
        orbits.push((orbit, n_sats));
    }
    let sample = ConstellationSample {
        shell_radius_km: radius_km,
        points,
        spec: ProcessSpec::Cpp { mean_orbits, mean_sats_per_orbit: mean_sats },
        seed,
    };
    (sample, orbits)
}

/// Cox point process (points only).
pub fn sample_cpp(mean_orbits: f64, mean_sats: f64, radius_km: f64, seed: u64) -> ConstellationSample {
    sample_cpp_detailed(mean_orbits, mean_sats, radius_km, seed).0
}

/// DSBPP with per-orbit detail; draw order mirrors its generation algorithm:
/// all inclinations first (arccos(1 − 2u)), then all plane azimuths
/// (uniform [0, 2π)), then the in-plane angles orbit by orbit.
pub fn sample_dsbpp_detailed(
    orbits: u32,
    sats_per_orbit: u32,
    radius_km: f64,
    seed: u64,
) -> (ConstellationSample, Vec<(OrbitSpec, u32)>) {
    let spec = ProcessSpec::Dsbpp { orbits, sats_per_orbit };
    let (points, detail) =
        dsbpp_points(orbits, |_| sats_per_orbit, radius_km, substream(seed, 0));
    (ConstellationSample { shell_radius_km: radius_km, points, spec, seed }, detail)
}

fn dsbpp_points(
    orbits: u32,
    sats_in_orbit: impl Fn(u32) -> u32,
    radius_km: f64,
    mut rng: SimRng,
) -> (Vec<SpacePoint>, Vec<(OrbitSpec, u32)>) {
    let incs: Vec<f64> =
        (0..orbits).map(|_| libm::acos(1.0 - 2.0 * rng.random::<f64>())).collect();
    let azims: Vec<f64> = (0..orbits).map(|_| rng.random::<f64>() * TWO_PI).collect();
    let mut points = Vec::new();
    let mut detail = Vec::with_capacity(orbits as usize);
    for i in 0..orbits {
        let orbit = OrbitSpec {
            inclination_rad: incs[i as usize],
            azimuth_rad: azims[i as usize],
            radius_km,
        };
        let n = sats_in_orbit(i);
        for _ in 0..n {
            let psi: f64 = rng.random::<f64>() * TWO_PI;
            points.push(orbit.point_at(psi));
        }
        detail.push((orbit, n));
    }
    (points, detail)
}

/// DSBPP: `orbits` random planes (inclination density sin/2, azimuth uniform)
/// with `sats_per_orbit` satellites at uniform random phases on each.
pub fn sample_dsbpp(orbits: u32, sats_per_orbit: u32, radius_km: f64, seed: u64) -> ConstellationSample {
    sample_dsbpp_detailed(orbits, sats_per_orbit, radius_km, seed).0
}

/// DSBPP carrying `total_sats` satellites in orbits of `sats_per_orbit`; if
/// the total is not a multiple, one final deficient orbit holds the
/// remainder (GPS-style layout used by the localizability study).
pub fn sample_dsbpp_total(
    total_sats: u32,
    sats_per_orbit: u32,
    radius_km: f64,
    seed: u64,
) -> ConstellationSample {
    assert!(sats_per_orbit > 0, "sats_per_orbit must be positive");
    let full = total_sats / sats_per_orbit;
    let rem = total_sats % sats_per_orbit;
    let orbits = full + u32::from(rem > 0);
    let (points, _) = dsbpp_points(
        orbits,
        |i| if i < full { sats_per_orbit } else { rem },
        radius_km,
        substream(seed, 0),
    );
    ConstellationSample {
        shell_radius_km: radius_km,
        points,
        spec: ProcessSpec::Dsbpp { orbits, sats_per_orbit },
        seed,
    }
}

/// Orbit geometry model with per-orbit detail: plane azimuths equally spaced
/// over [0, 2π), every plane at the given inclination.
pub fn sample_ogm_detailed(
    orbits: u32,
    inclination_rad: f64,
    sats_per_orbit: u32,
    equal_phase: bool,
    radius_km: f64,
    seed: u64,
) -> (ConstellationSample, Vec<(OrbitSpec, u32)>) {
    let mut rng = substream(seed, 0);
    let mut points = Vec::with_capacity((orbits as usize) * (sats_per_orbit as usize));
    let mut detail = Vec::with_capacity(orbits as usize);
    for i in 0..orbits {
        let orbit = OrbitSpec {
            inclination_rad,
            azimuth_rad: TWO_PI * i as f64 / orbits as f64,
            radius_km,
        };
        if equal_phase {
            let phase: f64 = rng.random::<f64>() * TWO_PI;
            for j in 0..sats_per_orbit {
                points.push(orbit.point_at(phase + TWO_PI * j as f64 / sats_per_orbit as f64));
            }
        } else {
            for _ in 0..sats_per_orbit {
                points.push(orbit.point_at(rng.random::<f64>() * TWO_PI));
            }
        }
        detail.push((orbit, sats_per_orbit));
    }
    let spec = ProcessSpec::Ogm { orbits, inclination_rad, sats_per_orbit, equal_phase };
    (ConstellationSample { shell_radius_km: radius_km, points, spec, seed }, detail)
}

/// Orbit geometry model (points only).
pub fn sample_ogm(
    orbits: u32,
    inclination_rad: f64,
    sats_per_orbit: u32,
    equal_phase: bool,
    radius_km: f64,
    seed: u64,
) -> ConstellationSample {
    sample_ogm_detailed(orbits, inclination_rad, sats_per_orbit, equal_phase, radius_km, seed).0
}

/// Poisson line process: a single orbit at the given inclination with a
/// uniform random plane azimuth and satellites uniform on the circle.
pub fn sample_plp_detailed(
    inclination_rad: f64,
    sats: u32,
    radius_km: f64,
    seed: u64,
) -> (ConstellationSample, Vec<(OrbitSpec, u32)>) {
    let mut rng = substream(seed, 0);
    let orbit = OrbitSpec {
        inclination_rad,
        azimuth_rad: rng.random::<f64>() * TWO_PI,
        radius_km,
    };
    let points = (0..sats).map(|_| orbit.point_at(rng.random::<f64>() * TWO_PI)).collect();
    let spec = ProcessSpec::Plp { inclination_rad, sats };
    (ConstellationSample { shell_radius_km: radius_km, points, spec, seed }, alloc::vec![(orbit, sats)])
}

/// Poisson line process (points only).
pub fn sample_plp(inclination_rad: f64, sats: u32, radius_km: f64, seed: u64) -> ConstellationSample {
    sample_plp_detailed(inclination_rad, sats, radius_km, seed).0
}

/// Homogeneous BPP restricted to the polar cap of half-angle
/// `cap_half_angle_rad`: polar angle arccos(1 − u·(1 − cos θ_cap)), azimuth
/// uniform. Returns the underlying polar uniforms so a planar twin can be
/// built from the same draws (shared-randomness coupling).
///
/// Draw order per point: polar uniform u, then azimuth uniform.
pub fn sample_cap_bpp(
    count: u32,
    cap_half_angle_rad: f64,
    radius_km: f64,
    seed: u64,
) -> (ConstellationSample, Vec<f64>) {
    assert!(
        cap_half_angle_rad > 0.0 && cap_half_angle_rad <= PI,
        "cap half-angle must be in (0, pi]"
    );
    let mut rng = substream(seed, 0);
    let span = 1.0 - libm::cos(cap_half_angle_rad);
    let mut uniforms = Vec::with_capacity(count as usize);
    let points = (0..count)
        .map(|_| {
            let u: f64 = rng.random();
            let az: f64 = rng.random::<f64>() * TWO_PI;
            uniforms.push(u);
            SpacePoint::new(radius_km, libm::acos(1.0 - u * span), az)
        })
        .collect();
    let sample = ConstellationSample {
        shell_radius_km: radius_km,
        points,
        spec: ProcessSpec::HomBpp { count },
        seed,
    };
    (sample, uniforms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cap_fraction, CentralAngle};
    use crate::stats::ks_statistic;

    const R: f64 = 6871.0;

    fn polar_angles(s: &ConstellationSample) -> Vec<f64> {
        s.points.iter().map(|p| p.polar_rad).collect()
    }

    #[test]
    fn bpp_count_contract_and_empty() {
        assert!(sample_hom_bpp(0, R, 1).points.is_empty());
        assert_eq!(sample_hom_bpp(137, R, 1).points.len(), 137);
    }

    #[test]
    fn samplers_are_bit_deterministic() {
        let specs = [
            ProcessSpec::HomBpp { count: 50 },
            ProcessSpec::HomPpp { mean_count: 30.0 },
            ProcessSpec::NonHomBpp { count: 50 },
            ProcessSpec::Cpp { mean_orbits: 10.0, mean_sats_per_orbit: 5.0 },
            ProcessSpec::Dsbpp { orbits: 6, sats_per_orbit: 4 },
            ProcessSpec::Ogm { orbits: 5, inclination_rad: 0.9, sats_per_orbit: 4, equal_phase: false },
            ProcessSpec::Plp { inclination_rad: 0.9, sats: 12 },
        ];
        for spec in &specs {
            let a = sample(spec, R, 99);
            let b = sample(spec, R, 99);
            assert_eq!(a, b, "{spec:?} not deterministic");
            let c = sample(spec, R, 100);
            assert!(a.points.len() != c.points.len() || a.points != c.points);
        }
    }

    #[test]
    fn all_points_on_shell() {
        for spec in [
            ProcessSpec::HomBpp { count: 200 },
            ProcessSpec::Cpp { mean_orbits: 12.0, mean_sats_per_orbit: 6.0 },
            ProcessSpec::Dsbpp { orbits: 8, sats_per_orbit: 5 },
            ProcessSpec::Ogm { orbits: 4, inclination_rad: 0.93, sats_per_orbit: 7, equal_phase: true },
        ] {
            let s = sample(&spec, R, 3);
            for p in &s.points {
                let [x, y, z] = p.to_cartesian();
                let n = (x * x + y * y + z * z).sqrt();
                assert!((n - R).abs() < 1e-9 * R, "{spec:?}: radius {n}");
            }
        }
    }

    #[test]
    fn hom_bpp_polar_cdf_matches_closed_form() {
        let s = sample_hom_bpp(100_000, R, 7);
        let mut polar = polar_angles(&s);
        polar.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ks = ks_statistic(&polar, |t| 0.5 * (1.0 - t.cos()));
        assert!(ks < 0.01, "KS = {ks}");
    }

    #[test]
    fn hom_bpp_cap_counts_match_binomial() {
        // Fraction of points in a fixed cap ≈ cap fraction within 3 SE.
        let n = 100_000u32;
        let s = sample_hom_bpp(n, R, 11);
        for theta in [0.3f64, 1.0, 2.2] {
            let p = cap_fraction(CentralAngle::new(theta).unwrap());
            let hits = s.points.iter().filter(|q| q.polar_rad <= theta).count() as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!(
                (hits / n as f64 - p).abs() <= 3.0 * se,
                "theta={theta}: {} vs {p}",
                hits / n as f64
            );
        }
    }

    #[test]
    fn ppp_zero_mean_always_empty() {
        for seed in 0..20 {
            assert!(sample_hom_ppp(0.0, R, seed).points.is_empty());
        }
    }

    #[test]
    fn ppp_count_moments() {
        let mean = 40.0;
        let trials = 10_000;
        let counts: Vec<f64> =
            (0..trials).map(|s| sample_hom_ppp(mean, R, s).points.len() as f64).collect();
        let m = counts.iter().sum::<f64>() / trials as f64;
        // Poisson: Var = mean; SE of the sample mean = sqrt(mean/trials).
        let se_mean = (mean / trials as f64).sqrt();
        assert!((m - mean).abs() <= 3.0 * se_mean, "mean {m}");
        let var = counts.iter().map(|c| (c - m) * (c - m)).sum::<f64>() / (trials - 1) as f64;
        // SE of the sample variance of a Poisson ≈ sqrt((2λ² + λ)/n).
        let se_var = ((2.0 * mean * mean + mean) / trials as f64).sqrt();
        assert!((var - mean).abs() <= 5.0 * se_var, "var {var}");
    }

    #[test]
    fn nonhom_bpp_polar_cdf_linear() {
        let s = sample_nonhom_bpp(100_000, R, 13);
        let mut polar = polar_angles(&s);
        polar.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ks = ks_statistic(&polar, |t| t / PI);
        assert!(ks < 0.01, "KS = {ks}");
    }

    #[test]
    fn nonhom_bpp_clusters_at_poles() {
        // Count ratio in a 10° polar cap vs the homogeneous BPP.
        let cap = 10f64.to_radians();
        let n = 100_000u32;
        let nonhom = sample_nonhom_bpp(n, R, 17);
        let hom = sample_hom_bpp(n, R, 17);
        let c_non = nonhom.points.iter().filter(|p| p.polar_rad <= cap).count() as f64;
        let c_hom = hom.points.iter().filter(|p| p.polar_rad <= cap).count() as f64;
        // Expected: n·cap/π vs n·(1−cos cap)/2 — several times more near the pole.
        let se = (c_non + c_hom).sqrt();
        assert!(c_non - c_hom > 3.0 * se, "non-hom {c_non} vs hom {c_hom}");
    }

    #[test]
    fn cpp_empty_when_no_orbits() {
        assert!(sample_cpp(0.0, 10.0, R, 4).points.is_empty());
    }

    #[test]
    fn cpp_expected_total_points() {
        let (mo, ms) = (6.0, 4.0);
        let trials = 10_000u64;
        let total: f64 =
            (0..trials).map(|s| sample_cpp(mo, ms, R, s).points.len() as f64).sum();
        let mean = total / trials as f64;
        // Total count is a compound Poisson: Var = λ_orb·λ_sat·(1 + λ_sat).
        let want = mo * ms;
        let se = (mo * ms * (1.0 + ms) / trials as f64).sqrt();
        assert!((mean - want).abs() <= 3.0 * se, "mean {mean} vs {want}");
    }

    #[test]
    fn cpp_ensemble_polar_density_is_homogeneous() {
        // Aggregated over seeds, satellite polar angles follow sin(θ)/2.
        let mut polar = Vec::new();
        for s in 0..10_000 {
            polar.extend(polar_angles(&sample_cpp(5.0, 4.0, R, s)));
        }
        polar.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ks = ks_statistic(&polar, |t| 0.5 * (1.0 - t.cos()));
        assert!(ks < 0.01, "KS = {ks} over {} points", polar.len());
    }

    #[test]
    fn dsbpp_empty_and_count() {
        assert!(sample_dsbpp(0, 4, R, 1).points.is_empty());
        assert_eq!(sample_dsbpp(7, 4, R, 1).points.len(), 28);
    }

    #[test]
    fn dsbpp_points_lie_on_their_orbit_planes() {
        let (s, detail) = sample_dsbpp_detailed(9, 5, R, 21);
        let mut idx = 0;
        for (orbit, n) in detail {
            let nrm = orbit.normal();
            for _ in 0..n {
                let p = s.points[idx].to_cartesian();
                let dot = p[0] * nrm[0] + p[1] * nrm[1] + p[2] * nrm[2];
                assert!(dot.abs() < 1e-9 * R, "point {idx} off-plane by {dot}");
                idx += 1;
            }
        }
        assert_eq!(idx, s.points.len());
    }

    #[test]
    fn dsbpp_ensemble_polar_cdf_homogeneous() {
        let mut polar = Vec::new();
        for s in 0..10_000 {
            polar.extend(polar_angles(&sample_dsbpp(5, 4, R, s)));
        }
        polar.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ks = ks_statistic(&polar, |t| 0.5 * (1.0 - t.cos()));
        assert!(ks < 0.01, "KS = {ks}");
    }

    #[test]
    fn dsbpp_total_remainder_orbit() {
        let s = sample_dsbpp_total(26, 4, R, 5);
        assert_eq!(s.points.len(), 26);
        let s2 = sample_dsbpp_total(24, 4, R, 5);
        assert_eq!(s2.points.len(), 24);
    }

    #[test]
    fn ogm_latitude_bound() {
        let inc = 53f64.to_radians();
        let s = sample_ogm(25, inc, 20, false, R, 2);
        assert_eq!(s.points.len(), 500);
        for p in &s.points {
            let lat = (PI / 2.0 - p.polar_rad).abs();
            assert!(lat <= inc + 1e-9, "latitude {lat}");
        }
    }

    #[test]
    fn ogm_single_orbit_matches_plp_geometry() {
        // One OGM orbit is a PLP with plane azimuth 0: all points coplanar
        // with the expected normal.
        let inc = 1.1;
        let (s, detail) = sample_ogm_detailed(1, inc, 30, false, R, 8);
        assert_eq!(detail.len(), 1);
        assert_eq!(detail[0].0.azimuth_rad, 0.0);
        let nrm = detail[0].0.normal();
        for p in &s.points {
            let c = p.to_cartesian();
            assert!((c[0] * nrm[0] + c[1] * nrm[1] + c[2] * nrm[2]).abs() < 1e-9 * R);
        }
    }

    #[test]
    fn ogm_plane_membership_with_equal_phase() {
        let (s, detail) = sample_ogm_detailed(6, 0.8, 5, true, R, 3);
        let mut idx = 0;
        for (orbit, n) in detail {
            let nrm = orbit.normal();
            for _ in 0..n {
                let p = s.points[idx].to_cartesian();
                assert!((p[0] * nrm[0] + p[1] * nrm[1] + p[2] * nrm[2]).abs() < 1e-9 * R);
                idx += 1;
            }
        }
    }

    #[test]
    fn plp_empty_and_polar_orbit() {
        assert!(sample_plp(0.9, 0, R, 1).points.is_empty());
        // Polar orbit (inclination π/2): plane normal is horizontal, so the
        // orbit passes through both poles.
        let (s, detail) = sample_plp_detailed(PI / 2.0, 500, R, 6);
        let nrm = detail[0].0.normal();
        assert!(nrm[2].abs() < 1e-12);
        for p in &s.points {
            let c = p.to_cartesian();
            assert!((c[0] * nrm[0] + c[1] * nrm[1] + c[2] * nrm[2]).abs() < 1e-9 * R);
        }
    }

    #[test]
    fn cap_bpp_support_and_endpoints() {
        let cap = 0.4;
        let (s, uniforms) = sample_cap_bpp(5000, cap, R, 9);
        assert_eq!(uniforms.len(), 5000);
        for (p, u) in s.points.iter().zip(&uniforms) {
            assert!(p.polar_rad <= cap + 1e-12);
            let want = (1.0 - u * (1.0 - cap.cos())).acos();
            assert!((p.polar_rad - want).abs() < 1e-12);
        }
        // u = 0 ⇒ apex, u = 1 ⇒ rim.
        assert_eq!((1.0f64 - 0.0 * (1.0 - cap.cos())).acos(), 0.0);
        assert!(((1.0f64 - 1.0 * (1.0 - cap.cos())).acos() - cap).abs() < 1e-12);
    }

    #[test]
    fn cap_bpp_conditional_cdf() {
        let cap = 0.7;
        let (s, _) = sample_cap_bpp(100_000, cap, R, 23);
        let mut polar = polar_angles(&s);
        polar.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let denom = 1.0 - cap.cos();
        let ks = ks_statistic(&polar, |t| (1.0 - t.cos()) / denom);
        assert!(ks < 0.01, "KS = {ks}");
    }

    #[test]
    fn homogeneous_models_rotation_invariant_cap_counts() {
        // Cap at the pole vs the same cap rotated to a fixed odd direction:
        // over many seeds the mean counts agree within 3 SE.
        use crate::geometry::rotate_to_pole;
        let theta = 0.6f64;
        let axis = SpacePoint::new(R, 1.234, 4.321);
        let specs = [
            ProcessSpec::HomBpp { count: 40 },
            ProcessSpec::HomPpp { mean_count: 40.0 },
            ProcessSpec::Cpp { mean_orbits: 8.0, mean_sats_per_orbit: 5.0 },
            ProcessSpec::Dsbpp { orbits: 10, sats_per_orbit: 4 },
        ];
        let trials = 10_000u64;
        for spec in &specs {
            let mut at_pole = 0.0f64;
            let mut rotated = 0.0f64;
            let mut sq_pole = 0.0f64;
            let mut sq_rot = 0.0f64;
            for seed in 0..trials {
                let s = sample(spec, R, seed);
                let a = s.points.iter().filter(|p| p.polar_rad <= theta).count() as f64;
                // Count in the cap centered on `axis` = count at the pole
                // after rotating the sample so `axis` goes to +z.
                let rot = rotate_to_pole(&s.points, &axis);
                let b = rot.iter().filter(|p| p.polar_rad <= theta).count() as f64;
                at_pole += a;
                rotated += b;
                sq_pole += a * a;
                sq_rot += b * b;
            }
            let n = trials as f64;
            let (ma, mb) = (at_pole / n, rotated / n);
            let va = sq_pole / n - ma * ma;
            let vb = sq_rot / n - mb * mb;
            let se = ((va + vb) / n).sqrt();
            assert!((ma - mb).abs() <= 3.0 * se, "{spec:?}: {ma} vs {mb} (se {se})");
        }
    }

    #[test]
    fn expected_counts_match_spec() {
        assert_eq!(ProcessSpec::HomBpp { count: 24 }.expected_count(), 24.0);
        assert_eq!(
            ProcessSpec::Cpp { mean_orbits: 5.0, mean_sats_per_orbit: 4.0 }.expected_count(),
            20.0
        );
        assert_eq!(ProcessSpec::Dsbpp { orbits: 6, sats_per_orbit: 4 }.expected_count(), 24.0);
    }

    #[test]
    fn orbit_normal_is_unit_and_orthogonal_to_orbit() {
        let o = OrbitSpec { inclination_rad: 0.7, azimuth_rad: 2.1, radius_km: R };
        let n = o.normal();
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
        for k in 0..12 {
            let p = o.point_at(TWO_PI * k as f64 / 12.0).to_cartesian();
            assert!((p[0] * n[0] + p[1] * n[1] + p[2] * n[2]).abs() < 1e-9 * R);
        }
    }
}
