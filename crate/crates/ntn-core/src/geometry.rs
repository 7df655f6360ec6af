//! Exact geometry on and above a sphere: angle/distance conversions, cap
//! areas, horizon computation, and the coordinate transforms every other
//! module builds on.
//!
//! Angles are radians internally. Distances are kilometers. The Earth radius
//! defaults to [`EARTH_RADIUS_KM`] but is an explicit parameter everywhere.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Mean Earth radius in kilometers.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;
const PI: f64 = core::f64::consts::PI;

/// A position on or above the Earth sphere, in spherical coordinates.
///
/// `polar` is measured from the +z axis (0 at the north pole), `azimuth`
/// counterclockwise from +x in [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpacePoint {
    /// Distance from the Earth center, km.
    pub radius_km: f64,
    /// Polar angle in [0, π], rad.
    pub polar_rad: f64,
    /// Azimuth in [0, 2π), rad.
    pub azimuth_rad: f64,
}

impl SpacePoint {
    /// Builds a point, normalizing the azimuth into [0, 2π).
    pub fn new(radius_km: f64, polar_rad: f64, azimuth_rad: f64) -> Self {
        let mut az = libm::fmod(azimuth_rad, TWO_PI);
        if az < 0.0 {
            az += TWO_PI;
        }
        SpacePoint { radius_km, polar_rad, azimuth_rad: az }
    }

    /// Cartesian coordinates `[x, y, z]` in km.
    pub fn to_cartesian(&self) -> [f64; 3] {
        let (sp, cp) = (libm::sin(self.polar_rad), libm::cos(self.polar_rad));
        let (sa, ca) = (libm::sin(self.azimuth_rad), libm::cos(self.azimuth_rad));
        [self.radius_km * sp * ca, self.radius_km * sp * sa, self.radius_km * cp]
    }

    /// Builds a point from Cartesian km coordinates.
    ///
    /// At the poles the azimuth is undefined; it is set to 0 there.
    pub fn from_cartesian(xyz: [f64; 3]) -> Self {
        let [x, y, z] = xyz;
        let r = libm::sqrt(x * x + y * y + z * z);
        if r == 0.0 {
            return SpacePoint { radius_km: 0.0, polar_rad: 0.0, azimuth_rad: 0.0 };
        }
        // atan2 keeps full precision for near-polar points, unlike acos(z/r).
        let polar = libm::atan2(libm::sqrt(x * x + y * y), z);
        let az = if x == 0.0 && y == 0.0 {
            0.0
        } else {
            let a = libm::atan2(y, x);
            if a < 0.0 {
                a + TWO_PI
            } else {
                a
            }
        };
        SpacePoint { radius_km: r, polar_rad: polar, azimuth_rad: az }
    }

    /// Central angle between this point's direction and another's, in rad.
    pub fn central_angle_to(&self, other: &SpacePoint) -> f64 {
        let a = self.to_cartesian();
        let b = other.to_cartesian();
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let cn = libm::sqrt(cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]);
        // atan2 of |a×b| and a·b: precise at both tiny and near-π separations.
        libm::atan2(cn, dot)
    }
}

/// Angle at the Earth center between the user direction and an NTP direction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CentralAngle(f64);

impl CentralAngle {
    /// Builds from radians; must lie in [0, π].
    pub fn new(rad: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&rad) {
            return Err(Error::Domain { what: "central angle must be in [0, pi]", value: rad });
        }
        Ok(CentralAngle(rad))
    }

    /// Builds from degrees.
    pub fn from_degrees(deg: f64) -> Result<Self> {
        Self::new(deg * PI / 180.0)
    }

    pub fn rad(&self) -> f64 {
        self.0
    }

    pub fn degrees(&self) -> f64 {
        self.0 * 180.0 / PI
    }
}

/// Angle at the user between local vertical and the user→NTP ray.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZenithAngle(f64);

impl ZenithAngle {
    pub fn new(rad: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&rad) {
            return Err(Error::Domain { what: "zenith angle must be in [0, pi]", value: rad });
        }
        Ok(ZenithAngle(rad))
    }

    pub fn rad(&self) -> f64 {
        self.0
    }

    pub fn degrees(&self) -> f64 {
        self.0 * 180.0 / PI
    }
}

fn check_radii(r_ntp_km: f64, r_earth_km: f64) -> Result<()> {
    if r_earth_km <= 0.0 {
        return Err(Error::Domain { what: "Earth radius must be positive", value: r_earth_km });
    }
    if r_ntp_km < r_earth_km {
        return Err(Error::Domain { what: "shell radius below Earth radius", value: r_ntp_km });
    }
    Ok(())
}

/// Euclidean user–NTP distance for a user on the Earth surface and an NTP on
/// the shell, by the cosine rule. Result in km.
pub fn central_angle_to_distance(
    theta_c: CentralAngle,
    r_ntp_km: f64,
    r_earth_km: f64,
) -> Result<f64> {
    check_radii(r_ntp_km, r_earth_km)?;
    let c = libm::cos(theta_c.rad());
    Ok(libm::sqrt(
        r_ntp_km * r_ntp_km + r_earth_km * r_earth_km - 2.0 * r_ntp_km * r_earth_km * c,
    ))
}

/// Inverse of [`central_angle_to_distance`]. `d_km` must lie in
/// `[r_ntp − r_earth, r_ntp + r_earth]`.
pub fn distance_to_central_angle(d_km: f64, r_ntp_km: f64, r_earth_km: f64) -> Result<CentralAngle> {
    check_radii(r_ntp_km, r_earth_km)?;
    let lo = r_ntp_km - r_earth_km;
    let hi = r_ntp_km + r_earth_km;
    // Tolerate rounding right at the endpoints.
    let slack = 1e-9 * hi;
    if d_km < lo - slack || d_km > hi + slack {
        return Err(Error::Domain { what: "distance outside feasible interval", value: d_km });
    }
    let c = (r_ntp_km * r_ntp_km + r_earth_km * r_earth_km - d_km * d_km)
        / (2.0 * r_ntp_km * r_earth_km);
    CentralAngle::new(libm::acos(c.clamp(-1.0, 1.0)))
}

/// Zenith angle of an NTP seen from a surface user, as a function of the
/// central angle (sine rule, arccot branch fixed to (0, π) so the result is
/// continuous and increasing in the central angle).
///
/// At `θ_c = 0` the zenith direction is degenerate; by convention 0 is
/// returned.
pub fn central_to_zenith(theta_c: CentralAngle, r_ntp_km: f64, r_earth_km: f64) -> Result<ZenithAngle> {
    check_radii(r_ntp_km, r_earth_km)?;
    let t = theta_c.rad();
    if t == 0.0 {
        return ZenithAngle::new(0.0);
    }
    // cot θ_z = cot θ_c − (R⊕/R_NTP)·√(1 + cot²θ_c); atan2 picks the (0, π) branch.
    let cot = libm::cos(t) / libm::sin(t);
    let x = cot - (r_earth_km / r_ntp_km) * libm::sqrt(1.0 + cot * cot);
    ZenithAngle::new(libm::atan2(1.0, x))
}

/// Fraction of the sphere's surface covered by a cap of half-angle `theta`:
/// (1 − cos θ)/2.
pub fn cap_fraction(theta: CentralAngle) -> f64 {
    0.5 * (1.0 - libm::cos(theta.rad()))
}

/// Maximum central angle at which the user–NTP segment still grazes the Earth
/// surface: arccos(R⊕/R_NTP). NTPs beyond it are below the horizon.
pub fn horizon_central_angle(r_ntp_km: f64, r_earth_km: f64) -> Result<CentralAngle> {
    check_radii(r_ntp_km, r_earth_km)?;
    CentralAngle::new(libm::acos((r_earth_km / r_ntp_km).clamp(-1.0, 1.0)))
}

/// Rigidly rotates `points` so that `reference`'s direction maps onto the +z
/// axis. Pairwise central angles are preserved; afterwards each point's polar
/// angle equals its central angle to the reference.
pub fn rotate_to_pole(points: &[SpacePoint], reference: &SpacePoint) -> Vec<SpacePoint> {
    let r = reference.to_cartesian();
    let n = libm::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    debug_assert!(n > 0.0, "reference must be nonzero");
    let rhat = [r[0] / n, r[1] / n, r[2] / n];

    // Rotation about axis = rhat × ẑ by the angle between rhat and ẑ
    // (Rodrigues). Degenerate when rhat is already ±ẑ.
    let axis = [rhat[1], -rhat[0], 0.0];
    let s = libm::sqrt(axis[0] * axis[0] + axis[1] * axis[1]); // sin of rotation angle
    let c = rhat[2]; // cos of rotation angle

    if s < 1e-15 {
        if c > 0.0 {
            return points.to_vec(); // already at the pole
        }
        // Antipodal: rotate by π about the x-axis.
        return points
            .iter()
            .map(|p| {
                let [x, y, z] = p.to_cartesian();
                SpacePoint::from_cartesian([x, -y, -z])
            })
            .collect();
    }

    let k = [axis[0] / s, axis[1] / s, axis[2] / s];
    let one_c = 1.0 - c;
    points
        .iter()
        .map(|p| {
            let v = p.to_cartesian();
            let kv = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
            let cross = [
                k[1] * v[2] - k[2] * v[1],
                k[2] * v[0] - k[0] * v[2],
                k[0] * v[1] - k[1] * v[0],
            ];
            SpacePoint::from_cartesian([
                v[0] * c + cross[0] * s + k[0] * kv * one_c,
                v[1] * c + cross[1] * s + k[1] * kv * one_c,
                v[2] * c + cross[2] * s + k[2] * kv * one_c,
            ])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec;

    const R_LEO: f64 = 6871.0;
    const RE: f64 = EARTH_RADIUS_KM;

    #[test]
    fn distance_at_zero_and_pi() {
        let d0 = central_angle_to_distance(CentralAngle::new(0.0).unwrap(), R_LEO, RE).unwrap();
        assert!((d0 - 500.0).abs() < 1e-9);
        let dpi = central_angle_to_distance(CentralAngle::new(PI).unwrap(), R_LEO, RE).unwrap();
        assert!((dpi - 13242.0).abs() < 1e-9);
    }

    #[test]
    fn distance_matches_cartesian_norm_oracle() {
        // Place both endpoints explicitly in 3-D and compare norms.
        let theta = PI / 2.0;
        let d = central_angle_to_distance(CentralAngle::new(theta).unwrap(), R_LEO, RE).unwrap();
        let user = [0.0, 0.0, RE];
        let ntp = [R_LEO * theta.sin(), 0.0, R_LEO * theta.cos()];
        let oracle = ((ntp[0] - user[0]).powi(2)
            + (ntp[1] - user[1]).powi(2)
            + (ntp[2] - user[2]).powi(2))
        .sqrt();
        assert!((d - oracle).abs() / oracle < 1e-9);
    }

    #[test]
    fn distance_angle_round_trip_grid() {
        for i in 0..=1000 {
            let theta = PI * i as f64 / 1000.0;
            let d = central_angle_to_distance(CentralAngle::new(theta).unwrap(), R_LEO, RE).unwrap();
            let back = distance_to_central_angle(d, R_LEO, RE).unwrap();
            let d2 = central_angle_to_distance(back, R_LEO, RE).unwrap();
            assert!((d2 - d).abs() <= 1e-9 * d.max(1.0), "theta={theta}: {d} vs {d2}");
        }
    }

    #[test]
    fn distance_monotone_in_angle() {
        let mut prev = -1.0;
        for i in 0..=500 {
            let theta = PI * i as f64 / 500.0;
            let d = central_angle_to_distance(CentralAngle::new(theta).unwrap(), R_LEO, RE).unwrap();
            assert!(d > prev);
            prev = d;
        }
    }

    #[test]
    fn distance_domain_errors() {
        assert!(central_angle_to_distance(CentralAngle::new(0.1).unwrap(), 6000.0, RE).is_err());
        assert!(distance_to_central_angle(499.0, R_LEO, RE).is_err());
        assert!(distance_to_central_angle(13243.0, R_LEO, RE).is_err());
    }

    #[test]
    fn zenith_from_3d_oracle_grid() {
        // Angle at the user between local vertical and the user→NTP vector.
        for i in 1..1000 {
            let theta = PI * i as f64 / 1000.0 * 0.999;
            let tz = central_to_zenith(CentralAngle::new(theta).unwrap(), R_LEO, RE)
                .unwrap()
                .rad();
            let ntp = [R_LEO * theta.sin(), 0.0, R_LEO * theta.cos()];
            let to_ntp = [ntp[0], 0.0, ntp[2] - RE];
            let oracle = to_ntp[0].atan2(to_ntp[2]); // angle from the +z (vertical) axis
            assert!((tz - oracle).abs() < 1e-6, "theta={theta}: {tz} vs {oracle}");
        }
    }

    #[test]
    fn zenith_limits_and_monotonicity() {
        assert_eq!(
            central_to_zenith(CentralAngle::new(0.0).unwrap(), R_LEO, RE).unwrap().rad(),
            0.0
        );
        let mut prev = 0.0;
        for i in 1..200 {
            let theta = PI * i as f64 / 200.0 * 0.999;
            let tz = central_to_zenith(CentralAngle::new(theta).unwrap(), R_LEO, RE)
                .unwrap()
                .rad();
            assert!(tz > prev, "not increasing at {theta}");
            assert!(tz < PI);
            prev = tz;
        }
    }

    #[test]
    fn zenith_at_horizon_is_right_angle() {
        for r in [RE + 20.0, R_LEO, RE + 20000.0] {
            let hor = horizon_central_angle(r, RE).unwrap();
            let tz = central_to_zenith(hor, r, RE).unwrap().rad();
            assert!((tz - PI / 2.0).abs() < 1e-6, "r={r}: {tz}");
        }
    }

    #[test]
    fn cap_fraction_values_and_symmetry() {
        assert_eq!(cap_fraction(CentralAngle::new(0.0).unwrap()), 0.0);
        assert!((cap_fraction(CentralAngle::new(PI).unwrap()) - 1.0).abs() < 1e-15);
        assert!((cap_fraction(CentralAngle::new(PI / 2.0).unwrap()) - 0.5).abs() < 1e-15);
        for i in 0..=100 {
            let t = PI * i as f64 / 100.0;
            let a = cap_fraction(CentralAngle::new(t).unwrap());
            let b = cap_fraction(CentralAngle::new(PI - t).unwrap());
            assert!((a + b - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn horizon_limits() {
        assert_eq!(horizon_central_angle(RE, RE).unwrap().rad(), 0.0);
        let far = horizon_central_angle(1e12, RE).unwrap().rad();
        assert!((far - PI / 2.0).abs() < 1e-5);
    }

    #[test]
    fn horizon_ray_is_tangent_to_sphere() {
        // The user→NTP segment at the horizon angle grazes the sphere: the
        // closest point of the segment's line to the Earth center sits at
        // distance R⊕.
        let hor = horizon_central_angle(R_LEO, RE).unwrap().rad();
        assert!((hor - 0.383851).abs() < 5e-4);
        let user = [0.0, 0.0, RE];
        let ntp = [R_LEO * hor.sin(), 0.0, R_LEO * hor.cos()];
        let d = [ntp[0] - user[0], ntp[1] - user[1], ntp[2] - user[2]];
        let dn = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        let u = [d[0] / dn, d[1] / dn, d[2] / dn];
        let t = -(user[0] * u[0] + user[1] * u[1] + user[2] * u[2]);
        let closest = [user[0] + t * u[0], user[1] + t * u[1], user[2] + t * u[2]];
        let dist = (closest[0] * closest[0] + closest[1] * closest[1] + closest[2] * closest[2])
            .sqrt();
        assert!((dist - RE).abs() < 1e-6 * RE, "tangency distance {dist}");
    }

    #[test]
    fn spherical_cartesian_round_trip() {
        let pts = [
            SpacePoint::new(R_LEO, 0.3, 1.0),
            SpacePoint::new(R_LEO, 2.9, 6.1),
            SpacePoint::new(RE, PI / 2.0, 0.0),
            SpacePoint::new(1.0, 1e-8, 3.0),
        ];
        for p in pts {
            let q = SpacePoint::from_cartesian(p.to_cartesian());
            assert!((q.radius_km - p.radius_km).abs() < 1e-9 * p.radius_km);
            assert!((q.polar_rad - p.polar_rad).abs() < 1e-9);
            let da = (q.azimuth_rad - p.azimuth_rad).abs();
            assert!(da < 1e-6 || (TWO_PI - da) < 1e-6, "azimuth {} vs {}", q.azimuth_rad, p.azimuth_rad);
        }
        // Pole degeneracy: azimuth defined as 0.
        let pole = SpacePoint::from_cartesian([0.0, 0.0, 42.0]);
        assert_eq!(pole.azimuth_rad, 0.0);
        assert_eq!(pole.polar_rad, 0.0);
    }

    #[test]
    fn rotate_to_pole_identity_when_reference_at_pole() {
        let reference = SpacePoint::new(R_LEO, 0.0, 0.0);
        let pts = vec![SpacePoint::new(R_LEO, 1.0, 2.0), SpacePoint::new(R_LEO, 0.5, 4.0)];
        let rotated = rotate_to_pole(&pts, &reference);
        for (a, b) in pts.iter().zip(rotated.iter()) {
            assert!((a.polar_rad - b.polar_rad).abs() < 1e-12);
            assert!((a.azimuth_rad - b.azimuth_rad).abs() < 1e-12);
        }
    }

    #[test]
    fn rotate_to_pole_preserves_pairwise_angles() {
        // Deterministic pseudo-random points via a simple LCG.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let pts: Vec<SpacePoint> = (0..100)
            .map(|_| SpacePoint::new(R_LEO, (1.0 - 2.0 * next()).acos(), TWO_PI * next()))
            .collect();
        let reference = SpacePoint::new(R_LEO, 1.1, 5.2);
        let rotated = rotate_to_pole(&pts, &reference);
        for i in 0..pts.len() {
            // Post-rotation polar angle equals pre-rotation central angle to
            // the reference (dot-product oracle).
            let want = pts[i].central_angle_to(&reference);
            assert!((rotated[i].polar_rad - want).abs() < 1e-9, "point {i}");
            for j in (i + 1)..pts.len() {
                let before = pts[i].central_angle_to(&pts[j]);
                let after = rotated[i].central_angle_to(&rotated[j]);
                assert!((before - after).abs() < 1e-9, "pair {i},{j}");
            }
        }
    }

    #[test]
    fn rotate_handles_antipodal_reference() {
        let reference = SpacePoint::new(R_LEO, PI, 0.0);
        let pts = vec![SpacePoint::new(R_LEO, PI - 0.25, 1.25)];
        let rotated = rotate_to_pole(&pts, &reference);
        assert!((rotated[0].polar_rad - 0.25).abs() < 1e-12);
    }
}
