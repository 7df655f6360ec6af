//! Property tests for the geometric and distributional invariants.

use ntn_core::fading::{sr_gamma_approx, SRParams};
use ntn_core::geometry::{
    cap_fraction, central_angle_to_distance, central_to_zenith, distance_to_central_angle,
    horizon_central_angle, rotate_to_pole, CentralAngle, SpacePoint, EARTH_RADIUS_KM,
};
use ntn_core::topology::{availability, contact_angle_cdf, k_availability, TopologyParams};
use proptest::prelude::*;

const PI: f64 = std::f64::consts::PI;

prop_compose! {
    fn arb_point()(polar in 0.0..PI, az in 0.0..(2.0 * PI), r in 6371.0..1e5) -> SpacePoint {
        SpacePoint::new(r, polar, az)
    }
}

proptest! {
    #[test]
    fn spherical_cartesian_round_trip(p in arb_point()) {
        let q = SpacePoint::from_cartesian(p.to_cartesian());
        prop_assert!((q.radius_km - p.radius_km).abs() <= 1e-9 * p.radius_km);
        prop_assert!((q.polar_rad - p.polar_rad).abs() <= 1e-9);
        if p.polar_rad > 1e-6 && p.polar_rad < PI - 1e-6 {
            let da = (q.azimuth_rad - p.azimuth_rad).abs();
            prop_assert!(da < 1e-8 || (2.0 * PI - da) < 1e-8);
        }
    }

    #[test]
    fn distance_angle_round_trip(theta in 0.0..PI, alt in 1.0..1e5) {
        let r = EARTH_RADIUS_KM + alt;
        let d = central_angle_to_distance(CentralAngle::new(theta).unwrap(), r, EARTH_RADIUS_KM).unwrap();
        let back = distance_to_central_angle(d, r, EARTH_RADIUS_KM).unwrap();
        let d2 = central_angle_to_distance(back, r, EARTH_RADIUS_KM).unwrap();
        prop_assert!((d2 - d).abs() <= 1e-9 * d.max(1.0));
    }

    #[test]
    fn cap_fraction_symmetry_and_bounds(theta in 0.0..PI) {
        let a = cap_fraction(CentralAngle::new(theta).unwrap());
        let b = cap_fraction(CentralAngle::new(PI - theta).unwrap());
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!((a + b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zenith_of_horizon_is_right_angle(alt in 1.0..1e5) {
        let r = EARTH_RADIUS_KM + alt;
        let hor = horizon_central_angle(r, EARTH_RADIUS_KM).unwrap();
        let z = central_to_zenith(hor, r, EARTH_RADIUS_KM).unwrap().rad();
        prop_assert!((z - PI / 2.0).abs() < 1e-6);
    }

    #[test]
    fn rotation_preserves_pairwise_angles(
        pts in prop::collection::vec(arb_point(), 2..12),
        reference in arb_point(),
    ) {
        let rotated = rotate_to_pole(&pts, &reference);
        for i in 0..pts.len() {
            prop_assert!((rotated[i].polar_rad - pts[i].central_angle_to(&reference)).abs() < 1e-9);
            for j in (i + 1)..pts.len() {
                let before = pts[i].central_angle_to(&pts[j]);
                let after = rotated[i].central_angle_to(&rotated[j]);
                prop_assert!((before - after).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn contact_angle_cdf_is_a_cdf(n in 1u32..1000, theta in 0.0..PI) {
        let p = TopologyParams::new(n, 6871.0, EARTH_RADIUS_KM).unwrap();
        let c = contact_angle_cdf(theta, &p);
        prop_assert!((0.0..=1.0).contains(&c));
        // Nondecreasing in θ and in N.
        let c2 = contact_angle_cdf((theta + 0.01).min(PI), &p);
        prop_assert!(c2 >= c - 1e-15);
        let bigger = TopologyParams::new(n + 1, 6871.0, EARTH_RADIUS_KM).unwrap();
        prop_assert!(contact_angle_cdf(theta, &bigger) >= c - 1e-15);
    }

    #[test]
    fn k_availability_is_a_probability_and_k1_matches(
        n in 1u32..500,
        theta in 0.0..PI,
        k in 0u32..10,
    ) {
        let p = TopologyParams::new(n, 6871.0, EARTH_RADIUS_KM).unwrap();
        let k = k.min(n);
        let v = k_availability(k, theta, &p).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
        let v1 = k_availability(1, theta, &p).unwrap();
        prop_assert!((v1 - availability(theta, &p)).abs() < 1e-12);
        if k > 0 {
            prop_assert!(v <= v1 + 1e-12);
        }
    }

    #[test]
    fn sr_gamma_mean_identity(
        omega in 0.0..10.0f64,
        b0 in 0.01..5.0f64,
        m in 0.2..50.0f64,
    ) {
        let p = SRParams::new(omega, b0, m).unwrap();
        let a = sr_gamma_approx(&p);
        prop_assert!((a.m1 * a.m2 - (2.0 * b0 + omega)).abs() < 1e-12);
        prop_assert!(a.m1 > 0.0 && a.m2 > 0.0);
    }
}
