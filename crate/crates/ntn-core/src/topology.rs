//! Closed-form topology statistics for the homogeneous BPP (contact angle,
//! contact distance, availability, K-availability) and their empirical
//! counterparts for cross-validation.
//!
//! The closed forms hold only for the homogeneous BPP. For any other process
//! spec, [`TopologyParams::for_spec`] reports a contract violation; the
//! empirical estimator is the fallback path.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::SpacePoint;
use crate::process::{ConstellationSample, ProcessSpec};
use crate::special::ln_gamma;
use crate::stats::EmpiricalCdf;

/// Parameters of the homogeneous-BPP topology closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TopologyParams {
    pub n_ntp: u32,
    pub r_ntp_km: f64,
    pub r_earth_km: f64,
}

impl TopologyParams {
    pub fn new(n_ntp: u32, r_ntp_km: f64, r_earth_km: f64) -> Result<Self> {
        if n_ntp == 0 {
            return Err(Error::Domain { what: "closed forms need at least one NTP", value: 0.0 });
        }
        if r_ntp_km < r_earth_km || r_earth_km <= 0.0 {
            return Err(Error::Domain { what: "invalid radii", value: r_ntp_km });
        }
        Ok(TopologyParams { n_ntp, r_ntp_km, r_earth_km })
    }

    /// Extracts closed-form parameters from a process spec; only the
    /// homogeneous BPP is admissible.
    pub fn for_spec(spec: &ProcessSpec, r_ntp_km: f64, r_earth_km: f64) -> Result<Self> {
        match *spec {
            ProcessSpec::HomBpp { count } => TopologyParams::new(count, r_ntp_km, r_earth_km),
            _ => Err(Error::Contract(
                "topology closed forms apply only to the homogeneous BPP; use empirical estimation",
            )),
        }
    }
}

/// CDF of the contact angle (central angle to the nearest NTP):
/// 1 − ((1 + cos θ)/2)^N.
pub fn contact_angle_cdf(theta_rad: f64, p: &TopologyParams) -> f64 {
    let base = 0.5 * (1.0 + libm::cos(theta_rad));
    1.0 - libm::pow(base, p.n_ntp as f64)
}

/// PDF of the contact angle: (N/2)·sin θ·((1 + cos θ)/2)^(N−1).
pub fn contact_angle_pdf(theta_rad: f64, p: &TopologyParams) -> f64 {
    let n = p.n_ntp as f64;
    let base = 0.5 * (1.0 + libm::cos(theta_rad));
    0.5 * n * libm::sin(theta_rad) * libm::pow(base, n - 1.0)
}

/// CDF of the contact distance (km), via the cosine rule.
pub fn contact_distance_cdf(d_km: f64, p: &TopologyParams) -> Result<f64> {
    let lo = p.r_ntp_km - p.r_earth_km;
    let hi = p.r_ntp_km + p.r_earth_km;
    let slack = 1e-9 * hi;
    if d_km < lo - slack || d_km > hi + slack {
        return Err(Error::Domain { what: "contact distance outside feasible interval", value: d_km });
    }
    let base = 0.5
        + (p.r_ntp_km * p.r_ntp_km + p.r_earth_km * p.r_earth_km - d_km * d_km)
            / (4.0 * p.r_ntp_km * p.r_earth_km);
    Ok(1.0 - libm::pow(base.clamp(0.0, 1.0), p.n_ntp as f64))
}

/// Availability: probability that at least one NTP lies within central angle
/// `theta_max` of the user. Equals the contact-angle CDF at `theta_max`.
pub fn availability(theta_max_rad: f64, p: &TopologyParams) -> f64 {
    contact_angle_cdf(theta_max_rad, p)
}

/// K-availability: probability that at least `k` NTPs lie within central
/// angle `theta_max`. Binomial survival function with success probability
/// q = (1 − cos θ_max)/2, evaluated in log-space so mega-constellation
/// counts do not overflow.
pub fn k_availability(k: u32, theta_max_rad: f64, p: &TopologyParams) -> Result<f64> {
    let n = p.n_ntp;
    if k > n {
        return Err(Error::Domain { what: "k exceeds the number of NTPs", value: k as f64 });
    }
    if k == 0 {
        return Ok(1.0);
    }
    let q = 0.5 * (1.0 - libm::cos(theta_max_rad));
    let one_minus_q = 0.5 * (1.0 + libm::cos(theta_max_rad));
    if q <= 0.0 {
        return Ok(0.0);
    }
    if one_minus_q <= 0.0 {
        return Ok(1.0);
    }
    let (ln_q, ln_1mq) = (libm::log(q), libm::log(one_minus_q));
    let ln_n_fact = ln_gamma(n as f64 + 1.0);
    let mut below = 0.0f64;
    for j in 0..k {
        let jf = j as f64;
        let ln_c = ln_n_fact - ln_gamma(jf + 1.0) - ln_gamma((n - j) as f64 + 1.0);
        below += libm::exp(ln_c + jf * ln_q + (n - j) as f64 * ln_1mq);
    }
    Ok((1.0 - below).clamp(0.0, 1.0))
}

/// Empirical contact-angle distribution: for each sample, the minimum
/// central angle from `reference` to any of its points.
///
/// Errors on an empty sample (a nearest neighbor does not exist there).
pub fn empirical_contact_angle(
    samples: &[ConstellationSample],
    reference: &SpacePoint,
) -> Result<EmpiricalCdf> {
    let mut minima = Vec::with_capacity(samples.len());
    for s in samples {
        if s.points.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut best = f64::INFINITY;
        for p in &s.points {
            let a = p.central_angle_to(reference);
            if a < best {
                best = a;
            }
        }
        minima.push(best);
    }
    Ok(EmpiricalCdf::new(minima))
}
