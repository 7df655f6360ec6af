//! Deterministic link-budget arithmetic: effective gain, antenna patterns,
//! received power, SNR/SINR.
//!
//! Everything here is linear-domain SI (watts, meters, hertz); the [`db`]
//! module holds the decibel conversions for I/O boundaries.

use crate::error::{Error, Result};

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Transmit-side and receive-side parameters of one link, all linear SI.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinkParams {
    /// Transmit power η_t, W.
    pub tx_power_w: f64,
    /// Transmit antenna gain, linear.
    pub tx_gain: f64,
    /// Receive antenna gain, linear.
    pub rx_gain: f64,
    /// Carrier frequency, Hz.
    pub carrier_freq_hz: f64,
    /// Additional attenuation ζ ∈ (0, 1], linear.
    pub extra_atten: f64,
    /// Path-loss exponent α ∈ [2, 4]; 2 is free space.
    pub pathloss_exp: f64,
    /// Noise power σ², W.
    pub noise_power_w: f64,
    /// SINR detection threshold γ, linear.
    pub sinr_threshold: f64,
}

impl LinkParams {
    /// GPS-L1-style downlink defaults: 18 dBW transmit power, 20.9 dBi
    /// antennas on both ends, 1.575 GHz carrier, −2 dB lumped attenuation,
    /// free-space path loss, −98 dBm receiver noise, 0 dB detection
    /// threshold.
    pub fn gps_l1_defaults() -> Self {
        LinkParams {
            tx_power_w: db::dbw_to_watts(18.0),
            tx_gain: db::from_db(20.9),
            rx_gain: db::from_db(20.9),
            carrier_freq_hz: 1.575e9,
            extra_atten: db::from_db(-2.0),
            pathloss_exp: 2.0,
            noise_power_w: db::dbm_to_watts(-98.0),
            sinr_threshold: 1.0,
        }
    }

    /// Validates the invariants (positive powers, α ∈ [2, 4], ζ ∈ (0, 1]).
    pub fn validate(&self) -> Result<()> {
        if self.tx_power_w <= 0.0 {
            return Err(Error::Domain { what: "tx power must be positive", value: self.tx_power_w });
        }
        if self.noise_power_w <= 0.0 {
            return Err(Error::Domain { what: "noise power must be positive", value: self.noise_power_w });
        }
        if self.tx_gain <= 0.0 || self.rx_gain <= 0.0 {
            return Err(Error::Domain { what: "gains must be positive", value: self.tx_gain });
        }
        if self.carrier_freq_hz <= 0.0 {
            return Err(Error::Domain { what: "carrier frequency must be positive", value: self.carrier_freq_hz });
        }
        if !(2.0..=4.0).contains(&self.pathloss_exp) {
            return Err(Error::Domain { what: "path-loss exponent must lie in [2, 4]", value: self.pathloss_exp });
        }
        if !(self.extra_atten > 0.0 && self.extra_atten <= 1.0) {
            return Err(Error::Domain { what: "extra attenuation must lie in (0, 1]", value: self.extra_atten });
        }
        if self.sinr_threshold < 0.0 {
            return Err(Error::Domain { what: "SINR threshold must be nonnegative", value: self.sinr_threshold });
        }
        Ok(())
    }
}

/// Effective channel gain G = G_t·G_r·(c/(4π f_c))².
///
/// Carries units of m², cancelling the 1/m² of the free-space path loss.
pub fn effective_gain(p: &LinkParams) -> f64 {
    let lam = SPEED_OF_LIGHT_M_S / (4.0 * core::f64::consts::PI * p.carrier_freq_hz);
    p.tx_gain * p.rx_gain * lam * lam
}

/// Received power η_r = η_t·G·ζ·d^(−α)·W with `d_m` in meters and `w` the
/// small-scale fading draw.
pub fn received_power(p: &LinkParams, d_m: f64, w: f64) -> Result<f64> {
    if d_m <= 0.0 {
        return Err(Error::Domain { what: "distance must be positive", value: d_m });
    }
    if w < 0.0 {
        return Err(Error::Domain { what: "fading must be nonnegative", value: w });
    }
    Ok(p.tx_power_w * effective_gain(p) * p.extra_atten * libm::pow(d_m, -p.pathloss_exp) * w)
}

/// SNR: received power over noise power.
pub fn snr(p: &LinkParams, d_m: f64, w: f64) -> Result<f64> {
    Ok(received_power(p, d_m, w)? / p.noise_power_w)
}

/// SINR: received power over noise plus interference power.
pub fn sinr(p: &LinkParams, d_m: f64, w: f64, interference_w: f64) -> Result<f64> {
    if interference_w < 0.0 {
        return Err(Error::Domain { what: "interference must be nonnegative", value: interference_w });
    }
    Ok(received_power(p, d_m, w)? / (p.noise_power_w + interference_w))
}

/// Directional antenna gain as a function of the deflection angle.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "pattern", rename_all = "kebab-case"))]
pub enum AntennaPattern {
    /// Full gain inside the half-power beamwidth, zero outside.
    FlatTop { g_max: f64, half_power_bw_rad: f64 },
    /// G_m·2^(−φ²/φ_3dB²): exactly half power at the beamwidth.
    Gaussian { g_max: f64, half_power_bw_rad: f64 },
}

/// Gain of `pattern` at deflection angle `phi_rad` from the beam axis.
pub fn pattern_gain(pattern: &AntennaPattern, phi_rad: f64) -> f64 {
    let phi = libm::fabs(phi_rad);
    match *pattern {
        AntennaPattern::FlatTop { g_max, half_power_bw_rad } => {
            if phi <= half_power_bw_rad {
                g_max
            } else {
                0.0
            }
        }
        AntennaPattern::Gaussian { g_max, half_power_bw_rad } => {
            let r = phi / half_power_bw_rad;
            g_max * libm::exp2(-(r * r))
        }
    }
}

/// Decibel conversions. All channel math elsewhere is linear-domain;
/// convert exactly once at each I/O boundary.
pub mod db {
    /// Linear power ratio → dB.
    pub fn to_db(linear: f64) -> f64 {
        10.0 * libm::log10(linear)
    }

    /// dB → linear power ratio.
    pub fn from_db(db: f64) -> f64 {
        libm::pow(10.0, db / 10.0)
    }

    /// dBW → watts.
    pub fn dbw_to_watts(dbw: f64) -> f64 {
        from_db(dbw)
    }

    /// Watts → dBW.
    pub fn watts_to_dbw(w: f64) -> f64 {
        to_db(w)
    }

    /// dBm → watts.
    pub fn dbm_to_watts(dbm: f64) -> f64 {
        from_db(dbm - 30.0)
    }

    /// Watts → dBm.
    pub fn watts_to_dbm(w: f64) -> f64 {
        to_db(w) + 30.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Table-style MEO downlink parameters used across the test suite:
    /// 18 dBW, 20.9 dBi antennas, 1.575 GHz, −2 dB attenuation, −98 dBm noise.
    pub(crate) fn meo_link() -> LinkParams {
        LinkParams {
            tx_power_w: db::dbw_to_watts(18.0),
            tx_gain: db::from_db(20.9),
            rx_gain: db::from_db(20.9),
            carrier_freq_hz: 1.575e9,
            extra_atten: db::from_db(-2.0),
            pathloss_exp: 2.0,
            noise_power_w: db::dbm_to_watts(-98.0),
            sinr_threshold: 1.0,
        }
    }

    #[test]
    fn unit_wavelength_factor() {
        let p = LinkParams {
            tx_gain: 1.0,
            rx_gain: 1.0,
            carrier_freq_hz: SPEED_OF_LIGHT_M_S / (4.0 * core::f64::consts::PI),
            ..meo_link()
        };
        assert!((effective_gain(&p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn effective_gain_db_and_linear_paths_agree() {
        let p = meo_link();
        let linear = effective_gain(&p);
        // dB-domain assembly: G_t + G_r + 20·log10(c/(4π f_c)).
        let lam = SPEED_OF_LIGHT_M_S / (4.0 * core::f64::consts::PI * p.carrier_freq_hz);
        let db_sum = 20.9 + 20.9 + 20.0 * lam.log10();
        let via_db = db::from_db(db_sum);
        assert!(((linear - via_db) / via_db).abs() < 1e-12);
    }

    #[test]
    fn doubling_frequency_quarters_gain() {
        let p = meo_link();
        let p2 = LinkParams { carrier_freq_hz: 2.0 * p.carrier_freq_hz, ..p };
        let ratio = effective_gain(&p2) / effective_gain(&p);
        assert!((ratio - 0.25).abs() < 1e-12);
    }

    #[test]
    fn received_power_zero_fading_and_scaling_law() {
        let p = meo_link();
        assert_eq!(received_power(&p, 1.0e6, 0.0).unwrap(), 0.0);
        let d = 2.0e7;
        let r1 = received_power(&p, d, 1.0).unwrap();
        let r2 = received_power(&p, 2.0 * d, 1.0).unwrap();
        assert!((r2 / r1 - libm::pow(2.0, -p.pathloss_exp)).abs() < 1e-12);
        assert!(received_power(&p, 0.0, 1.0).is_err());
        assert!(received_power(&p, -1.0, 1.0).is_err());
    }

    #[test]
    fn received_power_monotone_and_linear() {
        let p = meo_link();
        let d = 2.0e7;
        let base = received_power(&p, d, 1.0).unwrap();
        assert!(received_power(&p, d + 1.0, 1.0).unwrap() < base);
        assert!((received_power(&p, d, 2.0).unwrap() - 2.0 * base).abs() < 1e-12 * base);
        let p2 = LinkParams { tx_power_w: 2.0 * p.tx_power_w, ..p };
        assert!((received_power(&p2, d, 1.0).unwrap() - 2.0 * base).abs() < 1e-12 * base);
    }

    #[test]
    fn zenith_meo_budget_matches_db_assembly() {
        // EIRP + G_r − FSPL + ζ, assembled entirely in dB, must agree with
        // the linear path within 0.01 dB.
        let p = meo_link();
        let d_m = 2.0e7; // 20000 km zenith distance
        let linear_dbw = db::watts_to_dbw(received_power(&p, d_m, 1.0).unwrap());
        let fspl_db = 20.0
            * (4.0 * core::f64::consts::PI * d_m * p.carrier_freq_hz / SPEED_OF_LIGHT_M_S).log10();
        let budget_dbw = 18.0 + 20.9 + 20.9 - fspl_db - 2.0;
        assert!((linear_dbw - budget_dbw).abs() < 0.01, "{linear_dbw} vs {budget_dbw}");
        // And σ² = −98 dBm ⇒ SNR in dB consistent as well.
        let snr_db = db::to_db(snr(&p, d_m, 1.0).unwrap());
        let budget_snr_db = budget_dbw - (-98.0 - 30.0);
        assert!((snr_db - budget_snr_db).abs() < 0.01);
    }

    #[test]
    fn sinr_reduces_to_snr_without_interference() {
        let p = meo_link();
        let d = 2.56e7;
        let a = snr(&p, d, 1.3).unwrap();
        let b = sinr(&p, d, 1.3, 0.0).unwrap();
        assert_eq!(a, b);
        assert!(sinr(&p, d, 1.3, -1.0).is_err());
        // SNR linear in fading.
        assert!((snr(&p, d, 2.6).unwrap() - 2.0 * a).abs() < 1e-12 * a);
    }

    #[test]
    fn pattern_gains() {
        let flat = AntennaPattern::FlatTop { g_max: 100.0, half_power_bw_rad: 0.1 };
        let gauss = AntennaPattern::Gaussian { g_max: 100.0, half_power_bw_rad: 0.1 };
        assert_eq!(pattern_gain(&flat, 0.0), 100.0);
        assert_eq!(pattern_gain(&gauss, 0.0), 100.0);
        // Gaussian at the beamwidth: exactly half power.
        assert!((pattern_gain(&gauss, 0.1) - 50.0).abs() < 1e-12);
        // Flat top just outside: zero.
        assert_eq!(pattern_gain(&flat, 0.1 + 1e-12), 0.0);
        assert_eq!(pattern_gain(&flat, -0.05), 100.0);
        // Gaussian strictly decreasing in |φ| and bounded by g_max.
        let mut prev = 100.0 + 1.0;
        for i in 0..50 {
            let g = pattern_gain(&gauss, 0.01 * i as f64);
            assert!(g < prev && g <= 100.0);
            prev = g;
        }
    }

    #[test]
    fn db_round_trips() {
        for v in [1e-13, 0.5, 1.0, 63.0957, 1e7] {
            assert!(((db::from_db(db::to_db(v)) - v) / v).abs() < 1e-12);
            assert!(((db::dbm_to_watts(db::watts_to_dbm(v)) - v) / v).abs() < 1e-12);
        }
        assert!((db::dbm_to_watts(-98.0) - 1.5848931924611134e-13).abs() < 1e-25);
        assert!((db::dbw_to_watts(18.0) - 63.09573444801933).abs() < 1e-12);
    }

    #[test]
    fn validate_rejects_bad_params() {
        let good = meo_link();
        assert!(good.validate().is_ok());
        assert!(LinkParams { tx_power_w: 0.0, ..good }.validate().is_err());
        assert!(LinkParams { pathloss_exp: 4.5, ..good }.validate().is_err());
        assert!(LinkParams { extra_atten: 1.5, ..good }.validate().is_err());
        assert!(LinkParams { extra_atten: 0.0, ..good }.validate().is_err());
    }
}
