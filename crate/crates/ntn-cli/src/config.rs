//! Key-value run configuration with explicit unit suffixes.
//!
//! The on-disk format is one `key = value` pair per line, `#` comments,
//! values carrying units where the quantity has one (km, m, GHz, MHz, Hz,
//! dBW, dBm, W, dBi, dB, deg, rad, mrad). A previously written manifest
//! JSON is also accepted: its `config` snapshot is loaded, which makes any
//! run reproducible from its manifest alone.
//!
//! Command-line flags override file values; the fully resolved map is what
//! executes and what the manifest records.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{CliError, Result};

/// An ordered key → raw-value map.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn new() -> Self {
        Config::default()
    }

    /// Parses the key-value text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected `key = value`, got `{raw}`", lineno + 1))
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", lineno + 1)));
            }
            entries.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Config { entries })
    }

    /// Loads a config file; manifest JSON files are recognized by their
    /// leading `{` and their `config` snapshot is extracted.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        if text.trim_start().starts_with('{') {
            let json: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
                CliError::Config(format!("{}: invalid manifest JSON: {e}", path.display()))
            })?;
            let snapshot = json.get("config").and_then(|c| c.as_object()).ok_or_else(|| {
                CliError::Config(format!("{}: manifest has no config snapshot", path.display()))
            })?;
            let mut entries = BTreeMap::new();
            for (k, v) in snapshot {
                let val = v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string());
                entries.insert(k.clone(), val);
            }
            return Ok(Config { entries });
        }
        Self::parse(&text)
    }

    /// Serializes back to the text format (round-trips through `parse`).
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    /// Sets only when absent (flags win over file values over defaults).
    pub fn set_default(&mut self, key: &str, value: impl ToString) {
        self.entries.entry(key.to_string()).or_insert_with(|| value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| CliError::Config(format!("missing required key `{key}`")))
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>> {
        self.get(key).map(|v| parse_u64(key, v)).transpose()
    }

    pub fn req_u64(&self, key: &str) -> Result<u64> {
        parse_u64(key, self.required(key)?)
    }

    pub fn get_u32(&self, key: &str) -> Result<Option<u32>> {
        Ok(self.get_u64(key)?.map(|v| v as u32))
    }

    pub fn req_u32(&self, key: &str) -> Result<u32> {
        Ok(self.req_u64(key)? as u32)
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(|v| parse_f64(key, v)).transpose()
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>> {
        self.get(key)
            .map(|v| match v {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                other => Err(CliError::Config(format!("key `{key}`: expected a boolean, got `{other}`"))),
            })
            .transpose()
    }

    pub fn get_length_km(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(|v| parse_length_km(key, v)).transpose()
    }

    pub fn get_angle_rad(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(|v| parse_angle_rad(key, v)).transpose()
    }

    pub fn get_power_w(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(|v| parse_power_w(key, v)).transpose()
    }

    pub fn get_gain(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(|v| parse_gain_linear(key, v)).transpose()
    }

    pub fn get_ratio(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(|v| parse_ratio_linear(key, v)).transpose()
    }

    pub fn get_freq_hz(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(|v| parse_freq_hz(key, v)).transpose()
    }

    pub fn get_db(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(|v| parse_db(key, v)).transpose()
    }

    /// Comma-separated list of lengths.
    pub fn get_length_list_km(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|item| parse_length_km(key, item.trim()))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()
    }

    /// Comma-separated list of angles; items may be ranges
    /// `start..stop:count unit` (inclusive endpoints).
    pub fn get_angle_list_rad(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key)
            .map(|v| {
                let mut out = Vec::new();
                for item in v.split(',') {
                    let item = item.trim();
                    if item.contains("..") {
                        out.extend(parse_angle_range(key, item)?);
                    } else {
                        out.push(parse_angle_rad(key, item)?);
                    }
                }
                Ok(out)
            })
            .transpose()
    }

    /// Comma-separated list of integers; items may be ranges `a..b`
    /// (inclusive).
    pub fn get_u32_list(&self, key: &str) -> Result<Option<Vec<u32>>> {
        self.get(key)
            .map(|v| {
                let mut out = Vec::new();
                for item in v.split(',') {
                    let item = item.trim();
                    if let Some((a, b)) = item.split_once("..") {
                        let a = parse_u64(key, a.trim())? as u32;
                        let b = parse_u64(key, b.trim())? as u32;
                        if b < a {
                            return Err(CliError::Config(format!(
                                "key `{key}`: range `{item}` is reversed"
                            )));
                        }
                        out.extend(a..=b);
                    } else {
                        out.push(parse_u64(key, item)? as u32);
                    }
                }
                Ok(out)
            })
            .transpose()
    }
}

fn parse_u64(key: &str, v: &str) -> Result<u64> {
    v.parse::<u64>()
        .map_err(|_| CliError::Config(format!("key `{key}`: expected an integer, got `{v}`")))
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| CliError::Config(format!("key `{key}`: expected a number, got `{v}`")))
}

/// Splits `12.5 km` into the number and its (possibly empty) unit token.
fn split_unit<'v>(key: &str, v: &'v str) -> Result<(f64, &'v str)> {
    let v = v.trim();
    let split_at = v
        .char_indices()
        .find(|(_, c)| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')))
        .map(|(i, _)| i)
        .unwrap_or(v.len());
    let (num, unit) = v.split_at(split_at);
    let value = num.trim().parse::<f64>().map_err(|_| {
        CliError::Config(format!("key `{key}`: expected `<number> [unit]`, got `{v}`"))
    })?;
    Ok((value, unit.trim()))
}

pub fn parse_length_km(key: &str, v: &str) -> Result<f64> {
    let (value, unit) = split_unit(key, v)?;
    match unit {
        "km" | "" => Ok(value),
        "m" => Ok(value / 1e3),
        other => Err(CliError::Config(format!("key `{key}`: unknown length unit `{other}` (use km or m)"))),
    }
}

pub fn parse_angle_rad(key: &str, v: &str) -> Result<f64> {
    let (value, unit) = split_unit(key, v)?;
    match unit {
        "deg" => Ok(value.to_radians()),
        "rad" | "" => Ok(value),
        "mrad" => Ok(value / 1e3),
        other => Err(CliError::Config(format!("key `{key}`: unknown angle unit `{other}` (use deg, rad or mrad)"))),
    }
}

fn parse_angle_range(key: &str, item: &str) -> Result<Vec<f64>> {
    // `start..stop:count unit`
    let err = || {
        CliError::Config(format!(
            "key `{key}`: expected `start..stop:count unit`, got `{item}`"
        ))
    };
    let (span, rest) = item.split_once(':').ok_or_else(err)?;
    let (a, b) = span.split_once("..").ok_or_else(err)?;
    let (count_str, unit) = rest
        .trim()
        .split_once(' ')
        .map(|(c, u)| (c, u.trim()))
        .unwrap_or((rest.trim(), ""));
    let count: usize = count_str.trim().parse().map_err(|_| err())?;
    if count < 2 {
        return Err(err());
    }
    let lo = parse_angle_rad(key, &format!("{} {unit}", a.trim()))?;
    let hi = parse_angle_rad(key, &format!("{} {unit}", b.trim()))?;
    Ok((0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect())
}

pub fn parse_power_w(key: &str, v: &str) -> Result<f64> {
    let (value, unit) = split_unit(key, v)?;
    match unit {
        "W" | "w" | "" => Ok(value),
        "mW" | "mw" => Ok(value / 1e3),
        "dBW" | "dbw" => Ok(ntn_core::link::db::dbw_to_watts(value)),
        "dBm" | "dbm" => Ok(ntn_core::link::db::dbm_to_watts(value)),
        other => Err(CliError::Config(format!("key `{key}`: unknown power unit `{other}` (use W, mW, dBW or dBm)"))),
    }
}

pub fn parse_gain_linear(key: &str, v: &str) -> Result<f64> {
    let (value, unit) = split_unit(key, v)?;
    match unit {
        "" => Ok(value),
        "dBi" | "dbi" | "dB" | "db" => Ok(ntn_core::link::db::from_db(value)),
        other => Err(CliError::Config(format!("key `{key}`: unknown gain unit `{other}` (use dBi or a bare linear value)"))),
    }
}

pub fn parse_ratio_linear(key: &str, v: &str) -> Result<f64> {
    let (value, unit) = split_unit(key, v)?;
    match unit {
        "" => Ok(value),
        "dB" | "db" => Ok(ntn_core::link::db::from_db(value)),
        other => Err(CliError::Config(format!("key `{key}`: unknown ratio unit `{other}` (use dB or a bare linear value)"))),
    }
}

pub fn parse_freq_hz(key: &str, v: &str) -> Result<f64> {
    let (value, unit) = split_unit(key, v)?;
    match unit {
        "Hz" | "hz" | "" => Ok(value),
        "kHz" | "khz" => Ok(value * 1e3),
        "MHz" | "mhz" => Ok(value * 1e6),
        "GHz" | "ghz" => Ok(value * 1e9),
        other => Err(CliError::Config(format!("key `{key}`: unknown frequency unit `{other}` (use Hz, kHz, MHz or GHz)"))),
    }
}

pub fn parse_db(key: &str, v: &str) -> Result<f64> {
    let (value, unit) = split_unit(key, v)?;
    match unit {
        "dB" | "db" | "" => Ok(value),
        other => Err(CliError::Config(format!("key `{key}`: expected a dB value, got unit `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_round_trip() {
        let text = "# comment\naltitude = 500 km\nseed = 7\nmodel = dsbpp\n";
        let cfg = Config::parse(text).unwrap();
        assert_eq!(cfg.get("altitude"), Some("500 km"));
        assert_eq!(cfg.req_u64("seed").unwrap(), 7);
        let round = Config::parse(&cfg.serialize()).unwrap();
        assert_eq!(cfg, round);
    }

    #[test]
    fn parse_rejects_bad_lines() {
        let err = Config::parse("altitude 500 km\n").unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn quantities_with_units() {
        assert_eq!(parse_length_km("k", "500 km").unwrap(), 500.0);
        assert_eq!(parse_length_km("k", "2000 m").unwrap(), 2.0);
        assert!((parse_angle_rad("k", "180 deg").unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(parse_angle_rad("k", "0.5 rad").unwrap(), 0.5);
        assert_eq!(parse_angle_rad("k", "2 mrad").unwrap(), 0.002);
        assert!((parse_power_w("k", "18 dBW").unwrap() - 63.09573444801933).abs() < 1e-12);
        assert!((parse_power_w("k", "-98 dBm").unwrap() - 1.5848931924611134e-13).abs() < 1e-26);
        assert_eq!(parse_power_w("k", "2.5 W").unwrap(), 2.5);
        assert!((parse_gain_linear("k", "20.9 dBi").unwrap() - 123.02687708123818).abs() < 1e-10);
        assert!((parse_ratio_linear("k", "-2 dB").unwrap() - 0.6309573444801932).abs() < 1e-15);
        assert_eq!(parse_freq_hz("k", "1.575 GHz").unwrap(), 1.575e9);
        assert!(parse_length_km("k", "5 parsec").is_err());
        assert!(parse_power_w("k", "watts").is_err());
    }

    #[test]
    fn lists_and_ranges() {
        let mut cfg = Config::new();
        cfg.set("alts", "20 km, 500 km, 20000 km");
        assert_eq!(cfg.get_length_list_km("alts").unwrap().unwrap(), vec![20.0, 500.0, 20000.0]);
        cfg.set("counts", "24..27, 31");
        assert_eq!(cfg.get_u32_list("counts").unwrap().unwrap(), vec![24, 25, 26, 27, 31]);
        cfg.set("angles", "1..3:3 deg");
        let a = cfg.get_angle_list_rad("angles").unwrap().unwrap();
        assert_eq!(a.len(), 3);
        assert!((a[1] - 2f64.to_radians()).abs() < 1e-15);
        cfg.set("mixed", "0.5 deg, 1..2:2 deg");
        assert_eq!(cfg.get_angle_list_rad("mixed").unwrap().unwrap().len(), 3);
    }

    #[test]
    fn flag_override_semantics() {
        let mut cfg = Config::parse("seed = 1\n").unwrap();
        cfg.set_default("seed", 99u64); // file value wins over default
        assert_eq!(cfg.req_u64("seed").unwrap(), 1);
        cfg.set("seed", 7u64); // explicit flag wins
        assert_eq!(cfg.req_u64("seed").unwrap(), 7);
    }
}
