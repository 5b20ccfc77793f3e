//! `key = value` configuration files.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{EmissionChannel, SystemParams};
use crate::phonon::{PhononParams, RateMethod};
use crate::units::uev_to_mev;

/// Every recognised key with its default value.
pub const KEYS: &[(&str, &str)] = &[
    ("g_uev", "34"),
    ("kappa_mev", "0.42"),
    ("gamma_b_inv_ps", "730"),
    ("gamma_pd_uev", "1.6"),
    ("t_alpha_ps", "3.2"),
    ("delta_mev", "0"),
    ("temperature_k", "17.5"),
    ("phonon_eta_mev2", "0.032"),
    ("phonon_omega_c_mev", "1.3"),
    ("phonon_enabled", "false"),
    ("phonon_method", "frequency"),
    ("phonon_quad_points", "4000"),
    ("phonon_s_max_ps", "10.126337798461538"),
    ("emission_channel", "qd"),
    ("lamb_shift", "false"),
    ("gamma_tot_uses_purcell", "false"),
    ("quad_points", "1200"),
    ("t_extent_factor", "12"),
    ("dt_ps", "auto"),
    ("validity_threshold", "3"),
];

/// Grid settings that override the integration defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOverrides {
    pub quad_points: usize,
    pub t_extent_factor: f64,
    pub dt_ps: Option<f64>,
}

/// Parsed configuration: the resolved key/value table and the derived
/// physical parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub values: BTreeMap<String, String>,
    pub params: SystemParams,
    pub grid: GridOverrides,
    pub validity_threshold: f64,
    /// Phonon settings from the table, present even when phonons are disabled.
    pub phonon: PhononParams,
}

impl Default for Config {
    fn default() -> Self {
        Config::from_values(defaults()).expect("defaults are valid")
    }
}

fn defaults() -> BTreeMap<String, String> {
    KEYS.iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config {
            line: 0,
            message: format!("`{key}` expects a boolean, got `{v}`"),
        }),
    }
}

fn parse_number(key: &str, v: &str) -> Result<f64> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(Error::Config {
            line: 0,
            message: format!("`{key}` expects a finite decimal, got `{v}`"),
        }),
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Parses config text; unspecified keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = defaults();
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let mut lines: BTreeMap<String, usize> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
                line: line_no,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !values.contains_key(key) {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("unknown key `{key}`"),
                });
            }
            if let Some(first) = seen.insert(key.to_string(), line_no) {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("duplicate key `{key}` (first set on line {first})"),
                });
            }
            values.insert(key.to_string(), value.to_string());
            lines.insert(key.to_string(), line_no);
        }
        Self::from_values(values).map_err(|e| match e {
            Error::Config { line: 0, message } => {
                let line = lines
                    .iter()
                    .find(|(k, _)| message.contains(&format!("`{k}`")))
                    .map_or(0, |(_, &l)| l);
                Error::Config { line, message }
            }
            other => other,
        })
    }

    /// Builds a configuration from a complete key/value table.
    pub fn from_values(values: BTreeMap<String, String>) -> Result<Self> {
        for key in values.keys() {
            if !KEYS.iter().any(|(k, _)| k == key) {
                return Err(Error::Config {
                    line: 0,
                    message: format!("unknown key `{key}`"),
                });
            }
        }
        let get = |k: &str| -> &str { values.get(k).map(String::as_str).unwrap_or("") };
        let num = |k: &str| parse_number(k, get(k));
        let positive = |k: &str| -> Result<f64> {
            let x = num(k)?;
            if x > 0.0 {
                Ok(x)
            } else {
                Err(Error::Config {
                    line: 0,
                    message: format!("`{k}` must be positive, got `{}`", get(k)),
                })
            }
        };
        let channel: EmissionChannel = get("emission_channel").parse().map_err(|_| Error::Config {
            line: 0,
            message: format!("`emission_channel` must be `qd` or `cavity`, got `{}`", get("emission_channel")),
        })?;
        let method = match get("phonon_method") {
            "frequency" => RateMethod::Frequency,
            "time_domain" => RateMethod::TimeDomain,
            other => {
                return Err(Error::Config {
                    line: 0,
                    message: format!("`phonon_method` must be `frequency` or `time_domain`, got `{other}`"),
                })
            }
        };
        let count = |k: &str| -> Result<usize> {
            let x = positive(k)?;
            if x.fract() != 0.0 {
                return Err(Error::Config {
                    line: 0,
                    message: format!("`{k}` must be an integer, got `{}`", get(k)),
                });
            }
            Ok(x as usize)
        };
        let temperature = num("temperature_k")?;
        let phonon_all = PhononParams {
            eta: num("phonon_eta_mev2")?,
            omega_c: positive("phonon_omega_c_mev")?,
            temperature,
            include_lamb_shift: parse_bool("lamb_shift", get("lamb_shift"))?,
            s_max: positive("phonon_s_max_ps")?,
            quad_points: count("phonon_quad_points")?,
            method,
        };
        let phonon = parse_bool("phonon_enabled", get("phonon_enabled"))?.then(|| phonon_all.clone());
        let params = SystemParams {
            g: uev_to_mev(num("g_uev")?),
            kappa: num("kappa_mev")?,
            gamma_b: 1.0 / positive("gamma_b_inv_ps")?,
            gamma_pd: uev_to_mev(num("gamma_pd_uev")?),
            alpha: 1.0 / positive("t_alpha_ps")?,
            delta: num("delta_mev")?,
            temperature,
            emission_channel: channel,
            phonon,
            gamma_tot_uses_purcell: parse_bool("gamma_tot_uses_purcell", get("gamma_tot_uses_purcell"))?,
        };
        params.validate().map_err(|e| Error::Config {
            line: 0,
            message: e.to_string(),
        })?;
        let dt_ps = match get("dt_ps") {
            "auto" => None,
            _ => Some(positive("dt_ps")?),
        };
        let grid = GridOverrides {
            quad_points: count("quad_points")?,
            t_extent_factor: positive("t_extent_factor")?,
            dt_ps,
        };
        Ok(Config {
            params,
            grid,
            validity_threshold: num("validity_threshold")?,
            phonon: phonon_all,
            values,
        })
    }

    /// Copy with one key replaced.
    pub fn with_value(&self, key: &str, value: &str) -> Result<Self> {
        let mut values = self.values.clone();
        if !values.contains_key(key) {
            return Err(Error::Config {
                line: 0,
                message: format!("unknown key `{key}`"),
            });
        }
        values.insert(key.to_string(), value.to_string());
        Self::from_values(values)
    }

    /// Serialises the resolved table back to config text.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.values {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(v);
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_preset() {
        let c = Config::default();
        let p = SystemParams::micropillar();
        assert!((c.params.g - p.g).abs() < 1e-15);
        assert_eq!(c.params.kappa, p.kappa);
        assert!((c.params.gamma_b - p.gamma_b).abs() < 1e-18);
        assert!(c.params.phonon.is_none());
        assert_eq!(c.grid.quad_points, 1200);
    }

    #[test]
    fn parses_and_reports_lines() {
        let c = Config::parse("# comment\ng_uev = 30\n\nphonon_enabled = true # trailing\n").unwrap();
        assert!((c.params.g - 0.03).abs() < 1e-15);
        assert!(c.params.phonon.is_some());
        match Config::parse("g_uev = 30\nbogus = 1\n") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match Config::parse("g_uev = 30\nkappa_mev = abc\n") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(Config::parse("kappa_mev = inf\n").is_err());
        assert!(Config::parse("g_uev 3\n").is_err());
        assert!(Config::parse("g_uev = 3\ng_uev = 4\n").is_err());
    }

    #[test]
    fn round_trips_through_text() {
        let c = Config::parse("delta_mev = -0.28\nemission_channel = cavity\n").unwrap();
        let again = Config::parse(&c.to_text()).unwrap();
        assert_eq!(c, again);
    }
}
