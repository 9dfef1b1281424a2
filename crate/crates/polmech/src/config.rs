//! Flat `key = value` configuration files.

use std::collections::BTreeMap;
use std::path::Path;

use polmech_core::lattice::LatticeParams;
use polmech_core::working_point::DriveParams;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("key `{key}`: cannot parse `{value}` as a number")]
    Number { key: String, value: String },
    #[error("{0}")]
    Invalid(String),
}

pub const LATTICE_KEYS: &[&str] = &[
    "n_sites",
    "spacing_d",
    "dipole_mu",
    "angle_alpha",
    "omega_a",
    "omega_c",
    "mode_volume_V",
];

pub const DRIVE_KEYS: &[&str] = &["gamma", "gamma_m", "delta", "f1", "Delta_L", "E_L", "G0", "omega_m"];

pub const POINT_KEYS: &[&str] = &["variant", "nbar", "msq", "msq_phase", "Gpsi", "Gtheta", "Gt", "U"];

/// Optical-lattice parameters used when a key is absent; ω_c defaults to ω₁.
pub fn default_lattice() -> LatticeParams {
    LatticeParams {
        n_sites: 1000,
        spacing_d: 266e-9,
        dipole_mu: 5e-29,
        angle_alpha: std::f64::consts::FRAC_PI_2,
        omega_a: 2.5e15,
        omega_c: 2.5e15,
        mode_volume_v: 1e-10,
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                text: raw.to_string(),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Syntax {
                    line,
                    text: raw.to_string(),
                });
            }
            let known = [LATTICE_KEYS, DRIVE_KEYS, POINT_KEYS].iter().any(|ks| ks.contains(&key));
            if !known {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(ConfigError::Duplicate {
                    line,
                    key: key.to_string(),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>().map_err(|_| ConfigError::Number {
                    key: key.to_string(),
                    value: v.to_string(),
                })
            })
            .transpose()
    }

    pub fn has_any(&self, keys: &[&str]) -> bool {
        keys.iter().any(|k| self.entries.contains_key(*k))
    }

    /// Lattice parameters; absent keys take [`default_lattice`] values and
    /// an absent `omega_c` tunes the cavity to the k = 1 exciton.
    pub fn lattice(&self) -> Result<LatticeParams, ConfigError> {
        let d = default_lattice();
        let n_sites = match self.f64("n_sites")? {
            None => d.n_sites,
            Some(v) if v.fract() == 0.0 && v >= 2.0 => v as usize,
            Some(v) => return Err(ConfigError::Invalid(format!("n_sites = {v} must be an integer >= 2"))),
        };
        let mut p = LatticeParams {
            n_sites,
            spacing_d: self.f64("spacing_d")?.unwrap_or(d.spacing_d),
            dipole_mu: self.f64("dipole_mu")?.unwrap_or(d.dipole_mu),
            angle_alpha: self.f64("angle_alpha")?.unwrap_or(d.angle_alpha),
            omega_a: self.f64("omega_a")?.unwrap_or(d.omega_a),
            omega_c: d.omega_c,
            mode_volume_v: self.f64("mode_volume_V")?.unwrap_or(d.mode_volume_v),
        };
        p = match self.f64("omega_c")? {
            Some(w) => LatticeParams { omega_c: w, ..p },
            None => p
                .with_cavity_on_exciton(1)
                .map_err(|e| ConfigError::Invalid(e.to_string()))?,
        };
        p.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(p)
    }

    /// Drive parameters, or `None` when no drive key is present.
    pub fn drive(&self) -> Result<Option<DriveParams>, ConfigError> {
        if !self.has_any(DRIVE_KEYS) {
            return Ok(None);
        }
        let d = DriveParams::default();
        let gamma = self.f64("gamma")?.unwrap_or(d.gamma);
        let p = DriveParams {
            gamma,
            gamma_m: self.f64("gamma_m")?.unwrap_or(2.0 * gamma),
            delta: self.f64("delta")?.unwrap_or(d.delta),
            f1: self.f64("f1")?.unwrap_or(d.f1),
            delta_l: self.f64("Delta_L")?.unwrap_or(d.delta_l),
            e_l: self.f64("E_L")?.unwrap_or(d.e_l),
            g0: self.f64("G0")?.unwrap_or(d.g0),
            omega_m: self.f64("omega_m")?.unwrap_or(d.omega_m),
        };
        p.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(Some(p))
    }

    /// `key=value` pairs in key order, for provenance headers.
    pub fn echo(&self) -> String {
        self.entries
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}
