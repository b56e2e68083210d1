//! Run configuration: a strict TOML schema with four sections.
//!
//! ```toml
//! [physical]
//! preset = "cs133"
//! g2d = 2.5e-39
//!
//! [geometry]
//! delta = 1.0
//! c_s = 1.0
//!
//! [detection]
//! mu_sq = "sql"
//! delta_lo = 10.0
//! nu_min = -5.0
//! nu_max = 5.0
//! grid = 200
//!
//! [simulate]
//! seed = 42
//! n_samples = 1048576
//! sample_rate = 4.0
//! segments = 256
//! branch = "both"
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use udwsim::analog::{sound_speed, CondensateLaserParams};
use udwsim::detection::mu_sq_sql;
use udwsim::response::DetectorGeometry;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalSection>,
    #[serde(default)]
    pub geometry: GeometrySection,
    #[serde(default)]
    pub detection: DetectionSection,
    #[serde(default)]
    pub simulate: SimulateSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Cs133,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g2d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beam_radius: Option<f64>,
}

impl PhysicalSection {
    /// Preset values overlaid with any explicit fields.
    pub fn resolve(&self) -> CliResult<CondensateLaserParams> {
        let base = self.preset.map(|Preset::Cs133| CondensateLaserParams::cs133());
        let pick = |name: &str, explicit: Option<f64>, preset: Option<f64>| {
            explicit
                .or(preset)
                .ok_or_else(|| CliError::Config(format!("missing physical.{name} (no preset given)")))
        };
        let params = CondensateLaserParams {
            mass: pick("mass", self.mass, base.map(|b| b.mass))?,
            density: pick("density", self.density, base.map(|b| b.density))?,
            g2d: self.g2d.or(base.and_then(|b| b.g2d)),
            omega0: pick("omega0", self.omega0, base.map(|b| b.omega0))?,
            alpha_r: self.alpha_r.or(base.and_then(|b| b.alpha_r)),
            alpha: self.alpha.or(base.and_then(|b| b.alpha)),
            beam_radius: pick("beam_radius", self.beam_radius, base.map(|b| b.beam_radius))?,
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x1: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x2: Option<[f64; 2]>,
    /// Overrides the sound speed derived from `[physical]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_s: Option<f64>,
}

impl Default for GeometrySection {
    fn default() -> Self {
        Self {
            delta: Some(1.0),
            x1: None,
            x2: None,
            c_s: Some(1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MuKeyword {
    Sql,
    Squeezed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MuSetting {
    Value(f64),
    Keyword(MuKeyword),
}

impl MuSetting {
    pub fn mu_sq(&self) -> f64 {
        match *self {
            Self::Value(v) => v,
            Self::Keyword(_) => mu_sq_sql(),
        }
    }

    pub fn squeezed(&self) -> bool {
        matches!(self, Self::Keyword(MuKeyword::Squeezed))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Value(_) => "value",
            Self::Keyword(MuKeyword::Sql) => "sql",
            Self::Keyword(MuKeyword::Squeezed) => "squeezed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionSection {
    #[serde(default = "default_mu")]
    pub mu_sq: MuSetting,
    #[serde(default = "default_delta_lo")]
    pub delta_lo: f64,
    #[serde(default = "default_nu_min")]
    pub nu_min: f64,
    #[serde(default = "default_nu_max")]
    pub nu_max: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub single_trajectory: bool,
}

fn default_mu() -> MuSetting {
    MuSetting::Keyword(MuKeyword::Sql)
}
fn default_delta_lo() -> f64 {
    10.0
}
fn default_nu_min() -> f64 {
    -5.0
}
fn default_nu_max() -> f64 {
    5.0
}
fn default_grid() -> usize {
    200
}

impl Default for DetectionSection {
    fn default() -> Self {
        Self {
            mu_sq: default_mu(),
            delta_lo: default_delta_lo(),
            nu_min: default_nu_min(),
            nu_max: default_nu_max(),
            grid: default_grid(),
            single_trajectory: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimBranch {
    Sum,
    Difference,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_n_samples")]
    pub n_samples: usize,
    #[serde(default = "default_sample_rate")]
    pub sample_rate: f64,
    /// Minimum number of averaged Welch segments.
    #[serde(default = "default_segments")]
    pub segments: usize,
    #[serde(default = "default_branch")]
    pub branch: SimBranch,
}

fn default_seed() -> u64 {
    42
}
fn default_n_samples() -> usize {
    1 << 20
}
fn default_sample_rate() -> f64 {
    4.0
}
fn default_segments() -> usize {
    256
}
fn default_branch() -> SimBranch {
    SimBranch::Both
}

impl Default for SimulateSection {
    fn default() -> Self {
        Self {
            seed: default_seed(),
            n_samples: default_n_samples(),
            sample_rate: default_sample_rate(),
            segments: default_segments(),
            branch: default_branch(),
        }
    }
}

impl SimulateSection {
    /// Longest power-of-two segment giving at least `segments` half-overlapped
    /// segments.
    pub fn segment_len(&self) -> CliResult<usize> {
        let n = self.n_samples;
        let mut len = n;
        while len >= 2 {
            let count = (n - len) / (len / 2) + 1;
            if count >= self.segments {
                return Ok(len);
            }
            len /= 2;
        }
        Err(CliError::Config(format!(
            "simulate.segments = {} is not reachable with n_samples = {n}",
            self.segments
        )))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    /// SHA-256 of the canonical serialization, hex encoded.
    pub fn hash(&self) -> CliResult<String> {
        let digest = Sha256::digest(self.to_toml()?.as_bytes());
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn validate(&self) -> CliResult<()> {
        let d = &self.detection;
        if !(d.nu_min < d.nu_max) || !d.nu_min.is_finite() || !d.nu_max.is_finite() {
            return Err(CliError::Config(format!(
                "detection band [{}, {}) is empty",
                d.nu_min, d.nu_max
            )));
        }
        if d.grid == 0 {
            return Err(CliError::Config("detection.grid must be at least 1".into()));
        }
        if !(d.delta_lo > 0.0) || !d.delta_lo.is_finite() {
            return Err(CliError::Config("detection.delta_lo must be positive".into()));
        }
        if let MuSetting::Value(v) = d.mu_sq {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CliError::Config("detection.mu_sq must be positive".into()));
            }
        }
        let s = &self.simulate;
        if !s.n_samples.is_power_of_two() || s.n_samples < 2 {
            return Err(CliError::Config("simulate.n_samples must be a power of two".into()));
        }
        if !(s.sample_rate > 0.0) || !s.sample_rate.is_finite() {
            return Err(CliError::Config("simulate.sample_rate must be positive".into()));
        }
        if s.seed > i64::MAX as u64 {
            return Err(CliError::Config("simulate.seed must fit in a signed 64-bit integer".into()));
        }
        let g = &self.geometry;
        if g.delta.is_some() && (g.x1.is_some() || g.x2.is_some()) {
            return Err(CliError::Config("geometry: give either delta or x1/x2, not both".into()));
        }
        if g.x1.is_some() != g.x2.is_some() {
            return Err(CliError::Config("geometry: x1 and x2 must be given together".into()));
        }
        Ok(())
    }

    pub fn physical_params(&self) -> CliResult<Option<CondensateLaserParams>> {
        self.physical.as_ref().map(PhysicalSection::resolve).transpose()
    }

    pub fn geometry(&self) -> CliResult<DetectorGeometry> {
        let g = &self.geometry;
        let c_s = match g.c_s {
            Some(c) => c,
            None => match self.physical_params()? {
                Some(p) if p.g2d.is_some() => sound_speed(&p)?,
                _ => {
                    return Err(CliError::Config(
                        "missing geometry.c_s (or physical.g2d to derive it)".into(),
                    ))
                }
            },
        };
        match (g.delta, g.x1, g.x2) {
            (Some(delta), _, _) => Ok(DetectorGeometry::from_separation(delta, c_s)?),
            (None, Some(x1), Some(x2)) => Ok(DetectorGeometry::new(x1, x2, c_s)?),
            _ => Err(CliError::Config("missing geometry.delta (or x1 and x2)".into())),
        }
    }

    /// `ν_i = ν_min + (ν_max - ν_min) i / n` for `i < n`, skipping `ν = 0`.
    pub fn frequency_grid(&self) -> Vec<f64> {
        let d = &self.detection;
        let n = d.grid;
        (0..n)
            .map(|i| d.nu_min + (d.nu_max - d.nu_min) * i as f64 / n as f64)
            .filter(|&nu| nu != 0.0)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_missing_sections() {
        let cfg = RunConfig::from_toml("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.geometry().unwrap().delta_over_cs(), 1.0);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_toml("[detection]\nmu = 1.0\n").is_err());
        assert!(RunConfig::from_toml("[extra]\n").is_err());
    }

    #[test]
    fn mu_setting_forms() {
        let a = RunConfig::from_toml("[detection]\nmu_sq = 2\n").unwrap();
        assert_eq!(a.detection.mu_sq, MuSetting::Value(2.0));
        let b = RunConfig::from_toml("[detection]\nmu_sq = \"squeezed\"\n").unwrap();
        assert!(b.detection.mu_sq.squeezed());
        assert!(RunConfig::from_toml("[detection]\nmu_sq = \"loud\"\n").is_err());
    }

    #[test]
    fn grid_skips_zero() {
        let cfg = RunConfig::from_toml("[detection]\nnu_min = -1.0\nnu_max = 1.0\ngrid = 4\n").unwrap();
        assert_eq!(cfg.frequency_grid(), vec![-1.0, -0.5, 0.5]);
    }

    #[test]
    fn segment_length_choice() {
        let s = SimulateSection::default();
        assert_eq!(s.segment_len().unwrap(), 4096);
        let few = SimulateSection { segments: 1, ..s.clone() };
        assert_eq!(few.segment_len().unwrap(), 1 << 20);
    }

    #[test]
    fn missing_sound_speed_is_named() {
        let err = RunConfig::from_toml("[physical]\npreset = \"cs133\"\n[geometry]\ndelta = 1e-6\n")
            .unwrap()
            .geometry()
            .unwrap_err();
        assert!(err.to_string().contains("geometry.c_s"));
        let err = RunConfig::from_toml("[physical]\nmass = 1.0\n").unwrap().physical_params().unwrap_err();
        assert!(err.to_string().contains("physical.density"));
    }
}
