//! Run configuration: a small key = value file format plus defaults that
//! reproduce the reference numbers (a_0 = 1/4, b = 1/2, golden frequency).

use std::fmt;
use std::path::Path;

use crate::circle;
use crate::error::{Error, Result};
use crate::skew::PinchMode;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Denjoy,
    Qpf,
    QpfFilled,
    General,
    Sharkovsky,
    Rees,
}

impl Construction {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "denjoy" => Ok(Self::Denjoy),
            "qpf" => Ok(Self::Qpf),
            "qpf-filled" => Ok(Self::QpfFilled),
            "general" => Ok(Self::General),
            "sharkovsky" => Ok(Self::Sharkovsky),
            "rees" => Ok(Self::Rees),
            other => Err(Error::Config(format!(
                "unknown construction '{other}' (expected denjoy | qpf | qpf-filled | general | sharkovsky | rees)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Denjoy => "denjoy",
            Self::Qpf => "qpf",
            Self::QpfFilled => "qpf-filled",
            Self::General => "general",
            Self::Sharkovsky => "sharkovsky",
            Self::Rees => "rees",
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseKind {
    Rotation,
    Torus2,
    Odometer,
}

impl BaseKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rotation" => Ok(Self::Rotation),
            "torus2" => Ok(Self::Torus2),
            "odometer" => Ok(Self::Odometer),
            other => Err(Error::Config(format!(
                "unknown base '{other}' (expected rotation | torus2 | odometer)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Rotation => "rotation",
            Self::Torus2 => "torus2",
            Self::Odometer => "odometer",
        }
    }
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub construction: Construction,
    pub base: BaseKind,
    /// Driving frequency (first torus frequency for base = torus2).
    pub omega: f64,
    /// Second torus frequency.
    pub omega2: f64,
    /// Fibre rotation of the torus blow-up.
    pub rho: f64,
    /// Blow-up orbit start of the circle construction.
    pub basepoint: f64,
    /// Pinch fibre of the forced constructions.
    pub theta_star: f64,
    /// Fibre height of the torus blow-up point.
    pub x_star: f64,
    /// Weight family a_n = weight_scale * weight_ratio^|n|.
    pub weight_scale: f64,
    pub weight_ratio: f64,
    /// Truncation order N; -1 disables the blow-up.
    pub trunc: i64,
    pub pinch_mode: PinchMode,
    pub grid: usize,
    pub depth: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            construction: Construction::Denjoy,
            base: BaseKind::Rotation,
            omega: circle::golden_mean(),
            omega2: std::f64::consts::SQRT_2 - 1.0,
            rho: std::f64::consts::SQRT_2 - 1.0,
            basepoint: 0.1,
            theta_star: crate::skew::DEFAULT_THETA_STAR,
            x_star: 0.3,
            weight_scale: 0.25,
            weight_ratio: 1.0 / 3.0,
            trunc: 40,
            pinch_mode: PinchMode::OneSided,
            grid: 10_000,
            depth: 30,
            seed: 42,
        }
    }
}

impl RunConfig {
    /// Reads a key = value file ('#' starts a comment). Unknown keys are
    /// rejected; values override the defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("'{v}' is not a number (key '{key}')")))
        };
        match key {
            "construction" => self.construction = Construction::parse(value)?,
            "base" => self.base = BaseKind::parse(value)?,
            "omega" => self.omega = num(value)?,
            "omega2" => self.omega2 = num(value)?,
            "rho" => self.rho = num(value)?,
            "basepoint" => self.basepoint = num(value)?,
            "theta_star" => self.theta_star = num(value)?,
            "x_star" => self.x_star = num(value)?,
            "weight_scale" => self.weight_scale = num(value)?,
            "weight_ratio" => self.weight_ratio = num(value)?,
            "trunc" => {
                self.trunc = value
                    .parse::<i64>()
                    .map_err(|_| Error::Config(format!("'{value}' is not an integer")))?
            }
            "pinch" => {
                self.pinch_mode = match value {
                    "one-sided" => PinchMode::OneSided,
                    "oscillating" => PinchMode::Oscillating,
                    other => {
                        return Err(Error::Config(format!(
                            "unknown pinch mode '{other}' (expected one-sided | oscillating)"
                        )))
                    }
                }
            }
            "grid" => {
                self.grid = value
                    .parse::<usize>()
                    .map_err(|_| Error::Config(format!("'{value}' is not a grid size")))?
            }
            "depth" => {
                self.depth = value
                    .parse::<usize>()
                    .map_err(|_| Error::Config(format!("'{value}' is not a depth")))?
            }
            "seed" => {
                self.seed = value
                    .parse::<u64>()
                    .map_err(|_| Error::Config(format!("'{value}' is not a seed")))?
            }
            other => return Err(Error::Config(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.weight_scale > 0.0 && self.weight_ratio > 0.0 && self.weight_ratio < 1.0) {
            return Err(Error::Config(format!(
                "weights need scale > 0 and ratio in (0, 1); got {} and {}",
                self.weight_scale, self.weight_ratio
            )));
        }
        let total = self.weight_scale * (1.0 + self.weight_ratio) / (1.0 - self.weight_ratio);
        if total >= 1.0 {
            return Err(Error::Config(format!("weight family sums to {total} >= 1")));
        }
        if self.trunc < -1 {
            return Err(Error::Config("trunc must be >= -1".into()));
        }
        if self.grid < 16 {
            return Err(Error::Config("grid must be at least 16".into()));
        }
        for (name, v) in [
            ("omega", self.omega),
            ("omega2", self.omega2),
            ("rho", self.rho),
            ("basepoint", self.basepoint),
            ("theta_star", self.theta_star),
            ("x_star", self.x_star),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Canonical serialization feeding the config hash.
    pub fn canonical(&self) -> String {
        format!(
            "construction={};base={};omega={:.17e};omega2={:.17e};rho={:.17e};basepoint={:.17e};\
             theta_star={:.17e};x_star={:.17e};weight_scale={:.17e};weight_ratio={:.17e};\
             trunc={};pinch={};grid={};depth={};seed={}",
            self.construction,
            self.base,
            self.omega,
            self.omega2,
            self.rho,
            self.basepoint,
            self.theta_star,
            self.x_star,
            self.weight_scale,
            self.weight_ratio,
            self.trunc,
            match self.pinch_mode {
                PinchMode::OneSided => "one-sided",
                PinchMode::Oscillating => "oscillating",
            },
            self.grid,
            self.depth,
            self.seed,
        )
    }

    /// FNV-1a hash of the canonical form.
    pub fn hash(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in self.canonical().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_hash_stably() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.hash(), cfg.clone().hash());
    }

    #[test]
    fn parse_round_trip() {
        let dir = std::env::temp_dir().join("pinch-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(
            &path,
            "# demo\nconstruction = qpf\npinch = oscillating\ntrunc = 12\nseed = 7\n",
        )
        .unwrap();
        let cfg = RunConfig::from_file(&path).unwrap();
        assert_eq!(cfg.construction, Construction::Qpf);
        assert_eq!(cfg.pinch_mode, PinchMode::Oscillating);
        assert_eq!(cfg.trunc, 12);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let mut cfg = RunConfig::default();
        assert!(cfg.set("frobnicate", "1").is_err());
        assert!(cfg.set("omega", "abc").is_err());
        assert!(cfg.set("pinch", "diagonal").is_err());
        cfg.weight_scale = 0.9;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn hash_differs_on_any_field() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.seed = 43;
        assert_ne!(a.hash(), b.hash());
        let mut c = a.clone();
        c.trunc = -1;
        assert_ne!(a.hash(), c.hash());
    }
}
