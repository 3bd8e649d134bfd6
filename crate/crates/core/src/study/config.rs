use std::fmt::{self, Write};
use std::path::PathBuf;

use thiserror::Error;

use crate::analysis::Example;
use crate::assembly::{CrackFaceMode, NITSCHE_GAMMA};
use crate::enrichment::{CutoffSpec, Method};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown key `{key}`")]
    UnknownKey { key: String },
    #[error("invalid value `{value}` for `{key}`: expected {expected}")]
    InvalidValue { key: String, value: String, expected: String },
    #[error("unknown case `{name}`; valid cases: example1, example2, example3")]
    UnknownCase { name: String },
    #[error("`{key}`: {message}")]
    Incompatible { key: String, message: String },
}

fn invalid(key: &str, value: &str, expected: &str) -> ConfigError {
    ConfigError::InvalidValue { key: key.into(), value: value.into(), expected: expected.into() }
}

/// Run configuration of a case or a refinement study.
///
/// Levels are `N` for the crack examples (odd on unfitted meshes, even on
/// fitted ones) and `1/h` for the disk example.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub case: Example,
    pub method: Method,
    pub levels: Vec<f64>,
    pub r_s: f64,
    pub r0: f64,
    pub r1: f64,
    pub out: Option<PathBuf>,
    pub plots: bool,
    pub crack_faces: CrackFaceMode,
    pub gamma: f64,
    /// Crack-fitted meshes; defaults to true for `p1` and false otherwise.
    pub fitted: Option<bool>,
    pub parallel: bool,
    /// Mesh file to use instead of the generated mesh of the case.
    pub mesh: Option<PathBuf>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        let cut = CutoffSpec::default();
        StudyConfig {
            case: Example::Unconstrained,
            method: Method::CutXfem,
            levels: Vec::new(),
            r_s: 0.5,
            r0: cut.r0,
            r1: cut.r1,
            out: None,
            plots: false,
            crack_faces: CrackFaceMode::Nitsche,
            gamma: NITSCHE_GAMMA,
            fitted: None,
            parallel: false,
            mesh: None,
        }
    }
}

const KEYS: &str = "case, method, levels, rs, r0, r1, out, plots, crack_faces, gamma, fitted, parallel, mesh";

impl StudyConfig {
    /// Parses a `key = value` document; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = StudyConfig::default();
        cfg.apply_document(text)?;
        Ok(cfg)
    }

    pub fn apply_document(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Sets one key; used for the document and for command-line overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let num = |v: &str| v.parse::<f64>().map_err(|_| invalid(key, v, "a number"));
        let flag = |v: &str| match v {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            _ => Err(invalid(key, v, "true or false")),
        };
        match key {
            "case" => {
                self.case = Example::parse(value).ok_or_else(|| ConfigError::UnknownCase { name: value.into() })?
            }
            "method" => {
                self.method = Method::parse(value).ok_or_else(|| invalid(key, value, "cut, classic or p1"))?
            }
            "levels" => {
                self.levels = if value.is_empty() {
                    Vec::new()
                } else {
                    value.split(',').map(|v| num(v.trim())).collect::<Result<_, _>>()?
                }
            }
            "rs" | "r_s" => self.r_s = num(value)?,
            "r0" => self.r0 = num(value)?,
            "r1" => self.r1 = num(value)?,
            "out" => self.out = (!value.is_empty()).then(|| PathBuf::from(value)),
            "plots" => self.plots = flag(value)?,
            "crack_faces" => {
                self.crack_faces = CrackFaceMode::parse(value)
                    .ok_or_else(|| invalid(key, value, "nitsche, penalty or free"))?
            }
            "gamma" => self.gamma = num(value)?,
            "fitted" => {
                self.fitted = match value {
                    "auto" => None,
                    v => Some(flag(v)?),
                }
            }
            "parallel" => self.parallel = flag(value)?,
            "mesh" => self.mesh = (!value.is_empty()).then(|| PathBuf::from(value)),
            _ => return Err(ConfigError::UnknownKey { key: format!("{key} (valid keys: {KEYS})") }),
        }
        Ok(())
    }

    pub fn is_fitted(&self) -> bool {
        self.fitted.unwrap_or(self.method == Method::P1Plain)
    }

    pub fn cutoff(&self) -> CutoffSpec {
        CutoffSpec { r0: self.r0, r1: self.r1 }
    }

    /// Checks field ranges and method/case/level compatibility.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key: &str, message: String| Err(ConfigError::Incompatible { key: key.into(), message });
        if self.levels.is_empty() {
            return bad("levels", "at least one level is required".into());
        }
        if !self.levels.windows(2).all(|w| w[0] < w[1]) {
            return bad("levels", "levels must be strictly increasing".into());
        }
        if !(self.r_s > 0.0) {
            return bad("rs", format!("must be positive (got {})", self.r_s));
        }
        if CutoffSpec::new(self.r0, self.r1).is_none() {
            return bad("r0", format!("need 0 < r0 < r1 (got r0 = {}, r1 = {})", self.r0, self.r1));
        }
        if !(self.gamma > 0.0) {
            return bad("gamma", format!("must be positive (got {})", self.gamma));
        }
        if self.mesh.is_some() {
            if self.levels.len() != 1 {
                return bad("mesh", "a mesh file is a single level".into());
            }
            return Ok(());
        }
        match self.case {
            Example::Unconstrained | Example::Constrained => {
                let fitted = self.is_fitted();
                if self.method == Method::P1Plain && !fitted {
                    return bad("fitted", "p1 on a crack domain needs crack-fitted meshes".into());
                }
                for &l in &self.levels {
                    if l.fract() != 0.0 || l < 1.0 {
                        return bad("levels", format!("N must be a positive integer (got {l})"));
                    }
                    let n = l as usize;
                    if fitted && n % 2 != 0 {
                        return bad("levels", format!("fitted meshes need even N (got {n})"));
                    }
                    if !fitted && n % 2 == 0 {
                        return bad("levels", format!("unfitted meshes need odd N (got {n})"));
                    }
                }
            }
            Example::Disk => {
                if self.fitted == Some(true) {
                    return bad("fitted", "the disk example has no crack".into());
                }
                for &l in &self.levels {
                    if !(l > 1.0) {
                        return bad("levels", format!("disk levels are 1/h > 1 (got {l})"));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for StudyConfig {
    /// Canonical document; [`StudyConfig::parse`] reads it back unchanged.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        let levels: Vec<String> = self.levels.iter().map(|l| format!("{l:?}")).collect();
        let _ = writeln!(s, "case = {}", self.case);
        let _ = writeln!(s, "method = {}", self.method);
        let _ = writeln!(s, "levels = {}", levels.join(", "));
        let _ = writeln!(s, "rs = {:?}", self.r_s);
        let _ = writeln!(s, "r0 = {:?}", self.r0);
        let _ = writeln!(s, "r1 = {:?}", self.r1);
        let _ = writeln!(
            s,
            "out = {}",
            self.out.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
        );
        let _ = writeln!(s, "plots = {}", self.plots);
        let _ = writeln!(s, "crack_faces = {}", self.crack_faces.as_str());
        let _ = writeln!(s, "gamma = {:?}", self.gamma);
        let _ = writeln!(
            s,
            "fitted = {}",
            self.fitted.map_or("auto".to_string(), |b| b.to_string())
        );
        let _ = writeln!(s, "parallel = {}", self.parallel);
        let _ = writeln!(
            s,
            "mesh = {}",
            self.mesh.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
        );
        f.write_str(&s)
    }
}
