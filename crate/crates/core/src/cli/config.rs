//! Sectioned `key = value` run configuration.
//!
//! ```text
//! # comment
//! [model]
//! m0 = 1.0
//! [packet]
//! p_center = 0, 0, 0.75
//! ```
//!
//! All values are in the user unit system declared under `[units]` and are
//! converted to natural units when the run is assembled.

use std::collections::BTreeSet;

use crate::analysis::{EMFieldSpec, Regime, ScalarPotential, VectorPotential};
use crate::error::{Error, Result};
use crate::hilbert::MomentumGrid;
use crate::operators::ModelParams;
use crate::packets::{plan_grid, BranchMix, PacketSpec};
use crate::units::UnitSystem;

/// Where a setting came from, for diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag(String),
}

impl Origin {
    fn error(&self, message: String) -> Error {
        match self {
            Origin::Line(line) => Error::Config { line: *line, message },
            Origin::Flag(flag) => Error::validation(format!("{flag}: {message}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub section: String,
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// Splits config text into entries; syntax errors carry their line number.
pub fn parse_config(text: &str) -> Result<Vec<Entry>> {
    let mut section: Option<String> = None;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::Config {
                    line,
                    message: format!("unterminated section header '{content}'"),
                })?
                .trim();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Config {
                    line,
                    message: format!("invalid section name '{name}'"),
                });
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
            line,
            message: format!("expected 'key = value', found '{content}'"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(Error::Config {
                line,
                message: "missing key before '='".into(),
            });
        }
        let sec = section.clone().ok_or_else(|| Error::Config {
            line,
            message: format!("key '{key}' appears before any [section] header"),
        })?;
        if !seen.insert((sec.clone(), key.to_string())) {
            return Err(Error::Config {
                line,
                message: format!("duplicate key '{key}' in [{sec}]"),
            });
        }
        out.push(Entry {
            section: sec,
            key: key.to_string(),
            value: value.to_string(),
            line,
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchKind {
    Plus,
    Minus,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AKind {
    Zero,
    Constant,
    Linear,
    Circular,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhiKind {
    Zero,
    Constant,
    Linear,
    Harmonic,
}

/// Complete run description in user units.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub hbar: f64,
    pub c: f64,

    pub m0: f64,
    pub tau0: f64,
    pub q: f64,

    /// `None` lets the planner size the grid.
    pub grid_n: Option<[usize; 3]>,
    pub grid_p_max: Option<[f64; 3]>,
    pub grid_min_n: usize,

    pub p_center: [f64; 3],
    pub sigma_p: [f64; 3],
    pub r_center: [f64; 3],
    pub branch: BranchKind,
    pub mix_weight: f64,
    pub spin_axis: [f64; 3],
    pub spin_sign: f64,
    pub helicity: bool,

    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,

    pub a_kind: AKind,
    pub a: [f64; 3],
    pub a_gradient: [[f64; 3]; 3],
    pub phi_kind: PhiKind,
    pub phi: [f64; 3],

    pub eigen_r: f64,
    pub regime: Regime,
    pub limits_p: f64,
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            hbar: 1.0,
            c: 1.0,
            m0: 1.0,
            tau0: 0.0,
            q: 1.0,
            grid_n: None,
            grid_p_max: None,
            grid_min_n: 16,
            p_center: [0.0, 0.0, 0.75],
            sigma_p: [0.01; 3],
            r_center: [0.0; 3],
            branch: BranchKind::Plus,
            mix_weight: 0.5,
            spin_axis: [0.0, 0.0, 1.0],
            spin_sign: 1.0,
            helicity: false,
            t_start: 0.0,
            t_end: 10.0,
            samples: 11,
            a_kind: AKind::Zero,
            a: [0.0; 3],
            a_gradient: [[0.0; 3]; 3],
            phi_kind: PhiKind::Zero,
            phi: [0.0; 3],
            eigen_r: 3.0,
            regime: Regime::NonRelativistic,
            limits_p: 0.1,
            epsilon: 0.1,
            seed: 1,
        }
    }
}

fn parse_f64(v: &str) -> std::result::Result<f64, String> {
    let x: f64 = v.trim().parse().map_err(|_| format!("'{v}' is not a number"))?;
    if !x.is_finite() {
        return Err(format!("'{v}' is not finite"));
    }
    Ok(x)
}

fn parse_list(v: &str) -> std::result::Result<Vec<f64>, String> {
    v.split(',').map(parse_f64).collect()
}

fn parse_vec3(v: &str) -> std::result::Result<[f64; 3], String> {
    let l = parse_list(v)?;
    <[f64; 3]>::try_from(l).map_err(|_| format!("'{v}' is not a 3-vector 'x,y,z'"))
}

/// A scalar (applied to all axes) or a 3-vector.
fn parse_axes(v: &str) -> std::result::Result<[f64; 3], String> {
    let l = parse_list(v)?;
    match l.len() {
        1 => Ok([l[0]; 3]),
        3 => Ok([l[0], l[1], l[2]]),
        _ => Err(format!("'{v}' must be a scalar or 'x,y,z'")),
    }
}

fn parse_usize(v: &str) -> std::result::Result<usize, String> {
    v.trim().parse().map_err(|_| format!("'{v}' is not a non-negative integer"))
}

fn parse_bool(v: &str) -> std::result::Result<bool, String> {
    match v.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("'{v}' is not a boolean")),
    }
}

impl RunConfig {
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for e in parse_config(text)? {
            cfg.set(&e.section, &e.key, &e.value, &Origin::Line(e.line))?;
        }
        Ok(cfg)
    }

    /// Applies one setting.
    pub fn set(&mut self, section: &str, key: &str, value: &str, origin: &Origin) -> Result<()> {
        let r = self.set_inner(section, key, value);
        r.map_err(|m| origin.error(m))
    }

    fn set_inner(&mut self, section: &str, key: &str, v: &str) -> std::result::Result<(), String> {
        match (section, key) {
            ("units", "hbar") => self.hbar = parse_f64(v)?,
            ("units", "c") => self.c = parse_f64(v)?,

            ("model", "m0") => self.m0 = parse_f64(v)?,
            ("model", "tau0") => self.tau0 = parse_f64(v)?,
            ("model", "q") => self.q = parse_f64(v)?,

            ("grid", "n") => {
                let l: Vec<usize> = v.split(',').map(parse_usize).collect::<std::result::Result<_, _>>()?;
                self.grid_n = Some(match l.len() {
                    1 => [l[0]; 3],
                    3 => [l[0], l[1], l[2]],
                    _ => return Err(format!("'{v}' must be a node count or 'nx,ny,nz'")),
                });
            }
            ("grid", "p_max") => self.grid_p_max = Some(parse_axes(v)?),
            ("grid", "min_n") => self.grid_min_n = parse_usize(v)?,

            ("packet", "p_center") => self.p_center = parse_vec3(v)?,
            ("packet", "sigma_p") => self.sigma_p = parse_axes(v)?,
            ("packet", "r_center") => self.r_center = parse_vec3(v)?,
            ("packet", "branch") => {
                self.branch = match v {
                    "plus" => BranchKind::Plus,
                    "minus" => BranchKind::Minus,
                    "mixed" => BranchKind::Mixed,
                    _ => return Err(format!("branch '{v}' must be plus, minus or mixed")),
                }
            }
            ("packet", "mix_weight") => self.mix_weight = parse_f64(v)?,
            ("packet", "spin_axis") => self.spin_axis = parse_vec3(v)?,
            ("packet", "spin_sign") => self.spin_sign = parse_f64(v)?,
            ("packet", "helicity") => self.helicity = parse_bool(v)?,

            ("schedule", "t_start") => self.t_start = parse_f64(v)?,
            ("schedule", "t_end") => self.t_end = parse_f64(v)?,
            ("schedule", "samples") => self.samples = parse_usize(v)?,

            ("em", "a_kind") => {
                self.a_kind = match v {
                    "zero" => AKind::Zero,
                    "constant" => AKind::Constant,
                    "linear" => AKind::Linear,
                    "circular" => AKind::Circular,
                    _ => return Err(format!("a_kind '{v}' must be zero, constant, linear or circular")),
                }
            }
            ("em", "a") => self.a = parse_vec3(v)?,
            ("em", "a_gradient") => {
                let l = parse_list(v)?;
                if l.len() != 9 {
                    return Err(format!("a_gradient needs 9 comma-separated values (row-major), got {}", l.len()));
                }
                self.a_gradient = std::array::from_fn(|i| std::array::from_fn(|j| l[3 * i + j]));
            }
            ("em", "phi_kind") => {
                self.phi_kind = match v {
                    "zero" => PhiKind::Zero,
                    "constant" => PhiKind::Constant,
                    "linear" => PhiKind::Linear,
                    "harmonic" => PhiKind::Harmonic,
                    _ => return Err(format!("phi_kind '{v}' must be zero, constant, linear or harmonic")),
                }
            }
            ("em", "phi") => self.phi = parse_axes(v)?,

            ("eigen", "r") => self.eigen_r = parse_f64(v)?,
            ("limits", "regime") => self.regime = v.parse().map_err(|e: Error| e.to_string())?,
            ("limits", "p") => self.limits_p = parse_f64(v)?,
            ("shift", "epsilon") => self.epsilon = parse_f64(v)?,
            ("check", "seed") => self.seed = v.trim().parse().map_err(|_| format!("'{v}' is not a seed"))?,

            _ => return Err(format!("unknown setting '{key}' in [{section}]")),
        }
        Ok(())
    }

    pub fn units(&self) -> Result<UnitSystem> {
        UnitSystem::new(self.hbar, self.c)
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        let u = self.units()?;
        ModelParams::new(self.m0, u.time_in(self.tau0), self.q)
    }

    pub fn packet_spec(&self) -> Result<PacketSpec> {
        let u = self.units()?;
        let branch = match self.branch {
            BranchKind::Plus => BranchMix::Plus,
            BranchKind::Minus => BranchMix::Minus,
            BranchKind::Mixed => BranchMix::Mixed(self.mix_weight),
        };
        let mut spec = PacketSpec::new(self.p_center.map(|p| u.momentum_in(p)), self.sigma_p.map(|s| u.momentum_in(s)), branch)
            .with_r_center(self.r_center.map(|x| u.length_in(x)))
            .with_spin(self.spin_axis, self.spin_sign);
        if self.helicity {
            spec = spec.with_helicity(self.spin_sign);
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Sample times in natural units.
    pub fn times(&self) -> Result<Vec<f64>> {
        let u = self.units()?;
        if self.samples == 0 {
            return Err(Error::validation("schedule needs at least one sample"));
        }
        if self.samples > 1 && !(self.t_end > self.t_start) {
            return Err(Error::validation("schedule needs t_end > t_start"));
        }
        Ok(crate::dynamics::uniform_times(u.time_in(self.t_start), u.time_in(self.t_end), self.samples))
    }

    /// The explicit grid if one is configured, otherwise a planned one that
    /// keeps the packet localized over the schedule.
    pub fn grid(&self, spec: &PacketSpec, params: &ModelParams) -> Result<MomentumGrid> {
        let u = self.units()?;
        match (self.grid_n, self.grid_p_max) {
            (Some(n), Some(p)) => MomentumGrid::anisotropic(n, p.map(|v| u.momentum_in(v))),
            (None, None) => {
                let times = self.times()?;
                let t_max = times.iter().fold(0.0f64, |a, t| a.max(t.abs()));
                plan_grid(spec, params, t_max, self.grid_min_n)
            }
            _ => Err(Error::validation("[grid] needs both n and p_max, or neither")),
        }
    }

    pub fn em_spec(&self) -> Result<EMFieldSpec> {
        let u = self.units()?;
        let hc = u.hbar * u.c;
        let a = match self.a_kind {
            AKind::Zero => VectorPotential::Zero,
            AKind::Constant => VectorPotential::Constant(self.a),
            AKind::Linear => VectorPotential::Linear(self.a_gradient.map(|row| row.map(|g| g * hc))),
            AKind::Circular => VectorPotential::Circular(self.a.map(|b| b * hc)),
        };
        let phi = match self.phi_kind {
            PhiKind::Zero => ScalarPotential::Zero,
            PhiKind::Constant => ScalarPotential::Constant(self.phi[0]),
            PhiKind::Linear => ScalarPotential::Linear(self.phi.map(|e| e * hc)),
            PhiKind::Harmonic => ScalarPotential::Harmonic(self.phi[0] * hc * hc),
        };
        let em = EMFieldSpec { a, phi, q: self.q };
        em.validate()?;
        Ok(em)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_comments_vectors() {
        let cfg = RunConfig::from_text(
            "# run\n[model]\nm0 = 2.0  # rest energy\ntau0=0.5\n\n[packet]\np_center = 0, 0.1 ,0.2\nsigma_p = 0.3\nbranch = mixed\n",
        )
        .unwrap();
        assert_eq!(cfg.m0, 2.0);
        assert_eq!(cfg.tau0, 0.5);
        assert_eq!(cfg.p_center, [0.0, 0.1, 0.2]);
        assert_eq!(cfg.sigma_p, [0.3; 3]);
        assert_eq!(cfg.branch, BranchKind::Mixed);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("[model]\nm0 = abc\n", 2),
            ("m0 = 1\n", 1),
            ("[model]\n\n[oops\n", 3),
            ("[model]\nm0 = 1\nm0 = 2\n", 3),
            ("[packet]\np_center = 1,2\n", 2),
            ("[model]\nmass = 1\n", 2),
            ("[model]\njust words\n", 2),
        ];
        for (text, want) in cases {
            match RunConfig::from_text(text) {
                Err(Error::Config { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn unit_conversion() {
        let cfg = RunConfig::from_text("[units]\nhbar = 2\nc = 4\n[model]\ntau0 = 3\n").unwrap();
        let p = cfg.model_params().unwrap();
        assert_eq!(p.tau0, 1.5);
        let s = cfg.packet_spec().unwrap();
        assert_eq!(s.p_center[2], 3.0);
    }

    #[test]
    fn schedule_validation() {
        let mut cfg = RunConfig::default();
        cfg.samples = 0;
        assert!(cfg.times().is_err());
        cfg.samples = 3;
        cfg.t_end = cfg.t_start;
        assert!(cfg.times().is_err());
    }
}
