// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Pulse programs and their line-oriented text form.
//!
//! ```text
//! # H12
//! PULSE 1,2 y -1.5707963267948966
//! DELAY 0.0024248302618816684 COUPLINGS=1,2
//! ZROT 2 3.141592653589793
//! GRAD
//! ```
//!
//! Spins are one-based in text and zero-based in memory. `COUPLINGS=ALL`
//! means free evolution under the full Hamiltonian, `COUPLINGS=NONE` a delay
//! with every coupling and shift refocused. Angles and durations are printed
//! with the shortest representation that parses back to the same `f64`.

use std::fmt;
use std::str::FromStr;

use crate::error::{QcsError, Result};
use crate::linalg::Axis;

/// RF phase of a pulse. A pulse about `-x` by `theta` is a pulse about `x` by
/// `-theta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PulseAxis {
    X,
    Y,
    MinusX,
    MinusY,
}

impl PulseAxis {
    /// Rotation axis and sign of the angle.
    pub fn resolve(self) -> (Axis, f64) {
        match self {
            PulseAxis::X => (Axis::X, 1.0),
            PulseAxis::Y => (Axis::Y, 1.0),
            PulseAxis::MinusX => (Axis::X, -1.0),
            PulseAxis::MinusY => (Axis::Y, -1.0),
        }
    }
}

impl fmt::Display for PulseAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PulseAxis::X => "x",
            PulseAxis::Y => "y",
            PulseAxis::MinusX => "-x",
            PulseAxis::MinusY => "-y",
        })
    }
}

impl FromStr for PulseAxis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "x" | "+x" => Ok(PulseAxis::X),
            "y" | "+y" => Ok(PulseAxis::Y),
            "-x" => Ok(PulseAxis::MinusX),
            "-y" => Ok(PulseAxis::MinusY),
            _ => Err(format!("unknown pulse axis '{s}'")),
        }
    }
}

/// Which couplings act during a delay.
#[derive(Debug, Clone, PartialEq)]
pub enum Couplings {
    /// Full Hamiltonian: every shift and coupling evolves.
    All,
    /// Only the listed couplings `(j, l)`, `j < l`; shifts and all other
    /// couplings are refocused. An empty list refocuses everything.
    Selective(Vec<(usize, usize)>),
}

impl Couplings {
    pub fn pair(j: usize, l: usize) -> Self {
        Couplings::Selective(vec![(j.min(l), j.max(l))])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PulseStep {
    /// Instantaneous hard rotation `exp(i angle sum_targets I_axis)`.
    Pulse { targets: Vec<usize>, axis: PulseAxis, angle: f64 },
    Delay { duration: f64, couplings: Couplings },
    /// `exp(i angle I_z)` on one spin.
    ZRot { target: usize, angle: f64 },
    /// Field-gradient pulse followed by spatial averaging.
    Grad,
    /// Section marker, `# text` in the text form.
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseProgram {
    steps: Vec<PulseStep>,
}

impl PulseProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_steps(steps: Vec<PulseStep>) -> Self {
        Self { steps }
    }

    pub fn steps(&self) -> &[PulseStep] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<PulseStep> {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, step: PulseStep) -> &mut Self {
        self.steps.push(step);
        self
    }

    pub fn pulse(&mut self, targets: &[usize], axis: PulseAxis, angle: f64) -> &mut Self {
        self.push(PulseStep::Pulse { targets: targets.to_vec(), axis, angle })
    }

    pub fn delay(&mut self, duration: f64, couplings: Couplings) -> &mut Self {
        self.push(PulseStep::Delay { duration, couplings })
    }

    pub fn zrot(&mut self, target: usize, angle: f64) -> &mut Self {
        self.push(PulseStep::ZRot { target, angle })
    }

    pub fn grad(&mut self) -> &mut Self {
        self.push(PulseStep::Grad)
    }

    pub fn label(&mut self, text: &str) -> &mut Self {
        self.push(PulseStep::Label(text.to_string()))
    }

    pub fn extend(&mut self, other: &PulseProgram) -> &mut Self {
        self.steps.extend(other.steps.iter().cloned());
        self
    }

    /// Sum of all delay durations in seconds.
    pub fn total_delay(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| match s {
                PulseStep::Delay { duration, .. } => *duration,
                _ => 0.0,
            })
            .sum()
    }

    pub fn pulse_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, PulseStep::Pulse { .. })).count()
    }

    pub fn has_gradient(&self) -> bool {
        self.steps.iter().any(|s| matches!(s, PulseStep::Grad))
    }

    /// Checks spin indices, durations and angles against an `n`-spin system.
    pub fn validate(&self, n: usize) -> Result<()> {
        let spin = |j: usize| {
            if j >= n {
                Err(QcsError::QubitOutOfRange { index: j, size: n })
            } else {
                Ok(())
            }
        };
        for step in &self.steps {
            match step {
                PulseStep::Pulse { targets, angle, .. } => {
                    if targets.is_empty() {
                        return Err(QcsError::EmptyTargets);
                    }
                    for (i, &t) in targets.iter().enumerate() {
                        spin(t)?;
                        if targets[..i].contains(&t) {
                            return Err(QcsError::DuplicateTarget(t));
                        }
                    }
                    finite(*angle, "pulse angle")?;
                }
                PulseStep::Delay { duration, couplings } => {
                    finite(*duration, "delay")?;
                    if *duration < 0.0 {
                        return Err(QcsError::InvalidParams(format!("negative delay {duration}")));
                    }
                    if let Couplings::Selective(pairs) = couplings {
                        for &(j, l) in pairs {
                            spin(j)?;
                            spin(l)?;
                            if j == l {
                                return Err(QcsError::SameSpin(j));
                            }
                        }
                    }
                }
                PulseStep::ZRot { target, angle } => {
                    spin(*target)?;
                    finite(*angle, "rotation angle")?;
                }
                PulseStep::Grad | PulseStep::Label(_) => {}
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let step = parse_line(line).map_err(|msg| QcsError::Parse { line: i + 1, msg })?;
            steps.push(step);
        }
        Ok(Self { steps })
    }
}

fn finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(QcsError::InvalidParams(format!("{what} is not finite")))
    }
}

fn parse_spin(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(j) if j >= 1 => Ok(j - 1),
        _ => Err(format!("bad spin label '{s}'")),
    }
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("bad number '{s}'"))
}

fn parse_line(line: &str) -> std::result::Result<PulseStep, String> {
    if let Some(rest) = line.strip_prefix('#') {
        return Ok(PulseStep::Label(rest.trim().to_string()));
    }
    let words: Vec<&str> = line.split_whitespace().collect();
    let arity = |n: usize| {
        if words.len() == n {
            Ok(())
        } else {
            Err(format!("{} expects {} fields, got {}", words[0], n - 1, words.len() - 1))
        }
    };
    match words[0] {
        "PULSE" => {
            arity(4)?;
            let targets = words[1].split(',').map(parse_spin).collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(PulseStep::Pulse { targets, axis: words[2].parse()?, angle: parse_f64(words[3])? })
        }
        "DELAY" => {
            arity(3)?;
            let spec = words[2].strip_prefix("COUPLINGS=").ok_or("expected COUPLINGS=<pairs>|ALL|NONE")?;
            let couplings = match spec {
                "ALL" => Couplings::All,
                "NONE" => Couplings::Selective(Vec::new()),
                pairs => Couplings::Selective(
                    pairs
                        .split(';')
                        .map(|p| {
                            let (a, b) = p.split_once(',').ok_or(format!("bad coupling pair '{p}'"))?;
                            Ok((parse_spin(a)?, parse_spin(b)?))
                        })
                        .collect::<std::result::Result<Vec<_>, String>>()?,
                ),
            };
            Ok(PulseStep::Delay { duration: parse_f64(words[1])?, couplings })
        }
        "ZROT" => {
            arity(3)?;
            Ok(PulseStep::ZRot { target: parse_spin(words[1])?, angle: parse_f64(words[2])? })
        }
        "GRAD" => {
            arity(1)?;
            Ok(PulseStep::Grad)
        }
        other => Err(format!("unknown step '{other}'")),
    }
}

impl fmt::Display for PulseStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PulseStep::Pulse { targets, axis, angle } => {
                let t: Vec<String> = targets.iter().map(|t| (t + 1).to_string()).collect();
                write!(f, "PULSE {} {axis} {angle:?}", t.join(","))
            }
            PulseStep::Delay { duration, couplings } => {
                write!(f, "DELAY {duration:?} COUPLINGS=")?;
                match couplings {
                    Couplings::All => write!(f, "ALL"),
                    Couplings::Selective(p) if p.is_empty() => write!(f, "NONE"),
                    Couplings::Selective(p) => {
                        let s: Vec<String> = p.iter().map(|(j, l)| format!("{},{}", j + 1, l + 1)).collect();
                        write!(f, "{}", s.join(";"))
                    }
                }
            }
            PulseStep::ZRot { target, angle } => write!(f, "ZROT {} {angle:?}", target + 1),
            PulseStep::Grad => write!(f, "GRAD"),
            PulseStep::Label(text) => write!(f, "# {text}"),
        }
    }
}

impl fmt::Display for PulseProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        Ok(())
    }
}

impl FromStr for PulseProgram {
    type Err = QcsError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
