use std::path::PathBuf;

use serde::Serialize;

use super::CliError;
use crate::frontal::{Case, Mode, PipelineParams};
use crate::imgseq::{CropRect, YawSpec};
use crate::lle::DEFAULT_REG;
use crate::synth::DEFAULT_SIZE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Command {
    Synth,
    Embed,
    Identify,
    Evaluate,
    Compare,
}

/// Everything one command invocation needs. Built from flags, then [`RunConfig::validate`]d.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub dataset: Option<PathBuf>,
    /// Sweeps to run; `compare` uses all of them, other commands the first.
    pub specs: Vec<YawSpec>,
    pub case: Case,
    pub k: Option<usize>,
    pub kt: Option<usize>,
    pub dim: usize,
    pub reg: f64,
    pub mode: Mode,
    /// First identity seed for `synth`.
    pub seed: u64,
    /// Subject count: generated by `synth`, or the leading subjects used elsewhere.
    pub subjects: Option<usize>,
    /// Single subject for `embed` and `identify`; defaults to the first one.
    pub subject: Option<String>,
    pub size: usize,
    /// Case III crop; taken from the dataset manifest when absent.
    pub crop: Option<CropRect>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let defaults = PipelineParams::default();
        Self {
            command,
            dataset: None,
            specs: Vec::new(),
            case: Case::I,
            k: None,
            kt: None,
            dim: defaults.dim,
            reg: DEFAULT_REG,
            mode: Mode::Discrete,
            seed: 0,
            subjects: None,
            subject: None,
            size: DEFAULT_SIZE,
            crop: None,
            out: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.dim < 1 {
            return bad("--dim must be at least 1".into());
        }
        if !(self.reg >= 0.0 && self.reg.is_finite()) {
            return bad(format!("--reg must be finite and non-negative, got {}", self.reg));
        }
        if self.k == Some(0) {
            return bad("--k must be at least 1".into());
        }
        if let Some(kt) = self.kt {
            if kt == 0 || kt % 2 != 0 {
                return bad(format!("--kt must be a positive even number, got {kt}"));
            }
        }
        if matches!(self.command, Command::Embed | Command::Identify | Command::Evaluate)
            && self.case == Case::I
            && self.kt.is_some()
        {
            return bad("case I runs plain LLE and takes --k, not --kt".into());
        }
        if self.specs.is_empty() {
            return bad("at least one --spec is required".into());
        }
        if self.command == Command::Synth {
            if self.size < 32 {
                return bad(format!("--size must be at least 32, got {}", self.size));
            }
            if self.out.is_none() {
                return bad("synth needs --out".into());
            }
            if let Some(s) = self.specs.iter().find(|s| s.start() < -90 || s.end() > 90) {
                return bad(format!("spec {s} leaves the [-90, 90] yaw range"));
            }
            if self.subjects == Some(0) {
                return bad("--subjects must be at least 1".into());
            }
        } else if self.dataset.is_none() {
            return bad("--dataset is required".into());
        }
        Ok(())
    }

    pub fn params(&self) -> PipelineParams {
        let d = PipelineParams::default();
        PipelineParams {
            k: self.k.unwrap_or(d.k),
            kt: self.kt.unwrap_or(d.kt),
            dim: self.dim,
            reg: self.reg,
        }
    }

    pub fn spec(&self) -> YawSpec {
        self.specs[0]
    }
}
