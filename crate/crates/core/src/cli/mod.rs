//! Command implementations behind the `elle` binary. Every command is a pure function of
//! its [`RunConfig`] and the files it reads, so repeated runs write identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frontal::{self, assemble, embed_case, identify, AccuracyStats, Case, FrontalError, FrontalReport, PipelineError, FACEPIX_REFERENCE};
use crate::graph::GraphError;
use crate::imgseq::{frame_path, list_subjects, load_subject, write_pgm, CropRect, DatasetError, ImageSet, YawSpec};
use crate::lle::{write_embedding_csv, Embedding, LleError};
use crate::synth::{head_crop, make_identity, render_head, IdentityParams};

mod args;
mod config;

pub use args::{run_cli, Cli};
pub use config::{Command, RunConfig};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("pipeline error for subject {subject} at {stage}: {message}")]
    Pipeline {
        subject: String,
        stage: &'static str,
        message: String,
    },
}

impl CliError {
    /// 2 for configuration, 3 for data and I/O, 4 for pipeline degeneracies.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Pipeline { .. } => 4,
        }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Data(format!("{}: {e}", path.display()))
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        CliError::Data(e.to_string())
    }
}

/// Maps a pipeline failure to the right error class: parameter problems are configuration
/// errors, bad inputs are data errors, and the rest are degeneracies.
fn pipeline_error(subject: &str, e: PipelineError) -> CliError {
    let stage = match &e {
        PipelineError::MissingCrop | PipelineError::Crop(_) | PipelineError::Set(_) => "assemble",
        PipelineError::Lle(_) => "embed",
        PipelineError::Frontal(_) => "identify",
    };
    match &e {
        PipelineError::MissingCrop => CliError::Config(format!("subject {subject}: case III needs --crop or a manifest crop")),
        PipelineError::Crop(_) | PipelineError::Set(_) => CliError::Data(format!("subject {subject}: {e}")),
        PipelineError::Lle(LleError::Graph(
            GraphError::KOutOfRange { .. } | GraphError::KtOutOfRange { .. } | GraphError::OddKt(_),
        ))
        | PipelineError::Lle(LleError::DimOutOfRange { .. } | LleError::Regularization(_))
        | PipelineError::Frontal(FrontalError::Dimension(_)) => CliError::Config(format!("subject {subject}: {e}")),
        _ => CliError::Pipeline {
            subject: subject.to_string(),
            stage,
            message: e.to_string(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestSubject {
    pub name: String,
    pub seed: u64,
    pub params: IdentityParams,
    /// Head rectangle used for case III.
    pub crop: CropRect,
}

/// Written next to a synthetic dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec: YawSpec,
    pub size: usize,
    pub subjects: Vec<ManifestSubject>,
}

pub fn subject_name(index: usize) -> String {
    format!("s{index:03}")
}

pub fn read_manifest(dataset: &Path) -> Result<Option<Manifest>, CliError> {
    let path = dataset.join(MANIFEST_FILE);
    if !path.is_file() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    serde_json::from_str(&text).map(Some).map_err(|e| CliError::io(&path, e))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Renders `subjects x angles` frames into `<out>/<subject>/` and writes the manifest.
pub fn cmd_synth(cfg: &RunConfig) -> Result<Manifest, CliError> {
    cfg.validate()?;
    let out = cfg.out.as_deref().expect("validated");
    let spec = cfg.spec();
    let count = cfg.subjects.unwrap_or(30);
    let subjects: Vec<ManifestSubject> = (0..count)
        .map(|i| {
            let seed = cfg.seed + i as u64;
            let params = make_identity(seed);
            ManifestSubject {
                name: subject_name(i),
                seed,
                crop: head_crop(&params, cfg.size),
                params,
            }
        })
        .collect();
    subjects.par_iter().try_for_each(|s| {
        let dir = out.join(&s.name);
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        for yaw in spec.angles() {
            let img = render_head(&s.params, f64::from(yaw), cfg.size).map_err(|e| CliError::Config(e.to_string()))?;
            let path = frame_path(out, &s.name, yaw);
            write_pgm(&path, &img).map_err(|e| CliError::io(&path, e))?;
        }
        Ok::<(), CliError>(())
    })?;
    let manifest = Manifest {
        spec,
        size: cfg.size,
        subjects,
    };
    write_text(&out.join(MANIFEST_FILE), &to_json(&manifest))?;
    Ok(manifest)
}

/// Subjects to process: `--subject`, else the first `--subjects` (or all) on disk.
fn select_subjects(cfg: &RunConfig, dataset: &Path, single: bool) -> Result<Vec<String>, CliError> {
    let all = list_subjects(dataset)?;
    if let Some(name) = &cfg.subject {
        if !all.contains(name) {
            return Err(CliError::Data(format!("subject {name} not found under {}", dataset.display())));
        }
        return Ok(vec![name.clone()]);
    }
    let mut chosen = all;
    if single {
        chosen.truncate(1);
    } else if let Some(n) = cfg.subjects {
        if n > chosen.len() {
            return Err(CliError::Data(format!("--subjects {n} but only {} subjects on disk", chosen.len())));
        }
        chosen.truncate(n);
    }
    Ok(chosen)
}

fn crop_for(cfg: &RunConfig, manifest: Option<&Manifest>, subject: &str) -> Option<CropRect> {
    cfg.crop.or_else(|| manifest?.subjects.iter().find(|s| s.name == subject).map(|s| s.crop))
}

/// Loads one subject and runs one case, stopping after the embedding.
fn run_embed(cfg: &RunConfig, dataset: &Path, manifest: Option<&Manifest>, subject: &str, spec: &YawSpec, case: Case) -> Result<(ImageSet, Embedding), CliError> {
    let (images, yaws) = load_subject(dataset, subject, spec)?;
    let crop = if case == Case::III { crop_for(cfg, manifest, subject) } else { None };
    let set = assemble(&images, Some(&yaws), case, crop).map_err(|e| pipeline_error(subject, e))?;
    let emb = embed_case(&set, case, &cfg.params()).map_err(|e| pipeline_error(subject, e.into()))?;
    Ok((set, emb))
}

fn run_identify(cfg: &RunConfig, dataset: &Path, manifest: Option<&Manifest>, subject: &str, spec: &YawSpec, case: Case) -> Result<FrontalReport, CliError> {
    let (set, emb) = run_embed(cfg, dataset, manifest, subject, spec, case)?;
    identify(&emb, &set, cfg.mode).map_err(|e| pipeline_error(subject, e.into()))
}

fn dataset(cfg: &RunConfig) -> &Path {
    cfg.dataset.as_deref().expect("validated")
}

/// Embeds one subject and writes `index,provenance,yaw,e1,...` to `--out` (or returns it).
pub fn cmd_embed(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let root = dataset(cfg);
    let manifest = read_manifest(root)?;
    let subject = select_subjects(cfg, root, true)?.remove(0);
    let (set, emb) = run_embed(cfg, root, manifest.as_ref(), &subject, &cfg.spec(), cfg.case)?;
    let mut buf = Vec::new();
    write_embedding_csv(&mut buf, &emb, &set).map_err(|e| CliError::Data(e.to_string()))?;
    let text = String::from_utf8(buf).expect("CSV is UTF-8");
    if let Some(out) = &cfg.out {
        write_text(out, &text)?;
    }
    Ok(text)
}

/// Identifies the frontal frame of one subject and writes the report JSON.
pub fn cmd_identify(cfg: &RunConfig) -> Result<FrontalReport, CliError> {
    cfg.validate()?;
    let root = dataset(cfg);
    let manifest = read_manifest(root)?;
    let subject = select_subjects(cfg, root, true)?.remove(0);
    let report = run_identify(cfg, root, manifest.as_ref(), &subject, &cfg.spec(), cfg.case)?;
    if let Some(out) = &cfg.out {
        write_text(out, &to_json(&report))?;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectResult {
    pub subject: String,
    pub report: Option<FrontalReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub spec: YawSpec,
    pub case: Case,
    /// Absent when no subject produced a scored report.
    pub stats: Option<AccuracyStats>,
    pub failed: usize,
    pub subjects: Vec<SubjectResult>,
}

fn evaluate_cell(cfg: &RunConfig, root: &Path, manifest: Option<&Manifest>, subjects: &[String], spec: &YawSpec, case: Case) -> Result<Evaluation, CliError> {
    let results: Vec<Result<FrontalReport, CliError>> = subjects
        .par_iter()
        .map(|s| run_identify(cfg, root, manifest, s, spec, case))
        .collect();
    let mut out = Vec::with_capacity(subjects.len());
    let mut errors = Vec::new();
    let mut failed = 0;
    for (subject, r) in subjects.iter().zip(results) {
        match r {
            Ok(report) => {
                match report.abs_error {
                    Some(e) => errors.push(e),
                    None => failed += 1,
                }
                out.push(SubjectResult {
                    subject: subject.clone(),
                    report: Some(report),
                    error: None,
                });
            }
            Err(e @ CliError::Pipeline { .. }) => {
                failed += 1;
                out.push(SubjectResult {
                    subject: subject.clone(),
                    report: None,
                    error: Some(e.to_string()),
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Evaluation {
        spec: *spec,
        case,
        stats: (!errors.is_empty()).then(|| frontal::stats(&errors)),
        failed,
        subjects: out,
    })
}

/// Identifies every selected subject for one spec and case and aggregates `u` and `sigma`.
pub fn cmd_evaluate(cfg: &RunConfig) -> Result<Evaluation, CliError> {
    cfg.validate()?;
    let root = dataset(cfg);
    let manifest = read_manifest(root)?;
    let subjects = select_subjects(cfg, root, false)?;
    let eval = evaluate_cell(cfg, root, manifest.as_ref(), &subjects, &cfg.spec(), cfg.case)?;
    if let Some(out) = &cfg.out {
        write_text(out, &to_json(&eval))?;
    }
    Ok(eval)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub params: frontal::PipelineParams,
    pub mode: frontal::Mode,
    pub subjects: Vec<String>,
    pub cells: Vec<Evaluation>,
}

impl Comparison {
    pub fn cell(&self, spec: &YawSpec, case: Case) -> Option<&Evaluation> {
        self.cells.iter().find(|c| c.spec == *spec && c.case == case)
    }

    /// `spec,case,u,sigma,count,failed`, one row per cell.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("spec,case,u,sigma,count,failed\n");
        for c in &self.cells {
            let (u, sigma, count) = c
                .stats
                .map_or((String::new(), String::new(), 0), |st| (st.u.to_string(), st.sigma.to_string(), st.count));
            let _ = writeln!(s, "{},{},{u},{sigma},{count},{}", c.spec, c.case, c.failed);
        }
        s
    }

    /// Grid of `u ± sigma` per spec and case, with published FacePix values where the spec
    /// matches one.
    pub fn to_table(&self) -> String {
        let mut specs: Vec<YawSpec> = Vec::new();
        for c in &self.cells {
            if !specs.contains(&c.spec) {
                specs.push(c.spec);
            }
        }
        let mut s = format!("{} subjects, mean absolute error u ± sigma in degrees\n", self.subjects.len());
        let _ = writeln!(s, "{:<12}{:>16}{:>16}{:>16}", "spec", "Case I", "Case II", "Case III");
        for spec in &specs {
            let _ = write!(s, "{:<12}", spec.to_string());
            for case in Case::ALL {
                let text = match self.cell(spec, case) {
                    Some(Evaluation { stats: Some(st), failed, .. }) => {
                        format!("{:.1} ± {:.1}{}", st.u, st.sigma, if *failed > 0 { "*" } else { "" })
                    }
                    Some(_) => "failed".to_string(),
                    None => "-".to_string(),
                };
                let _ = write!(s, "{text:>16}");
            }
            s.push('\n');
            let refs: Vec<_> = FACEPIX_REFERENCE.iter().filter(|r| r.spec == spec.to_string()).collect();
            if !refs.is_empty() {
                let _ = write!(s, "{:<12}", "  FacePix");
                for case in Case::ALL {
                    let text = refs
                        .iter()
                        .find(|r| r.case == case)
                        .map_or("-".to_string(), |r| format!("{:.1} ± {:.1}", r.u, r.sigma));
                    let _ = write!(s, "{text:>16}");
                }
                s.push('\n');
            }
        }
        if self.cells.iter().any(|c| c.failed > 0) {
            s.push_str("* some subjects failed or lacked a 0° frame; see compare.json\n");
        }
        s
    }
}

pub const DEFAULT_COMPARE_SPECS: [&str; 2] = ["-90:1:60", "-90:1:30"];

/// Runs cases I, II and III for every spec over all selected subjects. With `--out DIR`,
/// writes `compare.csv` and `compare.json` there.
pub fn cmd_compare(cfg: &RunConfig) -> Result<Comparison, CliError> {
    cfg.validate()?;
    let root = dataset(cfg);
    let manifest = read_manifest(root)?;
    let subjects = select_subjects(cfg, root, false)?;
    if subjects.len() < 2 {
        return Err(CliError::Data("compare needs at least two subjects".into()));
    }
    let mut cells = Vec::new();
    for spec in &cfg.specs {
        for case in Case::ALL {
            cells.push(evaluate_cell(cfg, root, manifest.as_ref(), &subjects, spec, case)?);
        }
    }
    let cmp = Comparison {
        params: cfg.params(),
        mode: cfg.mode,
        subjects,
        cells,
    };
    if let Some(out) = &cfg.out {
        fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
        write_text(&out.join("compare.csv"), &cmp.to_csv())?;
        write_text(&out.join("compare.json"), &to_json(&cmp))?;
    }
    Ok(cmp)
}
