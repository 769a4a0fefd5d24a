use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::{cmd_compare, cmd_embed, cmd_evaluate, cmd_identify, cmd_synth, read_manifest, to_json, CliError, Command, RunConfig, DEFAULT_COMPARE_SPECS};
use crate::frontal::{Case, Mode};
use crate::imgseq::{CropRect, YawSpec};

#[derive(Debug, Parser)]
#[command(name = "elle", version, about = "Frontal-view identification on head yaw sweeps with flip-augmented LLE")]
pub struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Render a synthetic dataset: one directory per subject, one PGM per yaw.
    Synth(Flags),
    /// Embed one subject and write index,provenance,yaw,e1,... CSV.
    Embed(Flags),
    /// Identify one subject's frontal frame and write a JSON report.
    Identify(Flags),
    /// Identify every subject for one spec and case and report u and sigma.
    Evaluate(Flags),
    /// Run cases I, II and III for each spec and print the accuracy grid.
    Compare(Flags),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Discrete,
    QuadraticVertex,
}

#[derive(Debug, Args)]
struct Flags {
    /// Dataset root directory.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Yaw sweep start:step:end in degrees; repeat for compare.
    #[arg(long, allow_hyphen_values = true)]
    spec: Vec<String>,
    /// I (plain LLE), II (flip-augmented) or III (cropped, flip-augmented).
    #[arg(long, default_value = "I")]
    case: Case,
    /// Neighbors for plain LLE [default: 8].
    #[arg(long)]
    k: Option<usize>,
    /// Total neighbors for the dual protocol, even [default: 8].
    #[arg(long)]
    kt: Option<usize>,
    /// Embedding dimension.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Gram regularization, relative to the local trace.
    #[arg(long, default_value_t = crate::lle::DEFAULT_REG)]
    reg: f64,
    #[arg(long, value_enum, default_value = "discrete")]
    mode: ModeArg,
    /// First identity seed (synth).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of subjects to generate, or to use from the dataset.
    #[arg(long)]
    subjects: Option<usize>,
    /// Single subject name for embed and identify.
    #[arg(long)]
    subject: Option<String>,
    /// Image edge in pixels (synth).
    #[arg(long, default_value_t = crate::synth::DEFAULT_SIZE)]
    size: usize,
    /// Case III crop as left,top,width,height; defaults to the manifest's per-subject crop.
    #[arg(long)]
    crop: Option<String>,
    /// Output file, or directory for synth and compare.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_crop(text: &str) -> Result<CropRect, CliError> {
    let v: Vec<usize> = text
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Config(format!("--crop {text:?} must be left,top,width,height")))?;
    match v.as_slice() {
        &[left, top, width, height] if width > 0 && height > 0 => Ok(CropRect { left, top, width, height }),
        _ => Err(CliError::Config(format!("--crop {text:?} must be left,top,width,height"))),
    }
}

fn to_config(command: Command, f: Flags) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::new(command);
    cfg.specs = f
        .spec
        .iter()
        .map(|s| s.parse::<YawSpec>().map_err(|e| CliError::Config(e.to_string())))
        .collect::<Result<_, _>>()?;
    if cfg.specs.is_empty() {
        cfg.specs = match command {
            Command::Synth => vec!["-90:1:90".parse().expect("valid literal")],
            Command::Compare => DEFAULT_COMPARE_SPECS.iter().map(|s| s.parse().expect("valid literal")).collect(),
            _ => match &f.dataset {
                Some(d) => read_manifest(d)?.map(|m| vec![m.spec]).unwrap_or_default(),
                None => Vec::new(),
            },
        };
    }
    cfg.dataset = f.dataset;
    cfg.case = f.case;
    cfg.k = f.k;
    cfg.kt = f.kt;
    cfg.dim = f.dim;
    cfg.reg = f.reg;
    cfg.mode = match f.mode {
        ModeArg::Discrete => Mode::Discrete,
        ModeArg::QuadraticVertex => Mode::QuadraticVertex,
    };
    cfg.seed = f.seed;
    cfg.subjects = f.subjects;
    cfg.subject = f.subject;
    cfg.size = f.size;
    cfg.crop = f.crop.as_deref().map(parse_crop).transpose()?;
    cfg.out = f.out;
    Ok(cfg)
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let (command, flags) = match cli.command {
        Sub::Synth(f) => (Command::Synth, f),
        Sub::Embed(f) => (Command::Embed, f),
        Sub::Identify(f) => (Command::Identify, f),
        Sub::Evaluate(f) => (Command::Evaluate, f),
        Sub::Compare(f) => (Command::Compare, f),
    };
    let cfg = to_config(command, flags)?;
    match command {
        Command::Synth => {
            let m = cmd_synth(&cfg)?;
            print!("{}", to_json(&m));
            eprintln!(
                "wrote {} subjects x {} frames to {}",
                m.subjects.len(),
                m.spec.len(),
                cfg.out.as_deref().expect("validated").display()
            );
        }
        Command::Embed => {
            let csv = cmd_embed(&cfg)?;
            if cfg.out.is_none() {
                print!("{csv}");
            }
        }
        Command::Identify => print!("{}", to_json(&cmd_identify(&cfg)?)),
        Command::Evaluate => {
            let eval = cmd_evaluate(&cfg)?;
            match eval.stats {
                Some(s) => println!("{} case {}: u = {:.2}, sigma = {:.2}, n = {}, failed = {}", eval.spec, eval.case, s.u, s.sigma, s.count, eval.failed),
                None => println!("{} case {}: no scored subjects, failed = {}", eval.spec, eval.case, eval.failed),
            }
        }
        Command::Compare => print!("{}", cmd_compare(&cfg)?.to_table()),
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("elle: {e}");
            e.exit_code()
        }
    }
}
