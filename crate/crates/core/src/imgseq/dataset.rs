//! On-disk datasets: one directory per subject, one PGM per yaw, named
//! `<subject>_yaw<+DDD|-DDD>.pgm` so the ground-truth yaw travels with the file.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::image::GrayImage;
use super::pgm::{load_pgm, PgmError};
use super::yaw::YawSpec;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("dataset directory {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("missing frame {path}")]
    MissingFrame { path: PathBuf },
    #[error("failed to read {path}: {source}")]
    Pgm { path: PathBuf, source: PgmError },
    #[error("no subject directories under {0}")]
    NoSubjects(PathBuf),
}

/// File name for one frame, e.g. `s03_yaw-090.pgm` or `s03_yaw+000.pgm`.
pub fn frame_file_name(subject: &str, yaw: i32) -> String {
    let sign = if yaw < 0 { '-' } else { '+' };
    format!("{subject}_yaw{sign}{:03}.pgm", yaw.unsigned_abs())
}

/// Inverse of [`frame_file_name`].
pub fn parse_frame_file_name(name: &str) -> Option<(String, i32)> {
    let stem = name.strip_suffix(".pgm")?;
    let at = stem.rfind("_yaw")?;
    let (subject, rest) = (&stem[..at], &stem[at + 4..]);
    let mut chars = rest.chars();
    let sign = match chars.next()? {
        '+' => 1,
        '-' => -1,
        _ => return None,
    };
    let digits = chars.as_str();
    if subject.is_empty() || digits.len() != 3 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((subject.to_string(), sign * digits.parse::<i32>().ok()?))
}

pub fn frame_path(root: &Path, subject: &str, yaw: i32) -> PathBuf {
    root.join(subject).join(frame_file_name(subject, yaw))
}

/// Subject directory names under `root`, sorted.
pub fn list_subjects(root: &Path) -> Result<Vec<String>, DatasetError> {
    let io_err = |source| DatasetError::Io {
        path: root.to_path_buf(),
        source,
    };
    let mut subjects = Vec::new();
    for entry in fs::read_dir(root).map_err(io_err)? {
        let entry = entry.map_err(io_err)?;
        if entry.file_type().map_err(io_err)?.is_dir() {
            if let Some(name) = entry.file_name().to_str() {
                subjects.push(name.to_string());
            }
        }
    }
    if subjects.is_empty() {
        return Err(DatasetError::NoSubjects(root.to_path_buf()));
    }
    subjects.sort();
    Ok(subjects)
}

/// Loads every frame of `spec` for one subject, in sweep order.
pub fn load_subject(root: &Path, subject: &str, spec: &YawSpec) -> Result<(Vec<GrayImage>, Vec<f64>), DatasetError> {
    let mut images = Vec::with_capacity(spec.len());
    let mut yaws = Vec::with_capacity(spec.len());
    for yaw in spec.angles() {
        let path = frame_path(root, subject, yaw);
        if !path.is_file() {
            return Err(DatasetError::MissingFrame { path });
        }
        let image = load_pgm(&path).map_err(|source| DatasetError::Pgm { path, source })?;
        images.push(image);
        yaws.push(f64::from(yaw));
    }
    Ok((images, yaws))
}
