//! Netpbm graymap (PGM) reading and writing.
//!
//! Reads plain (`P2`) and raw (`P5`) graymaps with `maxval <= 255`; intensities are
//! scaled by `maxval` into `[0, 1]`. Writing always produces raw `P5` at maxval 255, so
//! an image loaded from a maxval-255 file writes back to identical pixel bytes.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use super::image::GrayImage;

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("not a PGM file: magic number {0:?} (expected P2 or P5)")]
    Magic(String),
    #[error("PGM header ended before the {0} field")]
    MissingField(&'static str),
    #[error("PGM {field} field is invalid: {value:?}")]
    InvalidField { field: &'static str, value: String },
    #[error("unsupported PGM maxval {0} (must be 1..=255)")]
    UnsupportedMaxval(u32),
    #[error("truncated PGM pixel data: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("PGM sample {index} is {value}, above maxval {maxval}")]
    SampleRange { index: usize, value: u32, maxval: u32 },
    #[error("PGM I/O error: {0}")]
    Io(#[from] io::Error),
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage, PgmError> {
    let bytes = fs::read(path)?;
    parse_pgm(&bytes)
}

pub fn write_pgm(path: impl AsRef<Path>, image: &GrayImage) -> Result<(), PgmError> {
    fs::write(path, encode_pgm(image))?;
    Ok(())
}

/// Raw `P5` encoding at maxval 255.
pub fn encode_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend(image.to_bytes());
    out
}

pub fn parse_pgm(data: &[u8]) -> Result<GrayImage, PgmError> {
    let mut cursor = Cursor { data, pos: 0 };
    let magic = cursor.token().ok_or(PgmError::MissingField("magic"))?;
    let ascii = match magic {
        b"P2" => true,
        b"P5" => false,
        other => return Err(PgmError::Magic(String::from_utf8_lossy(other).into_owned())),
    };
    let width = cursor.header_number("width")?;
    let height = cursor.header_number("height")?;
    let maxval = cursor.header_number("maxval")?;
    if width == 0 {
        return Err(PgmError::InvalidField {
            field: "width",
            value: "0".into(),
        });
    }
    if height == 0 {
        return Err(PgmError::InvalidField {
            field: "height",
            value: "0".into(),
        });
    }
    if maxval == 0 || maxval > 255 {
        return Err(PgmError::UnsupportedMaxval(maxval as u32));
    }
    let maxval = maxval as u32;
    let count = width * height;

    let samples: Vec<u8> = if ascii {
        let mut samples = Vec::with_capacity(count);
        while samples.len() < count {
            let Some(tok) = cursor.token() else {
                return Err(PgmError::Truncated {
                    expected: count,
                    found: samples.len(),
                });
            };
            let value = parse_decimal(tok).ok_or_else(|| PgmError::InvalidField {
                field: "sample",
                value: String::from_utf8_lossy(tok).into_owned(),
            })?;
            if value > maxval as usize {
                return Err(PgmError::SampleRange {
                    index: samples.len(),
                    value: value.min(u32::MAX as usize) as u32,
                    maxval,
                });
            }
            samples.push(value as u8);
        }
        samples
    } else {
        // exactly one whitespace byte separates maxval from the raster
        let start = cursor.pos + 1;
        let available = data.len().saturating_sub(start);
        if available < count {
            return Err(PgmError::Truncated {
                expected: count,
                found: available,
            });
        }
        let raster = &data[start..start + count];
        if let Some((index, &value)) = raster.iter().enumerate().find(|(_, &v)| u32::from(v) > maxval) {
            return Err(PgmError::SampleRange {
                index,
                value: value.into(),
                maxval,
            });
        }
        raster.to_vec()
    };

    let image = GrayImage::from_bytes(width, height, &samples, maxval as u8)
        .expect("samples bounded by maxval always scale into [0, 1]");
    Ok(image)
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Next whitespace-delimited token, skipping `#` comments.
    fn token(&mut self) -> Option<&'a [u8]> {
        loop {
            while self.pos < self.data.len() && self.data[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.data.len() && self.data[self.pos] == b'#' {
                while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            break;
        }
        if self.pos >= self.data.len() {
            return None;
        }
        let start = self.pos;
        while self.pos < self.data.len() && !self.data[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        Some(&self.data[start..self.pos])
    }

    fn header_number(&mut self, field: &'static str) -> Result<usize, PgmError> {
        let tok = self.token().ok_or(PgmError::MissingField(field))?;
        parse_decimal(tok).ok_or_else(|| PgmError::InvalidField {
            field,
            value: String::from_utf8_lossy(tok).into_owned(),
        })
    }
}

fn parse_decimal(tok: &[u8]) -> Option<usize> {
    if tok.is_empty() || !tok.iter().all(u8::is_ascii_digit) {
        return None;
    }
    std::str::from_utf8(tok).ok()?.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_endpoints() {
        let img = parse_pgm(b"P2\n2 1\n255\n0 255\n").unwrap();
        assert_eq!((img.width(), img.height()), (2, 1));
        assert_eq!(img.pixels(), &[0.0, 1.0]);
    }

    #[test]
    fn comments_and_low_maxval() {
        let img = parse_pgm(b"P2 # comment\n# another\n3 1 4\n0 2 4").unwrap();
        assert_eq!(img.pixels(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn raw_truncated() {
        let err = parse_pgm(b"P5\n4 4\n255\n\x00\x01\x02").unwrap_err();
        assert!(matches!(err, PgmError::Truncated { expected: 16, found: 3 }));
    }

    #[test]
    fn ascii_truncated() {
        let err = parse_pgm(b"P2\n2 2\n255\n1 2 3").unwrap_err();
        assert!(matches!(err, PgmError::Truncated { expected: 4, found: 3 }));
    }

    #[test]
    fn header_errors_name_the_field() {
        assert!(matches!(parse_pgm(b"P6\n1 1\n255\n\0"), Err(PgmError::Magic(_))));
        assert!(matches!(parse_pgm(b"P5\n1"), Err(PgmError::MissingField("height"))));
        assert!(matches!(
            parse_pgm(b"P5\nx 1\n255\n\0"),
            Err(PgmError::InvalidField { field: "width", .. })
        ));
        assert!(matches!(parse_pgm(b"P5\n1 1\n65535\n\0\0"), Err(PgmError::UnsupportedMaxval(65535))));
        assert!(matches!(parse_pgm(b"P5\n1 1\n0\n\0"), Err(PgmError::UnsupportedMaxval(0))));
        assert!(matches!(
            parse_pgm(b"P2\n1 1\n10\n11\n"),
            Err(PgmError::SampleRange { value: 11, maxval: 10, .. })
        ));
    }

    #[test]
    fn raw_round_trip_is_byte_exact() {
        let mut bytes = b"P5\n16 16\n255\n".to_vec();
        bytes.extend((0..=255u8).rev());
        let img = parse_pgm(&bytes).unwrap();
        assert_eq!(encode_pgm(&img), bytes);
        assert_eq!(parse_pgm(&encode_pgm(&img)).unwrap(), img);
    }
}
