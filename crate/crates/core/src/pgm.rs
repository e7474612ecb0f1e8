//! 8-bit portable graymap I/O.
//!
//! Reads binary (`P5`) and ASCII (`P2`) graymaps with `maxval = 255` and
//! writes canonical binary files `P5\n<w> <h>\n255\n<pixels>`. Samples are
//! clamped to `[0, 255]` and rounded half away from zero on output.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::error::Result;
use crate::image::Image;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PgmError {
    #[error("byte {offset}: bad magic, expected P5 or P2")]
    BadMagic { offset: usize },
    #[error("byte {offset}: expected {what}, found end of data")]
    UnexpectedEof { offset: usize, what: &'static str },
    #[error("byte {offset}: invalid {what} token")]
    BadToken { offset: usize, what: &'static str },
    #[error("byte {offset}: {what} must be positive")]
    BadDimension { offset: usize, what: &'static str },
    #[error("byte {offset}: unsupported maxval {maxval}, only 255 is supported")]
    UnsupportedMaxval { offset: usize, maxval: u64 },
    #[error("byte {offset}: truncated pixel data, expected {expected} pixels, got {got}")]
    Truncated {
        offset: usize,
        expected: usize,
        got: usize,
    },
    #[error("byte {offset}: pixel value {value} exceeds maxval")]
    PixelOutOfRange { offset: usize, value: u64 },
}

const MAXVAL: u64 = 255;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|&b| b != b'\n' && b != b'\r')
                {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Parses the next unsigned decimal token; returns it with its offset.
    fn number(&mut self, what: &'static str) -> Result<(u64, usize), PgmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        if start >= self.bytes.len() {
            return Err(PgmError::UnexpectedEof {
                offset: start,
                what,
            });
        }
        let mut value: u64 = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(b - b'0')))
                .ok_or(PgmError::BadToken {
                    offset: start,
                    what,
                })?;
            self.pos += 1;
        }
        let terminated = self
            .bytes
            .get(self.pos)
            .is_none_or(|&b| b.is_ascii_whitespace() || b == b'#');
        if self.pos == start || !terminated {
            return Err(PgmError::BadToken {
                offset: start,
                what,
            });
        }
        Ok((value, start))
    }
}

/// Parses a `P5` or `P2` graymap.
pub fn read_pgm(bytes: &[u8]) -> Result<Image> {
    Ok(parse(bytes)?)
}

fn parse(bytes: &[u8]) -> Result<Image, PgmError> {
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(PgmError::BadMagic { offset: 0 }),
    };
    if bytes
        .get(2)
        .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
    {
        return Err(PgmError::BadMagic { offset: 0 });
    }
    let mut cur = Cursor { bytes, pos: 2 };
    let (width, off) = cur.number("width")?;
    if width == 0 {
        return Err(PgmError::BadDimension {
            offset: off,
            what: "width",
        });
    }
    let (height, off) = cur.number("height")?;
    if height == 0 {
        return Err(PgmError::BadDimension {
            offset: off,
            what: "height",
        });
    }
    let (maxval, off) = cur.number("maxval")?;
    if maxval != MAXVAL {
        return Err(PgmError::UnsupportedMaxval {
            offset: off,
            maxval,
        });
    }
    let count = usize::try_from(width)
        .ok()
        .zip(usize::try_from(height).ok())
        .and_then(|(w, h)| w.checked_mul(h))
        .ok_or(PgmError::BadDimension {
            offset: off,
            what: "width x height",
        })?;

    let samples: Vec<f64> = if binary {
        // exactly one whitespace byte separates maxval from the raster
        if cur.pos >= bytes.len() {
            return Err(PgmError::Truncated {
                offset: cur.pos,
                expected: count,
                got: 0,
            });
        }
        let start = cur.pos + 1;
        let available = bytes.len().saturating_sub(start);
        if available < count {
            return Err(PgmError::Truncated {
                offset: bytes.len(),
                expected: count,
                got: available,
            });
        }
        bytes[start..start + count]
            .iter()
            .map(|&b| f64::from(b))
            .collect()
    } else {
        let mut samples = Vec::with_capacity(count);
        for got in 0..count {
            let (value, off) = cur.number("pixel").map_err(|e| match e {
                PgmError::UnexpectedEof { offset, .. } => PgmError::Truncated {
                    offset,
                    expected: count,
                    got,
                },
                other => other,
            })?;
            if value > MAXVAL {
                return Err(PgmError::PixelOutOfRange { offset: off, value });
            }
            samples.push(value as f64);
        }
        samples
    };
    Ok(Image::from_raw(width as usize, height as usize, samples))
}

/// Rounds half away from zero after clamping to `[0, 255]`.
pub fn quantize(v: f64) -> u8 {
    v.clamp(0.0, 255.0).round() as u8
}

/// Encodes `img` as a canonical binary graymap.
pub fn write_pgm(img: &Image) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.len());
    out.extend_from_slice(header.as_bytes());
    out.extend(img.samples().iter().map(|&v| quantize(v)));
    out
}

pub fn read_pgm_file(path: impl AsRef<Path>) -> Result<Image> {
    read_pgm(&fs::read(path)?)
}

pub fn write_pgm_file(path: impl AsRef<Path>, img: &Image) -> Result<()> {
    fs::write(path, write_pgm(img))?;
    Ok(())
}
