// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

/// Default load address.
pub const DEFAULT_BASE: u32 = 0x0000_1000;

/// A loadable program: code followed by data, placed at `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramImage {
    pub base: u32,
    pub bytes: Vec<u8>,
    pub entry: u32,
    /// Bytes of instructions; the rest of `bytes` is data.
    pub code_size: u32,
    /// Label addresses, when the image came from the assembler.
    pub symbols: BTreeMap<String, u32>,
}

impl ProgramImage {
    /// Image made of raw bytes, all counted as code.
    pub fn from_bytes(base: u32, bytes: Vec<u8>) -> ProgramImage {
        ProgramImage {
            base,
            entry: base,
            code_size: bytes.len() as u32,
            bytes,
            symbols: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    /// Address one past the last byte.
    pub fn end(&self) -> u32 {
        self.base.wrapping_add(self.bytes.len() as u32)
    }

    /// Little-endian word at `addr`, if all four bytes are in the image.
    pub fn word_at(&self, addr: u32) -> Option<u32> {
        let off = addr.checked_sub(self.base)? as usize;
        let b = self.bytes.get(off..off + 4)?;
        Some(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    /// The instruction words, `code_size / 4` of them.
    pub fn code_words(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.bytes[..self.code_size as usize]
            .chunks_exact(4)
            .enumerate()
            .map(|(i, c)| {
                (
                    self.base + 4 * i as u32,
                    u32::from_le_bytes([c[0], c[1], c[2], c[3]]),
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    /// Raw little-endian bytes.
    FlatBin,
    /// One 8-digit hex word per line; `#` starts a comment.
    HexWords,
}

impl FromStr for ImageFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<ImageFormat, String> {
        match s {
            "flat-bin" | "bin" => Ok(ImageFormat::FlatBin),
            "hex-words" | "hex" => Ok(ImageFormat::HexWords),
            other => Err(format!("unknown image format `{other}`")),
        }
    }
}

impl fmt::Display for ImageFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ImageFormat::FlatBin => "flat-bin",
            ImageFormat::HexWords => "hex-words",
        })
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("line {0}: expected one 8-digit hex word")]
    MalformedHex(usize),
    #[error("image is empty")]
    EmptyImage,
    #[error("load base {0:#x} is not word-aligned")]
    UnalignedBase(u32),
    #[error("entry {entry:#x} lies outside the image [{base:#x}, {end:#x})")]
    EntryOutOfRange { entry: u32, base: u32, end: u32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Builds an image from file contents.
///
/// ```
/// use rvserial::system::{load_image, ImageFormat};
///
/// let image = load_image(b"# nop\n00000013\n", ImageFormat::HexWords, 0x1000, None).unwrap();
/// assert_eq!(image.word_at(0x1000), Some(0x13));
/// ```
pub fn load_image(
    contents: &[u8],
    format: ImageFormat,
    base: u32,
    entry: Option<u32>,
) -> Result<ProgramImage, LoadError> {
    if !base.is_multiple_of(4) {
        return Err(LoadError::UnalignedBase(base));
    }
    let bytes = match format {
        ImageFormat::FlatBin => contents.to_vec(),
        ImageFormat::HexWords => parse_hex_words(contents)?,
    };
    if bytes.is_empty() {
        return Err(LoadError::EmptyImage);
    }
    let mut image = ProgramImage::from_bytes(base, bytes);
    if let Some(e) = entry {
        if e < base || e >= image.end() {
            return Err(LoadError::EntryOutOfRange {
                entry: e,
                base,
                end: image.end(),
            });
        }
        image.entry = e;
    }
    Ok(image)
}

pub fn load_image_file(
    path: &Path,
    format: ImageFormat,
    base: u32,
    entry: Option<u32>,
) -> Result<ProgramImage, LoadError> {
    load_image(&std::fs::read(path)?, format, base, entry)
}

fn parse_hex_words(contents: &[u8]) -> Result<Vec<u8>, LoadError> {
    let text = String::from_utf8_lossy(contents);
    let mut bytes = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let line = line.strip_prefix("0x").unwrap_or(line);
        if line.len() != 8 || !line.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(LoadError::MalformedHex(i + 1));
        }
        let word = u32::from_str_radix(line, 16).map_err(|_| LoadError::MalformedHex(i + 1))?;
        bytes.extend_from_slice(&word.to_le_bytes());
    }
    Ok(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_file() {
        let image = load_image(&[0x13, 0, 0, 0], ImageFormat::FlatBin, 0x1000, None).unwrap();
        assert_eq!(image.len(), 4);
        assert_eq!(image.entry, 0x1000);
    }

    #[test]
    fn hex_words() {
        let image = load_image(
            b"00000013\n\n  00100073 # ebreak\n",
            ImageFormat::HexWords,
            0x1000,
            None,
        )
        .unwrap();
        assert_eq!(image.word_at(0x1000), Some(0x13));
        assert_eq!(image.word_at(0x1004), Some(0x0010_0073));
        assert_eq!(image.word_at(0x1008), None);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            load_image(b"00000013\nxyz\n", ImageFormat::HexWords, 0x1000, None),
            Err(LoadError::MalformedHex(2))
        ));
        assert!(matches!(
            load_image(b"# only a comment\n", ImageFormat::HexWords, 0x1000, None),
            Err(LoadError::EmptyImage)
        ));
        assert!(matches!(
            load_image(b"", ImageFormat::FlatBin, 0, None),
            Err(LoadError::EmptyImage)
        ));
        assert!(matches!(
            load_image(&[0; 4], ImageFormat::FlatBin, 0x1000, Some(0x2000)),
            Err(LoadError::EntryOutOfRange { .. })
        ));
        assert!(matches!(
            load_image(&[0; 4], ImageFormat::FlatBin, 0x1002, None),
            Err(LoadError::UnalignedBase(0x1002))
        ));
    }
}
