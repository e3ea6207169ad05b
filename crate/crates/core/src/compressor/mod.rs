//! Compressed-size measurement, the computable stand-in for description
//! length.
//!
//! Sizes are always bits of the complete compressed stream, headers included.
//! The joint size of two inputs is the size of their raw concatenation with no
//! separator byte.

mod lz;
mod normality;

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use lz::{
    LzCompressor, DEFAULT_LEVEL, DEFAULT_WINDOW, HEADER_BITS as LZ_HEADER_BITS, MAX_LEVEL, MAX_WINDOW, MIN_MATCH,
    MIN_WINDOW,
};
pub use normality::{
    normality_audit, IdempotencyEntry, MonotonicityViolation, NormalityReport, Quantiles, SymmetryEntry,
};

use crate::error::Error;
use crate::Result;

/// Anything that can report the compressed size of a byte string.
///
/// Implementations must be deterministic: the same input always yields the
/// same number of bits.
pub trait Compressor {
    fn compressed_bits(&self, data: &[u8]) -> Result<u64>;

    /// Fixed container overhead; a lower bound for every output.
    fn header_bits(&self) -> u64;
}

impl<C: Compressor + ?Sized> Compressor for &C {
    fn compressed_bits(&self, data: &[u8]) -> Result<u64> {
        (**self).compressed_bits(data)
    }
    fn header_bits(&self) -> u64 {
        (**self).header_bits()
    }
}

impl<C: Compressor + ?Sized> Compressor for Box<C> {
    fn compressed_bits(&self, data: &[u8]) -> Result<u64> {
        (**self).compressed_bits(data)
    }
    fn header_bits(&self) -> u64 {
        (**self).header_bits()
    }
}

impl Compressor for LzCompressor {
    fn compressed_bits(&self, data: &[u8]) -> Result<u64> {
        Ok(LzCompressor::compressed_bits(self, data))
    }
    fn header_bits(&self) -> u64 {
        lz::HEADER_BITS
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CompressedSize {
    pub bits: u64,
    pub input_len: u64,
}

pub fn compressed_size<C: Compressor + ?Sized>(c: &C, x: &[u8]) -> Result<CompressedSize> {
    Ok(CompressedSize {
        bits: c.compressed_bits(x)?,
        input_len: x.len() as u64,
    })
}

/// Size of `x` followed directly by `y`.
pub fn concat_size<C: Compressor + ?Sized>(c: &C, x: &[u8], y: &[u8]) -> Result<CompressedSize> {
    if y.is_empty() {
        return compressed_size(c, x);
    }
    if x.is_empty() {
        return compressed_size(c, y);
    }
    let mut joined = Vec::with_capacity(x.len() + y.len());
    joined.extend_from_slice(x);
    joined.extend_from_slice(y);
    compressed_size(c, &joined)
}

/// Which compressor to use, as configured by the user.
///
/// Textual form: `builtin-lz`, `builtin-lz:window=65536,level=6`, `gzip`,
/// `bzip2` or `cmd:<command template>`. External commands read the input on
/// stdin and write the compressed stream to stdout; a literal `{in}` in the
/// template stands for stdin and is passed to the command as `-`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CompressorSpec {
    BuiltinLz { window: usize, level: u8 },
    External { command: String },
}

pub const GZIP_PRESET: &str = "gzip -9 -c -n";
pub const BZIP2_PRESET: &str = "bzip2 -9 -c";

impl Default for CompressorSpec {
    fn default() -> Self {
        CompressorSpec::BuiltinLz {
            window: DEFAULT_WINDOW,
            level: DEFAULT_LEVEL,
        }
    }
}

impl CompressorSpec {
    pub fn builtin(window: usize) -> Self {
        CompressorSpec::BuiltinLz {
            window,
            level: DEFAULT_LEVEL,
        }
    }

    pub fn gzip() -> Self {
        CompressorSpec::External {
            command: GZIP_PRESET.to_owned(),
        }
    }

    pub fn bzip2() -> Self {
        CompressorSpec::External {
            command: BZIP2_PRESET.to_owned(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CompressorSpec::BuiltinLz { window, level } => LzCompressor::new(*window, *level).map(drop),
            CompressorSpec::External { command } if command.split_whitespace().next().is_none() => {
                Err(Error::InvalidCompressor("empty external command".to_owned()))
            }
            CompressorSpec::External { .. } => Ok(()),
        }
    }

    /// The built-in compressor for this spec, or `None` for external commands.
    pub fn builtin_compressor(&self) -> Option<Result<LzCompressor>> {
        match self {
            CompressorSpec::BuiltinLz { window, level } => Some(LzCompressor::new(*window, *level)),
            CompressorSpec::External { .. } => None,
        }
    }

    pub fn is_builtin(&self) -> bool {
        matches!(self, CompressorSpec::BuiltinLz { .. })
    }
}

impl fmt::Display for CompressorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompressorSpec::BuiltinLz { window, level } => {
                write!(f, "builtin-lz:window={window},level={level}")
            }
            CompressorSpec::External { command } => write!(f, "cmd:{command}"),
        }
    }
}

impl FromStr for CompressorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let spec = match s {
            "gzip" => CompressorSpec::gzip(),
            "bzip2" => CompressorSpec::bzip2(),
            "builtin-lz" | "builtin" | "lz" => CompressorSpec::default(),
            _ => {
                if let Some(cmd) = s.strip_prefix("cmd:") {
                    CompressorSpec::External {
                        command: cmd.trim().to_owned(),
                    }
                } else if let Some(params) = s.strip_prefix("builtin-lz:") {
                    let mut window = DEFAULT_WINDOW;
                    let mut level = DEFAULT_LEVEL;
                    for kv in params.split(',').filter(|p| !p.is_empty()) {
                        let (key, value) = kv
                            .split_once('=')
                            .ok_or_else(|| Error::InvalidCompressor(format!("expected key=value, got `{kv}`")))?;
                        match key.trim() {
                            "window" | "window-size" => window = parse_size(value)?,
                            "level" => {
                                level = value
                                    .trim()
                                    .parse()
                                    .map_err(|_| Error::InvalidCompressor(format!("bad level `{value}`")))?
                            }
                            other => {
                                return Err(Error::InvalidCompressor(format!(
                                    "unknown builtin-lz parameter `{other}`"
                                )))
                            }
                        }
                    }
                    CompressorSpec::BuiltinLz { window, level }
                } else {
                    return Err(Error::InvalidCompressor(format!("unknown compressor `{s}`")));
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Parses `65536`, `64k`, `64KiB`, `1m` style sizes.
fn parse_size(value: &str) -> Result<usize> {
    let v = value.trim().to_ascii_lowercase();
    let (digits, mult) = if let Some(d) = v.strip_suffix("kib").or_else(|| v.strip_suffix('k')) {
        (d, 1usize << 10)
    } else if let Some(d) = v.strip_suffix("mib").or_else(|| v.strip_suffix('m')) {
        (d, 1 << 20)
    } else if let Some(d) = v.strip_suffix("gib").or_else(|| v.strip_suffix('g')) {
        (d, 1 << 30)
    } else {
        (v.as_str(), 1)
    };
    digits
        .trim()
        .parse::<usize>()
        .ok()
        .and_then(|d| d.checked_mul(mult))
        .ok_or_else(|| Error::InvalidCompressor(format!("bad window size `{value}`")))
}
