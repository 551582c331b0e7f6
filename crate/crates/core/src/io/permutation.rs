//! Permutation files.
//!
//! Text: one decimal original index per line, each line LF-terminated.
//!
//! Binary: the 5 ASCII bytes `ORDO1`, a u64 little-endian count, then
//! `count` u64 little-endian indices. Nothing follows.

use std::path::Path;

use super::{DatasetError, Result};
use crate::ordering::{validate_permutation, OrderingPlan, Strategy};

pub const PERM_MAGIC: &[u8; 5] = b"ORDO1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermFormat {
    Text,
    Binary,
}

pub fn encode_permutation(permutation: &[usize], format: PermFormat) -> Vec<u8> {
    match format {
        PermFormat::Text => {
            let mut out = String::with_capacity(permutation.len() * 8);
            for i in permutation {
                out.push_str(&i.to_string());
                out.push('\n');
            }
            out.into_bytes()
        }
        PermFormat::Binary => {
            let mut out = Vec::with_capacity(13 + 8 * permutation.len());
            out.extend_from_slice(PERM_MAGIC);
            out.extend_from_slice(&(permutation.len() as u64).to_le_bytes());
            for &i in permutation {
                out.extend_from_slice(&(i as u64).to_le_bytes());
            }
            out
        }
    }
}

/// Parses either format (binary when the magic is present) and checks that
/// the result is a bijection on `[0, count)`.
pub fn decode_permutation(bytes: &[u8]) -> Result<Vec<usize>> {
    let permutation = if bytes.starts_with(PERM_MAGIC) {
        decode_binary(&bytes[PERM_MAGIC.len()..])?
    } else {
        decode_text(bytes)?
    };
    validate_permutation(&permutation, permutation.len())?;
    Ok(permutation)
}

fn decode_binary(body: &[u8]) -> Result<Vec<usize>> {
    if body.len() < 8 {
        return Err(DatasetError::Format(
            "binary permutation is missing its count".into(),
        ));
    }
    let count = u64::from_le_bytes(body[..8].try_into().unwrap());
    let words = &body[8..];
    if !words.len().is_multiple_of(8) || (words.len() / 8) as u64 != count {
        return Err(DatasetError::Format(format!(
            "binary permutation declares {count} indices but carries {} bytes of payload",
            words.len()
        )));
    }
    words
        .chunks_exact(8)
        .map(|w| {
            usize::try_from(u64::from_le_bytes(w.try_into().unwrap()))
                .map_err(|_| DatasetError::Format("index does not fit in usize".into()))
        })
        .collect()
}

fn decode_text(bytes: &[u8]) -> Result<Vec<usize>> {
    let text = std::str::from_utf8(bytes).map_err(|_| {
        DatasetError::Format("permutation file is neither ORDO1 binary nor text".into())
    })?;
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let Some(body) = text.strip_suffix('\n') else {
        return Err(DatasetError::Format(
            "text permutation must end with a newline".into(),
        ));
    };
    body.split('\n')
        .enumerate()
        .map(|(i, line)| {
            if line.is_empty() || !line.bytes().all(|b| b.is_ascii_digit()) {
                return Err(DatasetError::Format(format!(
                    "line {}: {line:?} is not a decimal index",
                    i + 1
                )));
            }
            line.parse::<usize>()
                .map_err(|e| DatasetError::Format(format!("line {}: {e}", i + 1)))
        })
        .collect()
}

pub fn export_permutation(
    plan: &OrderingPlan,
    path: impl AsRef<Path>,
    format: PermFormat,
) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_permutation(&plan.permutation, format))
        .map_err(|e| DatasetError::io(path, e))
}

/// Reads a permutation file into a plan tagged [`Strategy::External`].
pub fn import_permutation(path: impl AsRef<Path>) -> Result<OrderingPlan> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| DatasetError::io(path, e))?;
    Ok(OrderingPlan::new(
        Strategy::External,
        decode_permutation(&bytes)?,
    ))
}
