use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::{DatasetError, Result};
use crate::ordering::{PayloadRef, ScoredSample};

/// Byte range of one record inside the source file. `len` excludes the line
/// terminator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordSpan {
    pub offset: u64,
    pub len: u64,
}

/// Offset index over a JSONL corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusHandle {
    pub source_path: PathBuf,
    pub records: Vec<RecordSpan>,
    pub score_field: String,
    /// Hex SHA-256 of the source file at indexing time.
    pub digest: String,
    /// Whether the final record is followed by a newline.
    pub trailing_newline: bool,
}

impl CorpusHandle {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Hex SHA-256 of a file, streamed.
pub fn file_digest(path: &Path) -> Result<String> {
    let mut file = File::open(path).map_err(|e| DatasetError::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf).map_err(|e| DatasetError::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

fn id_of(obj: &serde_json::Map<String, Value>, line_no: usize) -> String {
    match obj.get("id") {
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => n.to_string(),
        _ => line_no.to_string(),
    }
}

/// Reads a JSONL corpus: one JSON object per line, each carrying a finite
/// numeric `score_field`. Ids come from an `"id"` field when present, else
/// the 1-based line number. An optional `"token_count"` is picked up.
pub fn load_scored_jsonl(
    path: impl AsRef<Path>,
    score_field: &str,
) -> Result<(CorpusHandle, Vec<ScoredSample>)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| DatasetError::io(path, e))?;
    let mut reader = BufReader::with_capacity(1 << 16, file);
    let mut hasher = Sha256::new();
    let mut records = Vec::new();
    let mut samples = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut line = Vec::new();
    let mut offset = 0u64;
    let mut trailing_newline = true;

    loop {
        line.clear();
        let read = reader
            .read_until(b'\n', &mut line)
            .map_err(|e| DatasetError::io(path, e))?;
        if read == 0 {
            break;
        }
        hasher.update(&line);
        let line_no = records.len() + 1;
        let body = match line.last() {
            Some(b'\n') => &line[..line.len() - 1],
            _ => {
                trailing_newline = false;
                &line[..]
            }
        };
        let value: Value = serde_json::from_slice(body).map_err(|e| DatasetError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let Value::Object(obj) = value else {
            return Err(DatasetError::Parse {
                line: line_no,
                message: "record is not a JSON object".into(),
            });
        };
        let score = obj
            .get(score_field)
            .and_then(Value::as_f64)
            .filter(|s| s.is_finite())
            .ok_or(DatasetError::InvalidScore {
                line: line_no,
                field: score_field.to_string(),
            })?;
        let id = id_of(&obj, line_no);
        if !seen.insert(id.clone()) {
            return Err(DatasetError::DuplicateId { id, line: line_no });
        }
        let span = RecordSpan {
            offset,
            len: body.len() as u64,
        };
        samples.push(ScoredSample {
            id,
            score,
            payload: PayloadRef::Span {
                offset: span.offset,
                len: span.len,
            },
            token_count: obj.get("token_count").and_then(Value::as_u64),
        });
        records.push(span);
        offset += read as u64;
    }

    if records.is_empty() {
        return Err(DatasetError::EmptyCorpus(path.to_path_buf()));
    }
    let handle = CorpusHandle {
        source_path: path.to_path_buf(),
        records,
        score_field: score_field.to_string(),
        digest: hex::encode(hasher.finalize()),
        trailing_newline,
    };
    Ok((handle, samples))
}
