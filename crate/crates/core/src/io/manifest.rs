use std::fs::File;
use std::io::{BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{file_digest, CorpusHandle, DatasetError, Result};
use crate::ordering::{validate_plan, validate_selection, OrderingPlan, PlanParams, Strategy};

pub const MANIFEST_VERSION: &str = "ordo-manifest/1";

/// Reproducibility record written next to every permutation or reordered
/// corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec_version: String,
    pub strategy: Strategy,
    pub params: PlanParams,
    pub seed: Option<u64>,
    pub source_path: PathBuf,
    /// Hex SHA-256 of the source corpus.
    pub input_digest: String,
    pub n: usize,
    pub created_at: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_digest: Option<String>,
}

impl Manifest {
    pub fn for_plan(plan: &OrderingPlan, handle: &CorpusHandle) -> Self {
        Self {
            spec_version: MANIFEST_VERSION.to_string(),
            strategy: plan.strategy,
            params: plan.params.clone(),
            seed: plan.seed,
            source_path: handle.source_path.clone(),
            input_digest: handle.digest.clone(),
            n: handle.len(),
            created_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            output_path: None,
            output_digest: None,
        }
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| DatasetError::Format(format!("manifest serialization: {e}")))?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| DatasetError::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| DatasetError::Format(format!("{}: {e}", path.display())))
    }
}

/// `<path>.manifest.json`
pub fn manifest_path_for(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Writes the source records in plan order, byte for byte, one per line,
/// and a manifest beside the output.
///
/// Only the offset index and the permutation are held in memory; each
/// record is read from the source on demand. The output ends with a newline
/// exactly when the source did. Plans that dropped samples (SEG with gaps
/// allowed) write only the samples they kept.
pub fn materialize(
    handle: &CorpusHandle,
    plan: &OrderingPlan,
    out_path: impl AsRef<Path>,
) -> Result<Manifest> {
    let out_path = out_path.as_ref();
    let n = handle.len();
    let partial = plan.params.allow_gaps == Some(true) && plan.len() < n;
    if plan.len() != n && !partial {
        return Err(DatasetError::Dimension(format!(
            "plan has {} positions but the corpus has {n} records",
            plan.len()
        )));
    }
    if partial {
        validate_selection(plan, n)?;
    } else {
        validate_plan(plan, n)?;
    }
    let found = file_digest(&handle.source_path)?;
    if found != handle.digest {
        return Err(DatasetError::StaleIndex {
            path: handle.source_path.clone(),
            expected: handle.digest.clone(),
            found,
        });
    }

    let src_path = &handle.source_path;
    let mut src = File::open(src_path).map_err(|e| DatasetError::io(src_path, e))?;
    let out = File::create(out_path).map_err(|e| DatasetError::io(out_path, e))?;
    let mut writer = BufWriter::with_capacity(1 << 16, out);
    let mut hasher = Sha256::new();
    let mut buf = Vec::new();
    let mut emit = |bytes: &[u8], writer: &mut BufWriter<File>| -> Result<()> {
        hasher.update(bytes);
        writer
            .write_all(bytes)
            .map_err(|e| DatasetError::io(out_path, e))
    };

    for (pos, &idx) in plan.permutation.iter().enumerate() {
        let span = handle.records[idx];
        buf.resize(span.len as usize, 0);
        src.seek(SeekFrom::Start(span.offset))
            .and_then(|_| src.read_exact(&mut buf))
            .map_err(|e| DatasetError::io(src_path, e))?;
        emit(&buf, &mut writer)?;
        if pos + 1 < plan.len() || handle.trailing_newline {
            emit(b"\n", &mut writer)?;
        }
    }
    writer.flush().map_err(|e| DatasetError::io(out_path, e))?;

    let mut manifest = Manifest::for_plan(plan, handle);
    manifest.output_path = Some(out_path.to_path_buf());
    manifest.output_digest = Some(hex::encode(hasher.finalize()));
    manifest.write(manifest_path_for(out_path))?;
    Ok(manifest)
}
