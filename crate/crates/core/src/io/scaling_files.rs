//! Observation CSVs and fitted-constant JSON documents.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DatasetError, Result};
use crate::scaling::{LogParams, PipelineFit, ScalingConstants, ScalingObservation};

/// Reads `n_params,tokens,loss` rows. Extra columns are ignored.
pub fn read_observations_csv(path: impl AsRef<Path>) -> Result<Vec<ScalingObservation>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| DatasetError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut out = Vec::new();
    for (i, row) in reader.deserialize::<ScalingObservation>().enumerate() {
        let row = row.map_err(|e| DatasetError::Parse {
            line: i + 2,
            message: e.to_string(),
        })?;
        out.push(row);
    }
    Ok(out)
}

pub fn write_observations_csv(path: impl AsRef<Path>, obs: &[ScalingObservation]) -> Result<()> {
    let path = path.as_ref();
    let mut writer =
        csv::Writer::from_path(path).map_err(|e| DatasetError::Format(e.to_string()))?;
    for o in obs {
        writer
            .serialize(o)
            .map_err(|e| DatasetError::Format(e.to_string()))?;
    }
    writer.flush().map_err(|e| DatasetError::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceSummary {
    pub n_params: f64,
    pub r_squared: Option<f64>,
}

/// JSON form of a fitted law. Only the five constants are required when
/// reading; the rest describes how the fit went.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsDocument {
    #[serde(flatten)]
    pub constants: ScalingConstants,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<LogParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub slices: Vec<SliceSummary>,
}

impl ConstantsDocument {
    pub fn from_pipeline(fit: &PipelineFit) -> Self {
        let j = &fit.joint;
        Self {
            constants: j.constants,
            init: Some(j.init),
            iterations: Some(j.iterations),
            objective: Some(j.objective),
            converged: Some(j.converged),
            warning: (!j.converged).then(|| {
                format!(
                    "iteration cap reached after {} iterations; constants are the best found",
                    j.iterations
                )
            }),
            slices: fit
                .slices
                .iter()
                .map(|s| SliceSummary {
                    n_params: s.n_params,
                    r_squared: s.r_squared,
                })
                .collect(),
        }
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut text =
            serde_json::to_string_pretty(self).map_err(|e| DatasetError::Format(e.to_string()))?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| DatasetError::io(path, e))
    }
}

/// Reads a constants document and checks the constants are usable.
pub fn read_constants_json(path: impl AsRef<Path>) -> Result<ConstantsDocument> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
    let doc: ConstantsDocument = serde_json::from_str(&text)
        .map_err(|e| DatasetError::Format(format!("{}: {e}", path.display())))?;
    doc.constants
        .validate()
        .map_err(|e| DatasetError::Format(format!("{}: {e}", path.display())))?;
    Ok(doc)
}
