//! Model persistence: the `annulus-model/1` structured-text format.
//!
//! Serialization must round-trip bit-exactly; JSON f64 values use the
//! shortest representation that parses back to the identical bits.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

use super::forest::ForestModel;
use super::lda::LdaModel;
use super::standardize::Standardizer;

pub const MODEL_SCHEMA_VERSION: &str = "annulus-model/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TrainedModel {
    Lda(LdaModel),
    Rf(ForestModel),
}

/// A saved model: the classifier, the training-split standardizer, and the
/// selected feature names in model input order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    pub schema: String,
    #[serde(default)]
    pub tool_version: String,
    #[serde(default)]
    pub config_hash: String,
    pub seed: u64,
    pub standardizer: Standardizer,
    pub selected_features: Vec<String>,
    pub model: TrainedModel,
}

impl SavedModel {
    pub fn new(
        seed: u64,
        standardizer: Standardizer,
        selected_features: Vec<String>,
        model: TrainedModel,
    ) -> Self {
        SavedModel {
            schema: MODEL_SCHEMA_VERSION.to_string(),
            tool_version: String::new(),
            config_hash: String::new(),
            seed,
            standardizer,
            selected_features,
            model,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("model serializes");
        out.push('\n');
        out
    }

    pub fn from_text(text: &str) -> Result<SavedModel> {
        let model: SavedModel =
            serde_json::from_str(text).map_err(|e| Error::schema(format!("model file: {e}")))?;
        if model.schema != MODEL_SCHEMA_VERSION {
            return Err(Error::schema(format!(
                "unsupported model schema {:?}, expected {MODEL_SCHEMA_VERSION:?}",
                model.schema
            )));
        }
        Ok(model)
    }
}

pub fn save_model(model: &SavedModel, path: &Path) -> Result<()> {
    std::fs::write(path, model.to_text())?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<SavedModel> {
    SavedModel::from_text(&std::fs::read_to_string(path)?)
}
