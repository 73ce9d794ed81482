//! Classification models: feature standardization, two-class LDA, CART
//! decision trees, random forest with grid search, and model persistence.

mod forest;
mod grid;
mod lda;
mod persist;
mod standardize;
mod tree;

pub use forest::{rf_feature_importance, rf_fit, rf_predict, ForestModel, MaxFeatures, RfHyperparams};
pub use grid::{default_grid, grid_search, GridCell};
pub use lda::{lda_fit, lda_predict, LdaModel};
pub use persist::{load_model, save_model, SavedModel, TrainedModel, MODEL_SCHEMA_VERSION};
pub use standardize::Standardizer;
pub use tree::{DecisionTree, TreeNode};
