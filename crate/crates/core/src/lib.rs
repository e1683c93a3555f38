//! Multi-label learning baseline toolkit.
//!
//! Reads Mulan and MEKA ARFF datasets, computes dataset statistics, fits the
//! General_B constant baseline, evaluates it with eight bipartition measures
//! and compares published results against it.

pub mod baseline;
pub mod cli;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod mldata;
pub mod registry;

pub use baseline::{fit_general_b, GeneralBModel};
pub use error::{ArgumentError, Error, ParseError, RegistryError, Result};
pub use harness::{evaluate_baseline, Protocol};
pub use metrics::{evaluate_all, Direction, EvaluationReport, Measure};
pub use mldata::{DatasetStats, LabelSet, MultiLabelDataset};

/// Quotes a CSV field when it contains a separator, quote or line break.
pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
