//! Multi-label dataset model, ARFF/Mulan/MEKA loading and label statistics.

mod arff;
mod labelset;
mod stats;

pub use arff::{
    is_meka_relation, parse_auto, parse_meka, parse_mulan, parse_mulan_xml, to_arff, to_meka_arff, to_mulan_xml,
};
pub use labelset::LabelSet;
pub use stats::{
    cardinality, cooccurrence, density, distinct_labelsets, freq_summary, label_frequencies, quantile,
    CooccurrenceMatrix, DatasetStats, FiveNumberSummary,
};

use std::collections::HashSet;

use serde::Serialize;

use crate::error::ArgumentError;

/// Declared type of a feature attribute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Numeric,
    /// Nominal attribute with its declared values, in order.
    Nominal(Vec<String>),
    String,
    /// Date attribute, kept as text. Holds the optional format pattern.
    Date(Option<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
}

/// One feature value. Nominal values are indices into the attribute's
/// declared value list.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureValue {
    Numeric(f64),
    Nominal(u32),
    Text(Box<str>),
    Missing,
}

impl FeatureValue {
    /// Value of a feature omitted from a sparse row.
    pub const ZERO: FeatureValue = FeatureValue::Numeric(0.0);

    fn default_for(kind: &FeatureKind) -> FeatureValue {
        match kind {
            FeatureKind::Nominal(_) => FeatureValue::Nominal(0),
            _ => FeatureValue::ZERO,
        }
    }
}

/// Feature values of one instance, kept in the encoding they were read in.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureRow {
    Dense(Vec<FeatureValue>),
    /// `(feature index, value)` pairs, strictly ascending by index. Omitted
    /// features take their zero value.
    Sparse(Vec<(u32, FeatureValue)>),
}

impl FeatureRow {
    /// Value of feature `j` under `schema`.
    pub fn get(&self, j: usize, schema: &[FeatureSpec]) -> FeatureValue {
        match self {
            FeatureRow::Dense(v) => v[j].clone(),
            FeatureRow::Sparse(entries) => match entries.binary_search_by_key(&(j as u32), |(i, _)| *i) {
                Ok(pos) => entries[pos].1.clone(),
                Err(_) => FeatureValue::default_for(&schema[j].kind),
            },
        }
    }

    /// Expands to a dense vector of length `schema.len()`.
    pub fn to_dense(&self, schema: &[FeatureSpec]) -> Vec<FeatureValue> {
        (0..schema.len()).map(|j| self.get(j, schema)).collect()
    }

    fn check_arity(&self, m: usize) -> Result<(), String> {
        match self {
            FeatureRow::Dense(v) if v.len() != m => Err(format!("dense row has {} features, schema has {m}", v.len())),
            FeatureRow::Sparse(entries) => {
                let mut prev: Option<u32> = None;
                for (i, _) in entries {
                    if *i as usize >= m || prev.is_some_and(|p| p >= *i) {
                        return Err(format!("sparse feature index {i} invalid for {m} features"));
                    }
                    prev = Some(*i);
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub features: FeatureRow,
    pub labels: LabelSet,
}

/// A multi-label dataset: `N` instances over `M` features and `q` labels.
///
/// Immutable once built; every statistic is computed on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiLabelDataset {
    name: String,
    instances: Vec<Instance>,
    label_names: Vec<String>,
    feature_schema: Vec<FeatureSpec>,
}

impl MultiLabelDataset {
    /// Validates and assembles a dataset.
    ///
    /// Requires `q >= 1`, `N >= 1`, unique label names, and every instance
    /// matching the feature arity and label space.
    pub fn new(
        name: impl Into<String>,
        label_names: Vec<String>,
        feature_schema: Vec<FeatureSpec>,
        instances: Vec<Instance>,
    ) -> Result<Self, ArgumentError> {
        let q = label_names.len();
        if q == 0 {
            return Err(ArgumentError::new("dataset must declare at least one label"));
        }
        if instances.is_empty() {
            return Err(ArgumentError::new("dataset must contain at least one instance"));
        }
        let mut seen = HashSet::new();
        for n in &label_names {
            if !seen.insert(n.as_str()) {
                return Err(ArgumentError::new(format!("duplicate label name `{n}`")));
            }
        }
        let m = feature_schema.len();
        for (i, inst) in instances.iter().enumerate() {
            if inst.labels.q() != q {
                return Err(ArgumentError::new(format!(
                    "instance {i} has {} labels, dataset has {q}",
                    inst.labels.q()
                )));
            }
            inst.features.check_arity(m).map_err(|e| ArgumentError::new(format!("instance {i}: {e}")))?;
        }
        Ok(MultiLabelDataset { name: name.into(), instances, label_names, feature_schema })
    }

    /// Dataset with no features, built from label sets alone.
    pub fn from_labelsets(
        name: impl Into<String>,
        q: usize,
        labelsets: impl IntoIterator<Item = LabelSet>,
    ) -> Result<Self, ArgumentError> {
        let instances =
            labelsets.into_iter().map(|labels| Instance { features: FeatureRow::Dense(Vec::new()), labels }).collect();
        let label_names = (0..q).map(|i| format!("l{i}")).collect();
        Self::new(name, label_names, Vec::new(), instances)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn feature_schema(&self) -> &[FeatureSpec] {
        &self.feature_schema
    }

    /// `N`
    pub fn num_instances(&self) -> usize {
        self.instances.len()
    }

    /// `M`
    pub fn num_features(&self) -> usize {
        self.feature_schema.len()
    }

    /// `q`
    pub fn num_labels(&self) -> usize {
        self.label_names.len()
    }

    pub fn labelsets(&self) -> impl Iterator<Item = &LabelSet> {
        self.instances.iter().map(|i| &i.labels)
    }

    /// Dataset made of the instances at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self, ArgumentError> {
        let instances = indices
            .iter()
            .map(|&i| {
                self.instances
                    .get(i)
                    .cloned()
                    .ok_or_else(|| ArgumentError::new(format!("instance index {i} out of range")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(self.name.clone(), self.label_names.clone(), self.feature_schema.clone(), instances)
    }
}
