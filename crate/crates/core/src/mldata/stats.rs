use std::collections::HashSet;

use serde::Serialize;

use super::{LabelSet, MultiLabelDataset};
use crate::csv_field;
use crate::error::ArgumentError;

/// Label cardinality: mean labelset size.
pub fn cardinality(d: &MultiLabelDataset) -> f64 {
    total_label_count(d) as f64 / d.num_instances() as f64
}

/// Label density: cardinality divided by the number of labels.
pub fn density(d: &MultiLabelDataset) -> f64 {
    cardinality(d) / d.num_labels() as f64
}

pub(crate) fn total_label_count(d: &MultiLabelDataset) -> u64 {
    d.labelsets().map(|y| y.len() as u64).sum()
}

/// Number of distinct labelsets among the instances.
pub fn distinct_labelsets(d: &MultiLabelDataset) -> usize {
    d.labelsets().collect::<HashSet<&LabelSet>>().len()
}

/// Entry `i` counts the instances whose labelset contains label `i`.
pub fn label_frequencies(d: &MultiLabelDataset) -> Vec<u64> {
    let mut freqs = vec![0u64; d.num_labels()];
    for y in d.labelsets() {
        for i in y.iter() {
            freqs[i] += 1;
        }
    }
    freqs
}

/// Symmetric `q × q` label co-occurrence counts. The diagonal holds the
/// label frequencies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CooccurrenceMatrix {
    q: usize,
    counts: Vec<u64>,
}

impl CooccurrenceMatrix {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.q + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.counts[i * self.q..(i + 1) * self.q]
    }
}

pub fn cooccurrence(d: &MultiLabelDataset) -> CooccurrenceMatrix {
    let q = d.num_labels();
    let mut counts = vec![0u64; q * q];
    let mut members = Vec::with_capacity(q);
    for y in d.labelsets() {
        members.clear();
        members.extend(y.iter());
        for &i in &members {
            for &j in &members {
                counts[i * q + j] += 1;
            }
        }
    }
    CooccurrenceMatrix { q, counts }
}

/// Minimum, quartiles and maximum of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiveNumberSummary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl FiveNumberSummary {
    /// Quartiles use linear interpolation between closest ranks
    /// (Hyndman & Fan type 7).
    pub fn from_values(values: &[f64]) -> Result<Self, ArgumentError> {
        if values.is_empty() {
            return Err(ArgumentError::new("cannot summarize an empty sample"));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(FiveNumberSummary {
            min: sorted[0],
            q1: quantile(&sorted, 0.25),
            median: quantile(&sorted, 0.5),
            q3: quantile(&sorted, 0.75),
            max: sorted[sorted.len() - 1],
        })
    }
}

/// Type-7 quantile of an ascending, non-empty sample.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn freq_summary(freqs: &[u64]) -> Result<FiveNumberSummary, ArgumentError> {
    let values: Vec<f64> = freqs.iter().map(|&f| f as f64).collect();
    FiveNumberSummary::from_values(&values)
}

/// Dataset-level and label statistics in one record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetStats {
    pub dataset: String,
    pub num_instances: usize,
    pub num_features: usize,
    pub num_labels: usize,
    pub cardinality: f64,
    pub density: f64,
    pub distinct_labelsets: usize,
    pub label_frequencies: Vec<u64>,
    pub freq_summary: FiveNumberSummary,
}

impl DatasetStats {
    pub fn compute(d: &MultiLabelDataset) -> Self {
        let label_frequencies = label_frequencies(d);
        let freq_summary = freq_summary(&label_frequencies).expect("a dataset has at least one label");
        DatasetStats {
            dataset: d.name().to_string(),
            num_instances: d.num_instances(),
            num_features: d.num_features(),
            num_labels: d.num_labels(),
            cardinality: cardinality(d),
            density: density(d),
            distinct_labelsets: distinct_labelsets(d),
            label_frequencies,
            freq_summary,
        }
    }

    pub const CSV_HEADER: &'static str = "dataset,N,M,q,CR,DS,Dist,Min,1Q,Med,3Q,Max";

    /// One CSV row. `decimals` rounds CR/DS (and quartiles, which keep at
    /// most that many decimals); `None` writes full precision.
    pub fn csv_row(&self, decimals: Option<usize>) -> String {
        let real = |x: f64| match decimals {
            Some(p) => format!("{x:.p$}"),
            None => format!("{x}"),
        };
        // quartiles are often whole counts; print them without trailing zeros
        let count_like = |x: f64| {
            if x.fract() == 0.0 {
                format!("{x}")
            } else {
                real(x)
            }
        };
        let s = &self.freq_summary;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&self.dataset),
            self.num_instances,
            self.num_features,
            self.num_labels,
            real(self.cardinality),
            real(self.density),
            self.distinct_labelsets,
            count_like(s.min),
            count_like(s.q1),
            count_like(s.median),
            count_like(s.q3),
            count_like(s.max),
        )
    }
}
