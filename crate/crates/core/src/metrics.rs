//! Bipartition evaluation measures over (truth, prediction) label sets.
//!
//! Example-based measures average a per-instance term; label-based ones
//! (macro/micro F1) work from per-label confusion counts.
//!
//! Division by zero follows [`ZERO_DIVISION`]: a term whose denominator is
//! empty because both sets are empty scores 1, any other empty denominator
//! scores 0. Per-label F1 of a label that is never true and never predicted
//! is 0, as is micro-F1 with no positives at all.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ArgumentError;
use crate::mldata::LabelSet;

/// Score given to an example-based term when truth and prediction are both
/// empty.
pub const ZERO_DIVISION: f64 = 1.0;

/// Whether smaller or larger values of a measure are better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Higher,
}

impl Direction {
    /// True when `value` is worse than or equal to `reference`.
    pub fn no_better(self, value: f64, reference: f64) -> bool {
        match self {
            Direction::Lower => value >= reference,
            Direction::Higher => value <= reference,
        }
    }

    /// True when `a` is strictly better than `b`.
    pub fn better(self, a: f64, b: f64) -> bool {
        !self.no_better(a, b)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Lower => "lower",
            Direction::Higher => "higher",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The eight bipartition measures, in report column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Measure {
    #[serde(rename = "Acc")]
    Accuracy,
    #[serde(rename = "F1")]
    FMeasure,
    #[serde(rename = "HL")]
    HammingLoss,
    #[serde(rename = "Pr")]
    Precision,
    #[serde(rename = "Re")]
    Recall,
    #[serde(rename = "SAcc")]
    SubsetAccuracy,
    #[serde(rename = "MacroF1")]
    MacroF1,
    #[serde(rename = "MicroF1")]
    MicroF1,
}

impl Measure {
    pub const ALL: [Measure; 8] = [
        Measure::Accuracy,
        Measure::FMeasure,
        Measure::HammingLoss,
        Measure::Precision,
        Measure::Recall,
        Measure::SubsetAccuracy,
        Measure::MacroF1,
        Measure::MicroF1,
    ];

    /// Short identifier used in files and tables.
    pub fn id(self) -> &'static str {
        match self {
            Measure::Accuracy => "Acc",
            Measure::FMeasure => "F1",
            Measure::HammingLoss => "HL",
            Measure::Precision => "Pr",
            Measure::Recall => "Re",
            Measure::SubsetAccuracy => "SAcc",
            Measure::MacroF1 => "MacroF1",
            Measure::MicroF1 => "MicroF1",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            Measure::HammingLoss => Direction::Lower,
            _ => Direction::Higher,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Measure {
    type Err = ArgumentError;

    /// Accepts the short ids plus common spellings, ignoring case, spaces,
    /// `-` and `_`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, ' ' | '-' | '_' | '^' | '{' | '}' | '\\'))
            .flat_map(char::to_lowercase)
            .collect();
        let m = match key.as_str() {
            "acc" | "accuracy" => Measure::Accuracy,
            "f1" | "fmeasure" | "f" => Measure::FMeasure,
            "hl" | "hammingloss" => Measure::HammingLoss,
            "pr" | "prec" | "precision" => Measure::Precision,
            "re" | "rec" | "recall" => Measure::Recall,
            "sacc" | "subsetaccuracy" | "exactmatch" => Measure::SubsetAccuracy,
            "macrof1" | "f1m" | "f1macro" | "macrofmeasure" => Measure::MacroF1,
            "microf1" | "f1mu" | "f1μ" | "f1micro" | "microfmeasure" => Measure::MicroF1,
            _ => return Err(ArgumentError::new(format!("unknown measure `{s}`"))),
        };
        Ok(m)
    }
}

/// Truth and prediction for one instance, over the same label space.
#[derive(Debug, Clone, Copy)]
pub struct BipartitionPair<'a> {
    pub truth: &'a LabelSet,
    pub predicted: &'a LabelSet,
}

impl<'a> BipartitionPair<'a> {
    pub fn new(truth: &'a LabelSet, predicted: &'a LabelSet) -> Result<Self, ArgumentError> {
        if truth.q() != predicted.q() {
            return Err(ArgumentError::new(format!(
                "truth has {} labels, prediction has {}",
                truth.q(),
                predicted.q()
            )));
        }
        Ok(BipartitionPair { truth, predicted })
    }

    pub fn q(&self) -> usize {
        self.truth.q()
    }
}

/// Pairs each truth with its prediction.
pub fn pair_up<'a>(
    truths: &'a [LabelSet],
    predictions: &'a [LabelSet],
) -> Result<Vec<BipartitionPair<'a>>, ArgumentError> {
    if truths.len() != predictions.len() {
        return Err(ArgumentError::new(format!("{} truths but {} predictions", truths.len(), predictions.len())));
    }
    truths.iter().zip(predictions).map(|(y, z)| BipartitionPair::new(y, z)).collect()
}

fn check(pairs: &[BipartitionPair<'_>]) -> Result<usize, ArgumentError> {
    let first = pairs.first().ok_or_else(|| ArgumentError::new("no (truth, prediction) pairs to evaluate"))?;
    let q = first.q();
    if let Some(p) = pairs.iter().find(|p| p.q() != q || p.predicted.q() != q) {
        return Err(ArgumentError::new(format!("mixed label spaces: {q} and {}", p.q().max(p.predicted.q()))));
    }
    Ok(q)
}

fn mean_of(pairs: &[BipartitionPair<'_>], term: impl Fn(&BipartitionPair<'_>) -> f64) -> Result<f64, ArgumentError> {
    check(pairs)?;
    Ok(pairs.iter().map(term).sum::<f64>() / pairs.len() as f64)
}

fn ratio_or(num: usize, den: usize, both_empty: bool) -> f64 {
    if den == 0 {
        if both_empty {
            ZERO_DIVISION
        } else {
            0.0
        }
    } else {
        num as f64 / den as f64
    }
}

pub fn hamming_loss(pairs: &[BipartitionPair<'_>]) -> Result<f64, ArgumentError> {
    let q = check(pairs)?;
    let wrong: usize = pairs.iter().map(|p| p.truth.symmetric_difference_len(p.predicted)).sum();
    Ok(wrong as f64 / (pairs.len() * q) as f64)
}

pub fn subset_accuracy(pairs: &[BipartitionPair<'_>]) -> Result<f64, ArgumentError> {
    mean_of(pairs, |p| if p.truth == p.predicted { 1.0 } else { 0.0 })
}

pub fn accuracy(pairs: &[BipartitionPair<'_>]) -> Result<f64, ArgumentError> {
    mean_of(pairs, |p| {
        let union = p.truth.union_len(p.predicted);
        ratio_or(p.truth.intersection_len(p.predicted), union, union == 0)
    })
}

pub fn precision(pairs: &[BipartitionPair<'_>]) -> Result<f64, ArgumentError> {
    mean_of(pairs, |p| ratio_or(p.truth.intersection_len(p.predicted), p.predicted.len(), p.truth.is_empty()))
}

pub fn recall(pairs: &[BipartitionPair<'_>]) -> Result<f64, ArgumentError> {
    mean_of(pairs, |p| ratio_or(p.truth.intersection_len(p.predicted), p.truth.len(), p.predicted.is_empty()))
}

pub fn f_measure(pairs: &[BipartitionPair<'_>]) -> Result<f64, ArgumentError> {
    mean_of(pairs, |p| {
        let den = p.truth.len() + p.predicted.len();
        ratio_or(2 * p.truth.intersection_len(p.predicted), den, den == 0)
    })
}

/// Binary confusion counts for a single label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BinaryCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl BinaryCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// `2tp / (2tp + fp + fn)`, 0 when the denominator is 0.
    pub fn f1(&self) -> f64 {
        let den = 2 * self.tp + self.fp + self.fn_;
        if den == 0 {
            0.0
        } else {
            (2 * self.tp) as f64 / den as f64
        }
    }
}

impl std::ops::Add for BinaryCounts {
    type Output = BinaryCounts;

    fn add(self, o: BinaryCounts) -> BinaryCounts {
        BinaryCounts { tp: self.tp + o.tp, fp: self.fp + o.fp, tn: self.tn + o.tn, fn_: self.fn_ + o.fn_ }
    }
}

/// Per-label confusion counts over `n` instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelConfusion {
    pub n: u64,
    pub per_label: Vec<BinaryCounts>,
}

impl LabelConfusion {
    pub fn q(&self) -> usize {
        self.per_label.len()
    }

    /// Counts summed over all labels.
    pub fn pooled(&self) -> BinaryCounts {
        self.per_label.iter().fold(BinaryCounts::default(), |acc, c| acc + *c)
    }
}

pub fn confusion(pairs: &[BipartitionPair<'_>]) -> Result<LabelConfusion, ArgumentError> {
    let q = check(pairs)?;
    let n = pairs.len() as u64;
    let mut tp = vec![0u64; q];
    let mut fp = vec![0u64; q];
    let mut fn_ = vec![0u64; q];
    for p in pairs {
        for j in p.truth.iter() {
            if p.predicted.contains(j) {
                tp[j] += 1;
            } else {
                fn_[j] += 1;
            }
        }
        for j in p.predicted.iter() {
            if !p.truth.contains(j) {
                fp[j] += 1;
            }
        }
    }
    let per_label =
        (0..q).map(|j| BinaryCounts { tp: tp[j], fp: fp[j], tn: n - tp[j] - fp[j] - fn_[j], fn_: fn_[j] }).collect();
    Ok(LabelConfusion { n, per_label })
}

/// Mean of the per-label F1 scores.
pub fn macro_f1(c: &LabelConfusion) -> f64 {
    if c.per_label.is_empty() {
        return 0.0;
    }
    c.per_label.iter().map(BinaryCounts::f1).sum::<f64>() / c.q() as f64
}

/// F1 of the label-summed counts.
pub fn micro_f1(c: &LabelConfusion) -> f64 {
    c.pooled().f1()
}

/// Values of all eight measures for one evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    values: BTreeMap<Measure, f64>,
}

impl EvaluationReport {
    pub fn from_values(values: BTreeMap<Measure, f64>) -> Self {
        EvaluationReport { values }
    }

    pub fn get(&self, m: Measure) -> Option<f64> {
        self.values.get(&m).copied()
    }

    pub fn direction(&self, m: Measure) -> Direction {
        m.direction()
    }

    /// `(measure, value, direction)` in column order.
    pub fn iter(&self) -> impl Iterator<Item = (Measure, f64, Direction)> + '_ {
        self.values.iter().map(|(&m, &v)| (m, v, m.direction()))
    }

    pub fn values(&self) -> &BTreeMap<Measure, f64> {
        &self.values
    }

    /// Unweighted per-measure mean of several reports.
    pub fn mean(reports: &[EvaluationReport]) -> Result<EvaluationReport, ArgumentError> {
        if reports.is_empty() {
            return Err(ArgumentError::new("no reports to average"));
        }
        let mut sums: BTreeMap<Measure, f64> = BTreeMap::new();
        for r in reports {
            for (m, v, _) in r.iter() {
                *sums.entry(m).or_default() += v;
            }
        }
        let n = reports.len() as f64;
        Ok(EvaluationReport { values: sums.into_iter().map(|(m, s)| (m, s / n)).collect() })
    }

    pub const CSV_HEADER: &'static str = "dataset,measure,value,direction";

    /// `dataset,measure,value,direction` rows, no header.
    pub fn to_csv_rows(&self, dataset: &str) -> String {
        let name = crate::csv_field(dataset);
        self.iter().map(|(m, v, d)| format!("{name},{m},{v},{d}\n")).collect()
    }

    pub fn to_json(&self, dataset: &str) -> serde_json::Value {
        let measures: Vec<serde_json::Value> = self
            .iter()
            .map(|(m, v, d)| serde_json::json!({"measure": m.id(), "value": v, "direction": d.as_str()}))
            .collect();
        serde_json::json!({"dataset": dataset, "measures": measures})
    }
}

pub fn evaluate_all(pairs: &[BipartitionPair<'_>]) -> Result<EvaluationReport, ArgumentError> {
    let c = confusion(pairs)?;
    let values = BTreeMap::from([
        (Measure::Accuracy, accuracy(pairs)?),
        (Measure::FMeasure, f_measure(pairs)?),
        (Measure::HammingLoss, hamming_loss(pairs)?),
        (Measure::Precision, precision(pairs)?),
        (Measure::Recall, recall(pairs)?),
        (Measure::SubsetAccuracy, subset_accuracy(pairs)?),
        (Measure::MacroF1, macro_f1(&c)),
        (Measure::MicroF1, micro_f1(&c)),
    ]);
    Ok(EvaluationReport { values })
}
