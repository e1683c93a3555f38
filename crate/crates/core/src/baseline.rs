//! General_B: a constant multi-label baseline.
//!
//! Labels are ranked by frequency; the model always predicts the top `σ`
//! labels, where `σ` is the label cardinality rounded to the nearest integer.
//! Features are never consulted.
//!
//! Among labels of equal frequency the next rank goes to the one with the
//! largest summed co-occurrence with the labels already ranked; remaining
//! ties go to the lower label index, so fitting is a pure function of the
//! labelsets.

use serde::Serialize;

use crate::error::ArgumentError;
use crate::mldata::{cooccurrence, label_frequencies, Instance, LabelSet, MultiLabelDataset};

/// Closest integer to the label cardinality, halves rounded away from zero,
/// clamped to `[1, q]`.
pub fn compute_sigma(d: &MultiLabelDataset) -> usize {
    let n = d.num_instances() as u64;
    let total: u64 = d.labelsets().map(|y| y.len() as u64).sum();
    // round(total / n) in integers: floor((2 total + n) / 2n)
    let rounded = ((2 * total + n) / (2 * n)) as usize;
    rounded.clamp(1, d.num_labels())
}

/// Label indices ordered best first.
pub fn rank_labels(d: &MultiLabelDataset) -> Vec<usize> {
    let freqs = label_frequencies(d);
    let cooc = cooccurrence(d);
    let q = d.num_labels();

    let mut placed: Vec<usize> = Vec::with_capacity(q);
    let mut remaining: Vec<usize> = (0..q).collect();
    // summed co-occurrence of each label with everything placed so far
    let mut affinity = vec![0u64; q];

    while !remaining.is_empty() {
        let best_freq = remaining.iter().map(|&l| freqs[l]).max().unwrap();
        // `remaining` stays in ascending index order, so the first maximum
        // wins index ties
        let (pos, &next) = remaining
            .iter()
            .enumerate()
            .filter(|(_, &l)| freqs[l] == best_freq)
            .fold(None::<(usize, &usize)>, |best, cand| match best {
                Some(b) if affinity[*b.1] >= affinity[*cand.1] => Some(b),
                _ => Some(cand),
            })
            .unwrap();
        remaining.remove(pos);
        placed.push(next);
        for (l, a) in affinity.iter_mut().enumerate() {
            *a += cooc.get(next, l);
        }
    }
    placed
}

/// A fitted General_B model.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralBModel {
    dataset: String,
    label_names: Vec<String>,
    ranked_labels: Vec<usize>,
    sigma: usize,
    prediction: LabelSet,
}

pub fn fit_general_b(d: &MultiLabelDataset) -> GeneralBModel {
    let ranked_labels = rank_labels(d);
    let sigma = compute_sigma(d);
    let prediction = LabelSet::from_indices(d.num_labels(), ranked_labels[..sigma].iter().copied())
        .expect("ranked labels are in range");
    GeneralBModel {
        dataset: d.name().to_string(),
        label_names: d.label_names().to_vec(),
        ranked_labels,
        sigma,
        prediction,
    }
}

#[derive(Serialize)]
struct ModelRecord<'a> {
    dataset: &'a str,
    sigma: usize,
    ranked_labels: Vec<&'a str>,
    prediction: Vec<&'a str>,
}

impl GeneralBModel {
    pub fn dataset(&self) -> &str {
        &self.dataset
    }

    pub fn q(&self) -> usize {
        self.label_names.len()
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn ranked_labels(&self) -> &[usize] {
        &self.ranked_labels
    }

    /// The constant predicted labelset.
    pub fn prediction(&self) -> &LabelSet {
        &self.prediction
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    /// Predicts the labelset of `inst`. The answer never depends on the
    /// instance; only its label space is checked.
    pub fn predict(&self, inst: &Instance) -> Result<&LabelSet, ArgumentError> {
        if inst.labels.q() != self.q() {
            return Err(ArgumentError::new(format!(
                "instance has {} labels, model was fitted on {}",
                inst.labels.q(),
                self.q()
            )));
        }
        Ok(&self.prediction)
    }

    /// `{dataset, sigma, ranked_labels, prediction}` with labels by name.
    pub fn to_json(&self) -> serde_json::Value {
        let name = |i: usize| self.label_names[i].as_str();
        let record = ModelRecord {
            dataset: &self.dataset,
            sigma: self.sigma,
            ranked_labels: self.ranked_labels.iter().map(|&i| name(i)).collect(),
            prediction: self.prediction.iter().map(name).collect(),
        };
        serde_json::to_value(record).expect("model record serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mldata::FeatureRow;

    fn ds(q: usize, sets: &[&[usize]]) -> MultiLabelDataset {
        MultiLabelDataset::from_labelsets(
            "t",
            q,
            sets.iter().map(|s| LabelSet::from_indices(q, s.iter().copied()).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn sigma_rounds_half_away_from_zero() {
        // cardinality 2.5
        let d = ds(4, &[&[0, 1], &[0, 1, 2]]);
        assert_eq!(compute_sigma(&d), 3);
        // cardinality 1.4 -> 1, 1.6 -> 2
        let d = ds(3, &[&[0], &[0], &[0], &[0, 1], &[0, 1]]);
        assert_eq!(compute_sigma(&d), 1);
        let d = ds(3, &[&[0], &[0], &[0, 1], &[0, 1], &[0, 1]]);
        assert_eq!(compute_sigma(&d), 2);
    }

    #[test]
    fn sigma_clamped_to_at_least_one() {
        let d = ds(3, &[&[], &[], &[], &[0]]);
        assert_eq!(compute_sigma(&d), 1);
    }

    #[test]
    fn rank_without_ties() {
        // frequencies [5, 9, 2]
        let mut sets: Vec<&[usize]> = Vec::new();
        sets.extend(std::iter::repeat_n(&[0usize, 1][..], 5));
        sets.extend(std::iter::repeat_n(&[1usize][..], 4));
        sets.extend(std::iter::repeat_n(&[2usize][..], 2));
        let d = ds(3, &sets);
        assert_eq!(label_frequencies(&d), vec![5, 9, 2]);
        assert_eq!(rank_labels(&d), vec![1, 0, 2]);
    }

    #[test]
    fn rank_tie_broken_by_cooccurrence() {
        // frequencies [4, 4, 6]; cooc(2,0) = 3, cooc(2,1) = 1
        let d = ds(3, &[&[2, 0], &[2, 0], &[2, 0], &[2, 1], &[2], &[2], &[0], &[1], &[1], &[1]]);
        assert_eq!(label_frequencies(&d), vec![4, 4, 6]);
        let c = cooccurrence(&d);
        assert_eq!((c.get(2, 0), c.get(2, 1)), (3, 1));
        assert_eq!(rank_labels(&d), vec![2, 0, 1]);
    }

    #[test]
    fn rank_tie_uses_index_fallback() {
        let d = ds(4, &[&[0, 1, 2, 3]]);
        assert_eq!(rank_labels(&d), vec![0, 1, 2, 3]);
        let none = ds(3, &[&[]]);
        assert_eq!(rank_labels(&none), vec![0, 1, 2]);
    }

    #[test]
    fn tie_break_considers_all_ranked_labels() {
        // labels 1 and 2 tie at frequency 2 behind label 0; label 2 co-occurs
        // with 0 twice, label 1 once
        let d = ds(3, &[&[0, 2], &[0, 2], &[0, 1], &[1], &[0]]);
        assert_eq!(rank_labels(&d), vec![0, 2, 1]);
    }

    #[test]
    fn single_label_majority() {
        let d = ds(3, &[&[1], &[1], &[0], &[1], &[2]]);
        let m = fit_general_b(&d);
        assert_eq!(m.sigma(), 1);
        assert_eq!(m.prediction().iter().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn predict_is_constant_and_checks_label_space() {
        let d = ds(3, &[&[0, 1], &[0], &[2]]);
        let m = fit_general_b(&d);
        let a = m.predict(&d.instances()[0]).unwrap().clone();
        let b = m.predict(&d.instances()[2]).unwrap().clone();
        assert_eq!(a, b);
        let foreign = Instance { features: FeatureRow::Dense(vec![]), labels: LabelSet::empty(5) };
        assert!(m.predict(&foreign).is_err());
    }

    #[test]
    fn json_record_uses_names() {
        let d = ds(3, &[&[0, 1], &[1], &[1, 2]]);
        let m = fit_general_b(&d);
        assert_eq!(
            m.to_json(),
            serde_json::json!({
                "dataset": "t",
                "sigma": 2,
                "ranked_labels": ["l1", "l0", "l2"],
                "prediction": ["l0", "l1"],
            })
        );
    }
}
