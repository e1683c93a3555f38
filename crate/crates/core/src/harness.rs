//! Evaluation protocols for the baseline: full dataset, hold-out and
//! k-fold cross-validation. Splits are plain seeded shuffles (no
//! stratification).

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::baseline::fit_general_b;
use crate::error::ArgumentError;
use crate::metrics::{evaluate_all, BipartitionPair, EvaluationReport};
use crate::mldata::MultiLabelDataset;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProtocolKind {
    /// Fit and evaluate on the whole dataset.
    Full,
    Holdout {
        train_fraction: f64,
    },
    #[serde(rename = "cv")]
    KFold {
        k: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Protocol {
    pub kind: ProtocolKind,
    pub seed: u64,
}

impl Protocol {
    pub fn full() -> Self {
        Protocol { kind: ProtocolKind::Full, seed: 0 }
    }

    pub fn holdout(train_fraction: f64, seed: u64) -> Result<Self, ArgumentError> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(ArgumentError::new(format!("hold-out train fraction {train_fraction} must lie in (0, 1)")));
        }
        Ok(Protocol { kind: ProtocolKind::Holdout { train_fraction }, seed })
    }

    pub fn kfold(k: usize, seed: u64) -> Result<Self, ArgumentError> {
        if k < 2 {
            return Err(ArgumentError::new(format!("k-fold needs k >= 2, got {k}")));
        }
        Ok(Protocol { kind: ProtocolKind::KFold { k }, seed })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

impl FromStr for Protocol {
    type Err = ArgumentError;

    /// `full`, `holdout:F` or `cv:K`; the seed defaults to 0.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        match (kind.to_ascii_lowercase().as_str(), arg) {
            ("full", None) => Ok(Protocol::full()),
            ("holdout", Some(f)) => {
                let f: f64 = f.parse().map_err(|_| ArgumentError::new(format!("bad hold-out fraction `{f}`")))?;
                Protocol::holdout(f, 0)
            }
            ("cv" | "kfold", Some(k)) => {
                let k: usize = k.parse().map_err(|_| ArgumentError::new(format!("bad fold count `{k}`")))?;
                Protocol::kfold(k, 0)
            }
            _ => Err(ArgumentError::new(format!("unknown protocol `{s}` (expected full, holdout:F or cv:K)"))),
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ProtocolKind::Full => write!(f, "full"),
            ProtocolKind::Holdout { train_fraction } => write!(f, "holdout:{train_fraction}"),
            ProtocolKind::KFold { k } => write!(f, "cv:{k}"),
        }
    }
}

/// Instance indices of one train/test partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

impl Split {
    pub fn materialize(&self, d: &MultiLabelDataset) -> Result<(MultiLabelDataset, MultiLabelDataset), ArgumentError> {
        Ok((d.subset(&self.train)?, d.subset(&self.test)?))
    }
}

fn shuffled_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    idx.shuffle(&mut rng);
    idx
}

/// Number of training instances for a hold-out split of `n` instances:
/// `⌈fraction·n⌉`, clamped so both sides keep at least one instance.
pub fn holdout_train_size(n: usize, train_fraction: f64) -> Result<usize, ArgumentError> {
    if n < 2 {
        return Err(ArgumentError::new(format!("hold-out needs at least 2 instances, dataset has {n}")));
    }
    // absorb representation error such as 0.7 * 10 = 7.000000000000001
    let raw = (train_fraction * n as f64 - 1e-9).ceil() as usize;
    Ok(raw.clamp(1, n - 1))
}

pub fn split_holdout(d: &MultiLabelDataset, p: &Protocol) -> Result<Split, ArgumentError> {
    let ProtocolKind::Holdout { train_fraction } = p.kind else {
        return Err(ArgumentError::new(format!("protocol {p} is not hold-out")));
    };
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(ArgumentError::new(format!("hold-out train fraction {train_fraction} must lie in (0, 1)")));
    }
    let n = d.num_instances();
    let n_train = holdout_train_size(n, train_fraction)?;
    let mut idx = shuffled_indices(n, p.seed);
    let test = idx.split_off(n_train);
    Ok(Split { train: idx, test })
}

pub fn split_kfold(d: &MultiLabelDataset, p: &Protocol) -> Result<Vec<Split>, ArgumentError> {
    let ProtocolKind::KFold { k } = p.kind else {
        return Err(ArgumentError::new(format!("protocol {p} is not k-fold")));
    };
    let n = d.num_instances();
    if k < 2 || k > n {
        return Err(ArgumentError::new(format!("k-fold with k = {k} needs 2 <= k <= N = {n}")));
    }
    let idx = shuffled_indices(n, p.seed);
    // the first n % k folds get one extra instance
    let (base, extra) = (n / k, n % k);
    let mut bounds = Vec::with_capacity(k + 1);
    bounds.push(0);
    for f in 0..k {
        let size = base + usize::from(f < extra);
        bounds.push(bounds[f] + size);
    }
    Ok((0..k)
        .map(|f| {
            let (lo, hi) = (bounds[f], bounds[f + 1]);
            let test = idx[lo..hi].to_vec();
            let train = idx[..lo].iter().chain(&idx[hi..]).copied().collect();
            Split { train, test }
        })
        .collect())
}

/// Fits the baseline on `train` and evaluates its constant prediction
/// against every instance of `test`.
pub fn fit_and_evaluate(
    train: &MultiLabelDataset,
    test: &MultiLabelDataset,
) -> Result<EvaluationReport, ArgumentError> {
    let model = fit_general_b(train);
    let pairs = test
        .instances()
        .iter()
        .map(|inst| BipartitionPair::new(&inst.labels, model.predict(inst)?))
        .collect::<Result<Vec<_>, _>>()?;
    evaluate_all(&pairs)
}

/// Per-fold reports for `p`; a single report for `full` and `holdout`.
pub fn evaluate_baseline_folds(d: &MultiLabelDataset, p: &Protocol) -> Result<Vec<EvaluationReport>, ArgumentError> {
    match p.kind {
        ProtocolKind::Full => Ok(vec![fit_and_evaluate(d, d)?]),
        ProtocolKind::Holdout { .. } => {
            let (train, test) = split_holdout(d, p)?.materialize(d)?;
            Ok(vec![fit_and_evaluate(&train, &test)?])
        }
        ProtocolKind::KFold { .. } => split_kfold(d, p)?
            .iter()
            .map(|s| {
                let (train, test) = s.materialize(d)?;
                fit_and_evaluate(&train, &test)
            })
            .collect(),
    }
}

/// Evaluates the baseline under `p`. k-fold reports are averaged with equal
/// weight per fold.
pub fn evaluate_baseline(d: &MultiLabelDataset, p: &Protocol) -> Result<EvaluationReport, ArgumentError> {
    EvaluationReport::mean(&evaluate_baseline_folds(d, p)?)
}
