#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use mlbase::mldata::LabelSet;
use mlbase::{Measure, MultiLabelDataset};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

/// Directory holding `<name>.arff` / `<name>.xml` benchmark files.
pub fn data_dir() -> PathBuf {
    match std::env::var_os("MLBASE_DATA_DIR") {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR"))
            .ancestors()
            .nth(2)
            .expect("crate sits two levels below the workspace root")
            .join("data/mulan"),
    }
}

pub fn to_sets(rows: &[Vec<bool>]) -> Vec<BTreeSet<usize>> {
    rows.iter().map(|r| r.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()).collect()
}

pub fn to_labelsets(rows: &[Vec<bool>]) -> Vec<LabelSet> {
    rows.iter()
        .map(|r| LabelSet::from_indices(r.len(), r.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)).unwrap())
        .collect()
}

fn ratio(num: usize, den: usize, both_empty: bool) -> f64 {
    match (den, both_empty) {
        (0, true) => 1.0,
        (0, false) => 0.0,
        _ => num as f64 / den as f64,
    }
}

/// Every measure computed straight from set operations on `BTreeSet`s, one
/// instance or one label at a time.
pub fn brute_force(truth: &[Vec<bool>], pred: &[Vec<bool>]) -> BTreeMap<Measure, f64> {
    let n = truth.len();
    let q = truth[0].len();
    let (ys, zs) = (to_sets(truth), to_sets(pred));
    let mut hl = 0.0;
    let mut sacc = 0.0;
    let mut acc = 0.0;
    let mut pr = 0.0;
    let mut re = 0.0;
    let mut f1 = 0.0;
    for (y, z) in ys.iter().zip(&zs) {
        let inter = y.intersection(z).count();
        let union = y.union(z).count();
        let sym = y.symmetric_difference(z).count();
        let both_empty = y.is_empty() && z.is_empty();
        hl += sym as f64 / q as f64;
        sacc += f64::from(u8::from(y == z));
        acc += ratio(inter, union, both_empty);
        pr += ratio(inter, z.len(), both_empty);
        re += ratio(inter, y.len(), both_empty);
        f1 += ratio(2 * inter, y.len() + z.len(), both_empty);
    }
    let nf = n as f64;

    let mut macro_sum = 0.0;
    let (mut tp_all, mut fp_all, mut fn_all) = (0usize, 0usize, 0usize);
    for j in 0..q {
        let truly: BTreeSet<usize> = (0..n).filter(|&i| ys[i].contains(&j)).collect();
        let predicted: BTreeSet<usize> = (0..n).filter(|&i| zs[i].contains(&j)).collect();
        let tp = truly.intersection(&predicted).count();
        let fp = predicted.difference(&truly).count();
        let fn_ = truly.difference(&predicted).count();
        macro_sum += ratio(2 * tp, 2 * tp + fp + fn_, false);
        tp_all += tp;
        fp_all += fp;
        fn_all += fn_;
    }

    BTreeMap::from([
        (Measure::HammingLoss, hl / nf),
        (Measure::SubsetAccuracy, sacc / nf),
        (Measure::Accuracy, acc / nf),
        (Measure::Precision, pr / nf),
        (Measure::Recall, re / nf),
        (Measure::FMeasure, f1 / nf),
        (Measure::MacroF1, macro_sum / q as f64),
        (Measure::MicroF1, ratio(2 * tp_all, 2 * tp_all + fp_all + fn_all, false)),
    ])
}

/// `n × q` random 0/1 matrix; `density` is the chance of a 1.
pub fn random_matrix(rng: &mut impl Rng, n: usize, q: usize, density: f64) -> Vec<Vec<bool>> {
    (0..n).map(|_| (0..q).map(|_| rng.gen_bool(density)).collect()).collect()
}

pub fn dataset_from_rows(name: &str, rows: &[Vec<bool>]) -> MultiLabelDataset {
    MultiLabelDataset::from_labelsets(name, rows[0].len(), to_labelsets(rows)).unwrap()
}

/// Published values and baselines for 3 datasets × 4 measures, with the
/// counts worked out by hand.
pub struct ComparisonFixture {
    pub results_csv: String,
    pub baselines_csv: String,
}

pub fn comparison_fixture() -> ComparisonFixture {
    ComparisonFixture { results_csv: read_fixture("published.csv"), baselines_csv: read_fixture("baselines.csv") }
}
