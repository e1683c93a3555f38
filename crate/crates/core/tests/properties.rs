mod common;

use std::collections::BTreeSet;

use mlbase::baseline::{compute_sigma, fit_general_b, rank_labels};
use mlbase::harness::{holdout_train_size, split_holdout, split_kfold, Protocol};
use mlbase::metrics::{evaluate_all, pair_up, Measure};
use mlbase::mldata::{
    cardinality, cooccurrence, density, distinct_labelsets, label_frequencies, parse_meka, parse_mulan, to_arff,
    to_meka_arff, to_mulan_xml, FeatureKind, FeatureRow, FeatureSpec, FeatureValue, Instance, LabelSet,
    MultiLabelDataset,
};
use mlbase::registry::{self, BaselineTable, PublishedResult, GAP_THRESHOLD};
use mlbase::DatasetStats;
use proptest::prelude::*;
use proptest::sample::subsequence;

use common::{brute_force, dataset_from_rows, to_labelsets};

fn matrix(
    n: std::ops::RangeInclusive<usize>,
    q: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Vec<Vec<bool>>> {
    (n, q).prop_flat_map(|(n, q)| prop::collection::vec(prop::collection::vec(any::<bool>(), q), n))
}

fn matrix_pair() -> impl Strategy<Value = (Vec<Vec<bool>>, Vec<Vec<bool>>)> {
    (1..=8usize, 1..=6usize).prop_flat_map(|(n, q)| {
        let m = prop::collection::vec(prop::collection::vec(any::<bool>(), q), n);
        (m.clone(), m)
    })
}

fn evaluate(truth: &[Vec<bool>], pred: &[Vec<bool>]) -> mlbase::EvaluationReport {
    let (ys, zs) = (to_labelsets(truth), to_labelsets(pred));
    evaluate_all(&pair_up(&ys, &zs).unwrap()).unwrap()
}

fn permute_columns(rows: &[Vec<bool>], perm: &[usize]) -> Vec<Vec<bool>> {
    rows.iter()
        .map(|r| {
            let mut out = vec![false; r.len()];
            for (i, &b) in r.iter().enumerate() {
                out[perm[i]] = b;
            }
            out
        })
        .collect()
}

fn permutation(q: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..q).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn measures_lie_in_unit_interval((truth, pred) in matrix_pair()) {
        for (m, v, _) in evaluate(&truth, &pred).iter() {
            prop_assert!((0.0..=1.0).contains(&v), "{m} = {v}");
        }
    }

    #[test]
    fn measures_match_set_definitions((truth, pred) in matrix_pair()) {
        let report = evaluate(&truth, &pred);
        for (m, want) in brute_force(&truth, &pred) {
            prop_assert!((report.get(m).unwrap() - want).abs() <= 1e-12, "{m}");
        }
    }

    #[test]
    fn swapping_truth_and_prediction((truth, pred) in matrix_pair()) {
        let a = evaluate(&truth, &pred);
        let b = evaluate(&pred, &truth);
        for m in [Measure::HammingLoss, Measure::SubsetAccuracy, Measure::Accuracy, Measure::FMeasure, Measure::MacroF1, Measure::MicroF1] {
            prop_assert!((a.get(m).unwrap() - b.get(m).unwrap()).abs() <= 1e-12, "{m}");
        }
        prop_assert!((a.get(Measure::Precision).unwrap() - b.get(Measure::Recall).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn label_relabeling_leaves_measures_unchanged(
        (truth, pred, perm) in matrix_pair().prop_flat_map(|(t, p)| {
            let q = t[0].len();
            (Just(t), Just(p), permutation(q))
        })
    ) {
        let a = evaluate(&truth, &pred);
        let b = evaluate(&permute_columns(&truth, &perm), &permute_columns(&pred, &perm));
        for m in Measure::ALL {
            prop_assert!((a.get(m).unwrap() - b.get(m).unwrap()).abs() <= 1e-12, "{m}");
        }
    }

    #[test]
    fn perfect_and_complemented_predictions(truth in matrix(1..=8, 1..=6)) {
        let comp: Vec<Vec<bool>> = truth.iter().map(|r| r.iter().map(|b| !b).collect()).collect();
        prop_assert_eq!(evaluate(&truth, &truth).get(Measure::HammingLoss), Some(0.0));
        prop_assert_eq!(evaluate(&truth, &truth).get(Measure::SubsetAccuracy), Some(1.0));
        prop_assert_eq!(evaluate(&truth, &comp).get(Measure::HammingLoss), Some(1.0));
        prop_assert_eq!(evaluate(&truth, &comp).get(Measure::SubsetAccuracy), Some(0.0));
    }

    #[test]
    fn dataset_statistics_are_consistent(rows in matrix(1..=30, 1..=7)) {
        let d = dataset_from_rows("p", &rows);
        let (n, q) = (d.num_instances(), d.num_labels());
        let freqs = label_frequencies(&d);
        let total: u64 = freqs.iter().sum();
        prop_assert!((cardinality(&d) * n as f64 - total as f64).abs() < 1e-9);
        prop_assert!((density(&d) * q as f64 - cardinality(&d)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&density(&d)));
        prop_assert!(distinct_labelsets(&d) <= n.min(1 << q));
        prop_assert!(distinct_labelsets(&d) >= 1);
        let c = cooccurrence(&d);
        for i in 0..q {
            prop_assert_eq!(c.get(i, i), freqs[i]);
            for j in 0..q {
                prop_assert_eq!(c.get(i, j), c.get(j, i));
                prop_assert!(c.get(i, j) <= freqs[i].min(freqs[j]));
            }
        }
        let s = DatasetStats::compute(&d).freq_summary;
        prop_assert!(s.min <= s.q1 && s.q1 <= s.median && s.median <= s.q3 && s.q3 <= s.max);
    }

    #[test]
    fn baseline_predicts_top_sigma_frequencies(rows in matrix(1..=30, 1..=7)) {
        let d = dataset_from_rows("p", &rows);
        let m = fit_general_b(&d);
        let q = d.num_labels();
        prop_assert!(m.sigma() >= 1 && m.sigma() <= q);
        prop_assert_eq!(m.prediction().len(), m.sigma());
        let expected = ((cardinality(&d) + 0.5).floor() as usize).clamp(1, q);
        prop_assert_eq!(m.sigma(), expected);
        let ranked: BTreeSet<usize> = m.ranked_labels().iter().copied().collect();
        prop_assert_eq!(ranked.len(), q);
        let freqs = label_frequencies(&d);
        prop_assert!(m.ranked_labels().windows(2).all(|w| freqs[w[0]] >= freqs[w[1]]));
        for l in m.prediction().iter() {
            prop_assert!(m.ranked_labels()[..m.sigma()].contains(&l));
        }
    }

    #[test]
    fn baseline_ignores_instance_order(
        (rows, order) in matrix(1..=20, 1..=6).prop_flat_map(|r| {
            let n = r.len();
            (Just(r), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let d = dataset_from_rows("p", &rows);
        let shuffled = d.subset(&order).unwrap();
        prop_assert_eq!(fit_general_b(&d), fit_general_b(&shuffled));
    }

    #[test]
    fn baseline_follows_label_relabeling(
        (rows, perm) in matrix(1..=20, 1..=6).prop_flat_map(|r| {
            let q = r[0].len();
            (Just(r), permutation(q))
        })
    ) {
        let d = dataset_from_rows("p", &rows);
        let p = dataset_from_rows("p", &permute_columns(&rows, &perm));
        prop_assert_eq!(compute_sigma(&d), compute_sigma(&p));
        let (fd, fp) = (label_frequencies(&d), label_frequencies(&p));
        let top = |f: &[u64], m: &mlbase::GeneralBModel| {
            let mut v: Vec<u64> = m.prediction().iter().map(|l| f[l]).collect();
            v.sort_unstable();
            v
        };
        prop_assert_eq!(top(&fd, &fit_general_b(&d)), top(&fp, &fit_general_b(&p)));
        let distinct: BTreeSet<u64> = fd.iter().copied().collect();
        if distinct.len() == fd.len() {
            let mapped: Vec<usize> = rank_labels(&d).iter().map(|&l| perm[l]).collect();
            prop_assert_eq!(mapped, rank_labels(&p));
        }
    }

    #[test]
    fn kfold_splits_partition_instances(n in 2usize..60, k in 2usize..12, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let d = dataset_from_rows("p", &vec![vec![true]; n]);
        let folds = split_kfold(&d, &Protocol::kfold(k, seed).unwrap()).unwrap();
        prop_assert_eq!(folds.len(), k);
        let mut seen = vec![0; n];
        for f in &folds {
            prop_assert_eq!(f.train.len() + f.test.len(), n);
            for &i in &f.test {
                seen[i] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        let sizes: Vec<usize> = folds.iter().map(|f| f.test.len()).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn holdout_keeps_both_sides(n in 2usize..200, frac in 0.01f64..0.99, seed in any::<u64>()) {
        let d = dataset_from_rows("p", &vec![vec![false, true]; n]);
        let s = split_holdout(&d, &Protocol::holdout(frac, seed).unwrap()).unwrap();
        prop_assert_eq!(s.train.len(), holdout_train_size(n, frac).unwrap());
        prop_assert!(!s.train.is_empty() && !s.test.is_empty());
        let all: BTreeSet<usize> = s.train.iter().chain(&s.test).copied().collect();
        prop_assert_eq!(all.len(), n);
    }
}

fn published() -> impl Strategy<Value = Vec<PublishedResult>> {
    let one =
        (0..4usize, prop::sample::select(Measure::ALL.to_vec()), 0u32..=100).prop_map(|(d, m, v)| PublishedResult {
            paper_id: format!("p{d}{v}"),
            dataset: format!("d{d}"),
            measure: m,
            value: f64::from(v) / 100.0,
            protocol: "unspecified".into(),
            stddev: None,
        });
    prop::collection::vec(one, 0..40)
}

fn baselines() -> impl Strategy<Value = BaselineTable> {
    prop::collection::vec(0u32..=100, 32).prop_map(|vals| {
        let mut t = BaselineTable::new();
        for d in 0..4 {
            for (j, m) in Measure::ALL.iter().enumerate() {
                t.insert(&format!("d{d}"), *m, f64::from(vals[d * 8 + j]) / 100.0);
            }
        }
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn comparison_totals_add_up(results in published(), table in baselines()) {
        let s = registry::compare(&results, &table).unwrap();
        let cell_u: usize = s.cells.iter().map(|c| c.count.underperforming).sum();
        let cell_m: usize = s.cells.iter().map(|c| c.count.total).sum();
        let row_u: usize = s.rows.iter().map(|r| r.count.underperforming).sum();
        let col_u: usize = s.columns.iter().map(|c| c.count.underperforming).sum();
        let col_m: usize = s.columns.iter().map(|c| c.count.total).sum();
        prop_assert_eq!(cell_m, results.len());
        prop_assert_eq!(col_m, results.len());
        prop_assert_eq!(s.total.total, results.len());
        prop_assert_eq!(cell_u, s.total.underperforming);
        prop_assert_eq!(row_u, s.total.underperforming);
        prop_assert_eq!(col_u, s.total.underperforming);
        for c in &s.cells {
            prop_assert!(c.count.underperforming <= c.count.total);
        }
        for r in &s.rows {
            let p = r.count.percentage().unwrap();
            prop_assert!((0.0..=100.0).contains(&p));
        }
        let pcts: Vec<f64> = s.rows.iter().map(|r| r.count.percentage().unwrap()).collect();
        prop_assert!(pcts.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn comparison_ignores_result_order(
        (results, order) in published().prop_flat_map(|r| {
            let n = r.len();
            (Just(r), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        }),
        table in baselines(),
    ) {
        let shuffled: Vec<PublishedResult> = order.iter().map(|&i| results[i].clone()).collect();
        let a = registry::compare(&results, &table).unwrap();
        let b = registry::compare(&shuffled, &table).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(
            registry::render_report(&table, &a, &registry::distribution(&results, &table)),
            registry::render_report(&table, &b, &registry::distribution(&shuffled, &table))
        );
    }

    #[test]
    fn distribution_orders_values(results in published(), table in baselines()) {
        for c in registry::distribution(&results, &table).cells {
            let s = c.summary;
            prop_assert!(s.min <= s.q1 && s.q1 <= s.median && s.median <= s.q3 && s.q3 <= s.max);
            prop_assert!(c.best == s.min || c.best == s.max);
            prop_assert!(c.worst == s.min || c.worst == s.max);
            prop_assert_eq!(c.gap, (c.best - c.worst).abs() >= GAP_THRESHOLD - 1e-9);
        }
    }
}

fn feature_schema() -> impl Strategy<Value = Vec<FeatureSpec>> {
    let kind = prop_oneof![
        Just(FeatureKind::Numeric),
        Just(FeatureKind::String),
        subsequence(vec!["a", "b c", "it's", "x,y", "%", "{z}"], 1..=4)
            .prop_map(|v| FeatureKind::Nominal(v.into_iter().map(String::from).collect())),
    ];
    prop::collection::vec(kind, 0..5).prop_map(|kinds| {
        kinds.into_iter().enumerate().map(|(i, kind)| FeatureSpec { name: format!("f {i}"), kind }).collect()
    })
}

fn feature_value(kind: &FeatureKind) -> BoxedStrategy<FeatureValue> {
    let value = match kind {
        FeatureKind::Numeric => prop_oneof![
            (-1e6f64..1e6).prop_map(FeatureValue::Numeric),
            (-50i32..50).prop_map(|i| FeatureValue::Numeric(f64::from(i))),
        ]
        .boxed(),
        FeatureKind::Nominal(vals) => (0..vals.len() as u32).prop_map(FeatureValue::Nominal).boxed(),
        _ => "[a-z ,'\"%{}?\\\\\n\t]{0,8}".prop_map(|s| FeatureValue::Text(s.into())).boxed(),
    };
    prop_oneof![9 => value, 1 => Just(FeatureValue::Missing)].boxed()
}

fn dataset() -> impl Strategy<Value = MultiLabelDataset> {
    (feature_schema(), 1..=5usize, 1..=8usize, any::<bool>()).prop_flat_map(|(schema, q, n, sparse)| {
        let row = schema.iter().map(|s| feature_value(&s.kind)).collect::<Vec<_>>();
        let rows = prop::collection::vec(
            (row, prop::collection::vec(any::<bool>(), q), prop::collection::vec(any::<bool>(), schema.len())),
            n,
        );
        (Just(schema), Just(q), rows, Just(sparse)).prop_map(|(schema, q, rows, sparse)| {
            let instances = rows
                .into_iter()
                .map(|(values, labels, keep)| {
                    let features = if sparse {
                        FeatureRow::Sparse(
                            values
                                .into_iter()
                                .enumerate()
                                .filter(|(j, _)| keep[*j])
                                .map(|(j, v)| (j as u32, v))
                                .collect(),
                        )
                    } else {
                        FeatureRow::Dense(values)
                    };
                    let labels = LabelSet::from_indices(q, (0..q).filter(|&i| labels[i])).unwrap();
                    Instance { features, labels }
                })
                .collect();
            let names = (0..q).map(|i| format!("lab'{i}\"&")).collect();
            MultiLabelDataset::new("round trip", names, schema, instances).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mulan_round_trip_is_identity(d in dataset()) {
        let arff = to_arff(&d);
        let again = parse_mulan(&arff, &to_mulan_xml(&d)).map_err(|e| TestCaseError::fail(format!("{e}\n{arff}")))?;
        prop_assert_eq!(again, d);
    }

    #[test]
    fn meka_round_trip_is_identity(d in dataset()) {
        let arff = to_meka_arff(&d);
        let again = parse_meka(&arff).map_err(|e| TestCaseError::fail(format!("{e}\n{arff}")))?;
        prop_assert_eq!(again, d);
    }
}
