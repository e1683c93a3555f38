//! Published measure values, their comparison against baseline values, and
//! summary tables.
//!
//! Dataset names are matched case-insensitively; they are stored trimmed and
//! lowercased.

mod report;

pub use report::{
    baselines_csv, baselines_markdown, distribution_csv, distribution_markdown, render_markdown, render_report,
    report_json, summary_csv, summary_markdown, ReportBundle,
};

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{RegistryError, RowError};
use crate::metrics::{Direction, EvaluationReport, Measure};
use crate::mldata::FiveNumberSummary;

/// Best/worst spread at or above which a distribution cell is flagged.
pub const GAP_THRESHOLD: f64 = 0.5;

const RESULTS_HEADER: [&str; 6] = ["paper_id", "dataset", "measure", "value", "protocol", "stddev"];
const BASELINES_HEADER: [&str; 3] = ["dataset", "measure", "value"];

pub(crate) fn dataset_key(name: &str) -> String {
    name.trim().to_lowercase()
}

/// One externally reported measure value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PublishedResult {
    pub paper_id: String,
    pub dataset: String,
    pub measure: Measure,
    pub value: f64,
    /// Free-form validation protocol, `unspecified` when not given.
    pub protocol: String,
    pub stddev: Option<f64>,
}

impl PublishedResult {
    pub fn has_stddev(&self) -> bool {
        self.stddev.is_some()
    }

    pub fn underperforms(&self, baseline: f64) -> bool {
        is_underperforming(self.value, baseline, self.measure.direction())
    }
}

/// True when `value` is worse than or equal to `baseline` in `direction`.
pub fn is_underperforming(value: f64, baseline: f64, direction: Direction) -> bool {
    direction.no_better(value, baseline)
}

fn read_csv<'a>(
    text: &'a str,
    expected: &[&str],
) -> Result<Option<csv::StringRecordsIntoIter<&'a [u8]>>, RegistryError> {
    if text.trim().is_empty() {
        return Ok(None);
    }
    let mut rdr =
        csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).comment(None).from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| RegistryError::Rows(vec![RowError { line: 1, message: e.to_string() }]))?;
    let got: Vec<String> = header.iter().map(str::to_ascii_lowercase).collect();
    if got != expected {
        return Err(RegistryError::Rows(vec![RowError {
            line: header.position().map_or(1, |p| p.line() as usize),
            message: format!("bad header `{}`, expected `{}`", got.join(","), expected.join(",")),
        }]));
    }
    Ok(Some(rdr.into_records()))
}

fn parse_unit(field: &str, what: &str) -> Result<f64, String> {
    let v: f64 = field.parse().map_err(|_| format!("{what} `{field}` is not a number"))?;
    if !(0.0..=1.0).contains(&v) {
        return Err(format!("{what} {v} outside [0, 1]"));
    }
    Ok(v)
}

/// Reads published results from CSV with header
/// `paper_id,dataset,measure,value,protocol,stddev`.
///
/// Empty input yields no results. Every invalid row is reported, each with
/// its line number.
pub fn ingest_csv(text: &str) -> Result<Vec<PublishedResult>, RegistryError> {
    let Some(records) = read_csv(text, &RESULTS_HEADER)? else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    let mut errors = Vec::new();
    for rec in records {
        let rec = match rec {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line() as usize);
                errors.push(RowError { line, message: e.to_string() });
                continue;
            }
        };
        let line = rec.position().map_or(0, |p| p.line() as usize);
        match result_from_record(&rec) {
            Ok(r) => out.push(r),
            Err(message) => errors.push(RowError { line, message }),
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(RegistryError::Rows(errors))
    }
}

fn result_from_record(rec: &csv::StringRecord) -> Result<PublishedResult, String> {
    if rec.len() != RESULTS_HEADER.len() {
        return Err(format!("expected {} fields, found {}", RESULTS_HEADER.len(), rec.len()));
    }
    let paper_id = rec[0].to_string();
    if paper_id.is_empty() {
        return Err("empty paper_id".into());
    }
    let dataset = dataset_key(&rec[1]);
    if dataset.is_empty() {
        return Err("empty dataset".into());
    }
    let measure: Measure = rec[2].parse().map_err(|e: crate::error::ArgumentError| e.0)?;
    let value = parse_unit(&rec[3], "value")?;
    let protocol = if rec[4].is_empty() { "unspecified".to_string() } else { rec[4].to_string() };
    let stddev = match &rec[5] {
        "" => None,
        s => {
            let v: f64 = s.parse().map_err(|_| format!("stddev `{s}` is not a number"))?;
            if !(v >= 0.0 && v.is_finite()) {
                return Err(format!("stddev {v} must be a non-negative number"));
            }
            Some(v)
        }
    };
    Ok(PublishedResult { paper_id, dataset, measure, value, protocol, stddev })
}

fn baseline_from_record(rec: &csv::StringRecord) -> Result<(String, Measure, f64), String> {
    if rec.len() != BASELINES_HEADER.len() {
        return Err(format!("expected 3 fields, found {}", rec.len()));
    }
    if rec[0].is_empty() {
        return Err("empty dataset".to_string());
    }
    let m: Measure = rec[1].parse().map_err(|e: crate::error::ArgumentError| e.0)?;
    Ok((rec[0].to_string(), m, parse_unit(&rec[2], "value")?))
}

/// Baseline value per (dataset, measure).
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BaselineTable {
    values: BTreeMap<String, BTreeMap<Measure, f64>>,
}

impl BaselineTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, dataset: &str, measure: Measure, value: f64) {
        self.values.entry(dataset_key(dataset)).or_default().insert(measure, value);
    }

    pub fn insert_report(&mut self, dataset: &str, report: &EvaluationReport) {
        for (m, v, _) in report.iter() {
            self.insert(dataset, m, v);
        }
    }

    pub fn get(&self, dataset: &str, measure: Measure) -> Option<f64> {
        self.values.get(&dataset_key(dataset)).and_then(|m| m.get(&measure).copied())
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn datasets(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    /// `(dataset, measure, value)` sorted by dataset then measure.
    pub fn iter(&self) -> impl Iterator<Item = (&str, Measure, f64)> {
        self.values.iter().flat_map(|(d, ms)| ms.iter().map(move |(&m, &v)| (d.as_str(), m, v)))
    }

    /// Reads `dataset,measure,value` CSV.
    pub fn from_csv(text: &str) -> Result<Self, RegistryError> {
        let mut table = BaselineTable::new();
        let Some(records) = read_csv(text, &BASELINES_HEADER)? else {
            return Ok(table);
        };
        let mut errors = Vec::new();
        for rec in records {
            let rec = match rec {
                Ok(r) => r,
                Err(e) => {
                    errors
                        .push(RowError { line: e.position().map_or(0, |p| p.line() as usize), message: e.to_string() });
                    continue;
                }
            };
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let parsed = baseline_from_record(&rec);
            match parsed {
                Ok((d, m, v)) => table.insert(&d, m, v),
                Err(message) => errors.push(RowError { line, message }),
            }
        }
        if errors.is_empty() {
            Ok(table)
        } else {
            Err(RegistryError::Rows(errors))
        }
    }
}

/// `#U` of `#M`: values no better than the baseline out of all values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Count {
    pub underperforming: usize,
    pub total: usize,
}

impl Count {
    /// `100·#U/#M`, undefined when nothing was recorded.
    pub fn percentage(&self) -> Option<f64> {
        (self.total > 0).then(|| 100.0 * self.underperforming as f64 / self.total as f64)
    }

    fn add(&mut self, underperforming: bool) {
        self.total += 1;
        self.underperforming += usize::from(underperforming);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellCount {
    pub dataset: String,
    pub measure: Measure,
    #[serde(flatten)]
    pub count: Count,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetCount {
    pub dataset: String,
    #[serde(flatten)]
    pub count: Count,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureCount {
    pub measure: Measure,
    #[serde(flatten)]
    pub count: Count,
}

/// Underperformance counts per cell with dataset (row) and measure
/// (column) totals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonSummary {
    /// Sorted by dataset, then measure.
    pub cells: Vec<CellCount>,
    /// Sorted by descending percentage, then dataset name.
    pub rows: Vec<DatasetCount>,
    /// All eight measures, in column order.
    pub columns: Vec<MeasureCount>,
    pub total: Count,
}

impl ComparisonSummary {
    pub fn cell(&self, dataset: &str, measure: Measure) -> Option<Count> {
        let key = dataset_key(dataset);
        self.cells.iter().find(|c| c.dataset == key && c.measure == measure).map(|c| c.count)
    }

    pub fn row(&self, dataset: &str) -> Option<Count> {
        let key = dataset_key(dataset);
        self.rows.iter().find(|r| r.dataset == key).map(|r| r.count)
    }

    pub fn column(&self, measure: Measure) -> Count {
        self.columns.iter().find(|c| c.measure == measure).map(|c| c.count).unwrap_or_default()
    }
}

/// Counts, for every (dataset, measure), the published values that are no
/// better than the baseline. Fails listing every result without a baseline.
pub fn compare(results: &[PublishedResult], baselines: &BaselineTable) -> Result<ComparisonSummary, RegistryError> {
    let orphans: BTreeSet<String> = results
        .iter()
        .filter(|r| baselines.get(&r.dataset, r.measure).is_none())
        .map(|r| format!("{}/{}/{}", r.paper_id, dataset_key(&r.dataset), r.measure))
        .collect();
    if !orphans.is_empty() {
        return Err(RegistryError::MissingBaseline(orphans.into_iter().collect()));
    }

    let mut cells: BTreeMap<(String, Measure), Count> = BTreeMap::new();
    let mut rows: BTreeMap<String, Count> = BTreeMap::new();
    let mut columns: BTreeMap<Measure, Count> = Measure::ALL.iter().map(|&m| (m, Count::default())).collect();
    let mut total = Count::default();
    for r in results {
        let key = dataset_key(&r.dataset);
        let baseline = baselines.get(&key, r.measure).expect("checked above");
        let under = r.underperforms(baseline);
        cells.entry((key.clone(), r.measure)).or_default().add(under);
        rows.entry(key).or_default().add(under);
        columns.get_mut(&r.measure).expect("all measures present").add(under);
        total.add(under);
    }

    let mut rows: Vec<DatasetCount> =
        rows.into_iter().map(|(dataset, count)| DatasetCount { dataset, count }).collect();
    // exact ordering on U/M via cross-multiplication; stable sort keeps name order on ties
    rows.sort_by(|a, b| {
        let lhs = b.count.underperforming * a.count.total;
        let rhs = a.count.underperforming * b.count.total;
        lhs.cmp(&rhs)
    });

    Ok(ComparisonSummary {
        cells: cells.into_iter().map(|((dataset, measure), count)| CellCount { dataset, measure, count }).collect(),
        rows,
        columns: columns.into_iter().map(|(measure, count)| MeasureCount { measure, count }).collect(),
        total,
    })
}

/// Spread of the published values of one (dataset, measure).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionCell {
    pub dataset: String,
    pub measure: Measure,
    pub count: usize,
    #[serde(flatten)]
    pub summary: FiveNumberSummary,
    pub best: f64,
    pub worst: f64,
    pub baseline: Option<f64>,
    /// `best − worst ≥ GAP_THRESHOLD`
    pub gap: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MeasureDistribution {
    /// Sorted by dataset, then measure. Cells without values are omitted.
    pub cells: Vec<DistributionCell>,
}

impl MeasureDistribution {
    pub fn cell(&self, dataset: &str, measure: Measure) -> Option<&DistributionCell> {
        let key = dataset_key(dataset);
        self.cells.iter().find(|c| c.dataset == key && c.measure == measure)
    }
}

pub fn distribution(results: &[PublishedResult], baselines: &BaselineTable) -> MeasureDistribution {
    let mut groups: BTreeMap<(String, Measure), Vec<f64>> = BTreeMap::new();
    for r in results {
        groups.entry((dataset_key(&r.dataset), r.measure)).or_default().push(r.value);
    }
    let cells = groups
        .into_iter()
        .filter_map(|((dataset, measure), values)| {
            let summary = FiveNumberSummary::from_values(&values).ok()?;
            let (best, worst) = match measure.direction() {
                Direction::Higher => (summary.max, summary.min),
                Direction::Lower => (summary.min, summary.max),
            };
            // values are usually printed to two decimals; keep 0.99 - 0.49 flagged
            let gap = (best - worst).abs() >= GAP_THRESHOLD - 1e-9;
            Some(DistributionCell {
                baseline: baselines.get(&dataset, measure),
                dataset,
                measure,
                count: values.len(),
                summary,
                best,
                worst,
                gap,
            })
        })
        .collect();
    MeasureDistribution { cells }
}
