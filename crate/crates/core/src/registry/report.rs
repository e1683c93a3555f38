//! Markdown, CSV and JSON renderings of the comparison tables.

use std::fmt::Write as _;

use serde::Serialize;

use super::{BaselineTable, ComparisonSummary, Count, MeasureDistribution};
use crate::csv_field;
use crate::metrics::Measure;

const UNDEFINED: &str = "—";

fn percent(c: Count) -> String {
    c.percentage().map_or_else(|| UNDEFINED.to_string(), |p| format!("{p:.1}"))
}

fn percent_csv(c: Count) -> String {
    c.percentage().map_or_else(String::new, |p| format!("{p:.1}"))
}

fn table_row(cells: &[String]) -> String {
    format!("| {} |\n", cells.join(" | "))
}

fn separator(n: usize) -> String {
    format!("|{}\n", "---|".repeat(n))
}

fn baseline_section(out: &mut String, baselines: &BaselineTable) {
    out.push_str("## Baseline\n\n");
    let mut header = vec!["Dataset".to_string()];
    header.extend(Measure::ALL.iter().map(|m| m.to_string()));
    out.push_str(&table_row(&header));
    out.push_str(&separator(header.len()));
    for d in baselines.datasets() {
        let mut row = vec![d.to_string()];
        row.extend(
            Measure::ALL
                .iter()
                .map(|&m| baselines.get(d, m).map_or_else(|| UNDEFINED.to_string(), |v| format!("{v:.4}"))),
        );
        out.push_str(&table_row(&row));
    }
}

fn summary_section(out: &mut String, summary: &ComparisonSummary) {
    out.push_str("## Results no better than the baseline\n\n");
    let mut header = vec!["Dataset".to_string()];
    header.extend(Measure::ALL.iter().map(|m| m.to_string()));
    header.extend(["#U".to_string(), "#M".to_string(), "%".to_string()]);
    out.push_str(&table_row(&header));
    out.push_str(&separator(header.len()));
    if summary.rows.is_empty() {
        return;
    }
    for r in &summary.rows {
        let mut row = vec![r.dataset.clone()];
        row.extend(Measure::ALL.iter().map(|&m| match summary.cell(&r.dataset, m) {
            Some(c) => c.underperforming.to_string(),
            None => UNDEFINED.to_string(),
        }));
        row.extend([r.count.underperforming.to_string(), r.count.total.to_string(), percent(r.count)]);
        out.push_str(&table_row(&row));
    }
    let total = summary.total;
    let mut u = vec!["#U".to_string()];
    let mut m = vec!["#M".to_string()];
    let mut p = vec!["%".to_string()];
    for c in &summary.columns {
        u.push(c.count.underperforming.to_string());
        m.push(c.count.total.to_string());
        p.push(percent(c.count));
    }
    u.extend([total.underperforming.to_string(), String::new(), String::new()]);
    m.extend([String::new(), total.total.to_string(), String::new()]);
    p.extend([String::new(), String::new(), percent(total)]);
    for row in [u, m, p] {
        out.push_str(&table_row(&row));
    }
}

fn distribution_section(out: &mut String, dist: &MeasureDistribution) {
    out.push_str("## Distribution of published values\n\n");
    let header: Vec<String> =
        ["Dataset", "Measure", "n", "Min", "1Q", "Med", "3Q", "Max", "Best", "Worst", "Baseline", "Gap"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    out.push_str(&table_row(&header));
    out.push_str(&separator(header.len()));
    for c in &dist.cells {
        let f = |x: f64| format!("{x:.3}");
        let s = &c.summary;
        let row = vec![
            c.dataset.clone(),
            c.measure.to_string(),
            c.count.to_string(),
            f(s.min),
            f(s.q1),
            f(s.median),
            f(s.q3),
            f(s.max),
            f(c.best),
            f(c.worst),
            c.baseline.map_or_else(|| UNDEFINED.to_string(), f),
            if c.gap { "**gap**".to_string() } else { String::new() },
        ];
        out.push_str(&table_row(&row));
    }
}

pub fn baselines_markdown(baselines: &BaselineTable) -> String {
    let mut out = String::new();
    baseline_section(&mut out, baselines);
    out
}

/// Underperformance table with dataset rows and measure totals.
pub fn summary_markdown(summary: &ComparisonSummary) -> String {
    let mut out = String::new();
    summary_section(&mut out, summary);
    out
}

pub fn distribution_markdown(dist: &MeasureDistribution) -> String {
    let mut out = String::new();
    distribution_section(&mut out, dist);
    out
}

/// Baseline, underperformance and distribution tables as Markdown.
pub fn render_markdown(baselines: &BaselineTable, summary: &ComparisonSummary, dist: &MeasureDistribution) -> String {
    let mut out = String::from("# Baseline comparison\n\n");
    baseline_section(&mut out, baselines);
    out.push('\n');
    summary_section(&mut out, summary);
    out.push('\n');
    distribution_section(&mut out, dist);
    out
}

pub fn baselines_csv(baselines: &BaselineTable) -> String {
    let mut out = String::from("dataset,measure,value,direction\n");
    for (d, m, v) in baselines.iter() {
        let _ = writeln!(out, "{},{m},{v},{}", csv_field(d), m.direction());
    }
    out
}

/// One row per (dataset, measure) cell, then `*` rows for the dataset and
/// measure totals and the grand total.
pub fn summary_csv(summary: &ComparisonSummary) -> String {
    let mut out = String::from("dataset,measure,underperforming,total,percentage\n");
    let mut line = |d: &str, m: &str, c: Count| {
        let _ = writeln!(out, "{},{m},{},{},{}", csv_field(d), c.underperforming, c.total, percent_csv(c));
    };
    for c in &summary.cells {
        line(&c.dataset, c.measure.id(), c.count);
    }
    for r in &summary.rows {
        line(&r.dataset, "*", r.count);
    }
    for c in &summary.columns {
        line("*", c.measure.id(), c.count);
    }
    line("*", "*", summary.total);
    out
}

pub fn distribution_csv(dist: &MeasureDistribution) -> String {
    let mut out = String::from("dataset,measure,count,min,q1,median,q3,max,best,worst,baseline,gap\n");
    for c in &dist.cells {
        let s = &c.summary;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&c.dataset),
            c.measure,
            c.count,
            s.min,
            s.q1,
            s.median,
            s.q3,
            s.max,
            c.best,
            c.worst,
            c.baseline.map_or_else(String::new, |b| b.to_string()),
            c.gap
        );
    }
    out
}

#[derive(Serialize)]
struct BaselineEntry<'a> {
    dataset: &'a str,
    measure: Measure,
    value: f64,
    direction: crate::metrics::Direction,
}

pub fn report_json(
    baselines: &BaselineTable,
    summary: &ComparisonSummary,
    dist: &MeasureDistribution,
) -> serde_json::Value {
    let entries: Vec<BaselineEntry<'_>> = baselines
        .iter()
        .map(|(dataset, measure, value)| BaselineEntry { dataset, measure, value, direction: measure.direction() })
        .collect();
    serde_json::json!({
        "baselines": entries,
        "comparison": summary,
        "distribution": dist.cells,
    })
}

/// Every rendering of one comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub markdown: String,
    pub baselines_csv: String,
    pub summary_csv: String,
    pub distribution_csv: String,
    pub json: String,
}

pub fn render_report(
    baselines: &BaselineTable,
    summary: &ComparisonSummary,
    dist: &MeasureDistribution,
) -> ReportBundle {
    let json = serde_json::to_string_pretty(&report_json(baselines, summary, dist)).expect("report serializes");
    ReportBundle {
        markdown: render_markdown(baselines, summary, dist),
        baselines_csv: baselines_csv(baselines),
        summary_csv: summary_csv(summary),
        distribution_csv: distribution_csv(dist),
        json: json + "\n",
    }
}
