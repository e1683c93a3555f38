//! `mlbase` command line.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 for data errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baseline::fit_general_b;
use crate::error::Error;
use crate::harness::{evaluate_baseline, Protocol};
use crate::metrics::{EvaluationReport, Measure};
use crate::mldata::{parse_auto, parse_meka, DatasetStats, MultiLabelDataset};
use crate::registry::{self, BaselineTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mlbase", version, about = "Multi-label baseline statistics, evaluation and comparison")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dataset statistics: size, cardinality, density, distinct labelsets and
    /// label frequency quartiles.
    Stats {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Fit the baseline on the whole dataset and print the model.
    Baseline {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Evaluate the baseline with all eight measures.
    Eval {
        #[command(flatten)]
        data: DatasetArgs,
        #[command(flatten)]
        protocol: ProtocolArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Count published results that are no better than the baseline.
    Compare {
        #[command(flatten)]
        sources: ComparisonArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Baseline, comparison and distribution tables in every format.
    Report {
        #[command(flatten)]
        sources: ComparisonArgs,
        /// Directory receiving report.md, report.json and the CSV tables.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Args, Debug, Default)]
struct DatasetArgs {
    /// ARFF file; repeat for several datasets.
    #[arg(long = "dataset", value_name = "PATH")]
    datasets: Vec<PathBuf>,
    /// Mulan XML label header, paired with --dataset in order. Defaults to
    /// the ARFF path with an .xml extension when that file exists.
    #[arg(long = "labels", value_name = "PATH")]
    labels: Vec<PathBuf>,
    /// Read labels from the MEKA `-C` relation option instead of XML.
    #[arg(long)]
    meka: bool,
    /// Dataset name, overriding the ARFF relation name.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args, Debug)]
struct ProtocolArgs {
    /// full, holdout:F or cv:K
    #[arg(long, default_value = "full")]
    protocol: Protocol,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ProtocolArgs {
    fn protocol(&self) -> Protocol {
        self.protocol.with_seed(self.seed)
    }
}

#[derive(Args, Debug)]
struct ComparisonArgs {
    /// Published results CSV.
    #[arg(long, value_name = "PATH")]
    results: PathBuf,
    /// Baseline values CSV (`dataset,measure,value`).
    #[arg(long, value_name = "PATH")]
    baselines: Option<PathBuf>,
    /// Datasets whose baseline is evaluated on the fly.
    #[command(flatten)]
    data: DatasetArgs,
    #[command(flatten)]
    protocol: ProtocolArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Data(e.into().to_string())
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(text) => match stdout.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "mlbase: cannot write output: {e}");
                EXIT_DATA
            }
        },
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "mlbase: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(stderr, "mlbase: {e}");
            EXIT_DATA
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn load_dataset(arff: &Path, labels: Option<&Path>, meka: bool) -> Result<MultiLabelDataset, Failure> {
    let text = read(arff)?;
    let with_path = |e: crate::error::ParseError| Failure::Data(format!("{}: {e}", arff.display()));
    if meka {
        return parse_meka(&text).map_err(with_path);
    }
    let default_xml = arff.with_extension("xml");
    let xml_path = match labels {
        Some(p) => Some(p.to_path_buf()),
        None => default_xml.is_file().then_some(default_xml),
    };
    let xml = xml_path.as_deref().map(read).transpose()?;
    parse_auto(&text, xml.as_deref()).map_err(with_path)
}

fn load_datasets(args: &DatasetArgs) -> Result<Vec<MultiLabelDataset>, Failure> {
    if args.labels.len() > args.datasets.len() {
        return Err(Failure::Usage(format!(
            "{} --labels given for {} --dataset",
            args.labels.len(),
            args.datasets.len()
        )));
    }
    if args.meka && !args.labels.is_empty() {
        return Err(Failure::Usage("--meka and --labels are mutually exclusive".into()));
    }
    if args.name.is_some() && args.datasets.len() > 1 {
        return Err(Failure::Usage("--name needs exactly one --dataset".into()));
    }
    args.datasets
        .iter()
        .enumerate()
        .map(|(i, path)| {
            let d = load_dataset(path, args.labels.get(i).map(PathBuf::as_path), args.meka)?;
            Ok(match &args.name {
                Some(n) => d.with_name(n.clone()),
                None => d,
            })
        })
        .collect()
}

fn require_datasets(args: &DatasetArgs) -> Result<Vec<MultiLabelDataset>, Failure> {
    if args.datasets.is_empty() {
        return Err(Failure::Usage("at least one --dataset is required".into()));
    }
    load_datasets(args)
}

fn json_text(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("json value serializes") + "\n"
}

fn execute(cmd: Command) -> Result<String, Failure> {
    match cmd {
        Command::Stats { data, format } => {
            let stats: Vec<DatasetStats> = require_datasets(&data)?.iter().map(DatasetStats::compute).collect();
            Ok(render_stats(&stats, format))
        }
        Command::Baseline { data, format } => {
            let models: Vec<_> = require_datasets(&data)?.iter().map(fit_general_b).collect();
            Ok(match format {
                Format::Json => json_text(&serde_json::Value::Array(models.iter().map(|m| m.to_json()).collect())),
                Format::Csv => {
                    let mut out = String::from("dataset,rank,label,predicted\n");
                    for m in &models {
                        for (rank, &l) in m.ranked_labels().iter().enumerate() {
                            let _ = writeln!(
                                out,
                                "{},{},{},{}",
                                crate::csv_field(m.dataset()),
                                rank + 1,
                                crate::csv_field(&m.label_names()[l]),
                                m.prediction().contains(l)
                            );
                        }
                    }
                    out
                }
                Format::Table => {
                    let mut out = String::new();
                    for m in &models {
                        let names = |it: &mut dyn Iterator<Item = usize>| {
                            it.map(|l| m.label_names()[l].as_str()).collect::<Vec<_>>().join(" ")
                        };
                        let _ = writeln!(out, "dataset: {}", m.dataset());
                        let _ = writeln!(out, "sigma: {}", m.sigma());
                        let _ = writeln!(out, "ranked: {}", names(&mut m.ranked_labels().iter().copied()));
                        let _ = writeln!(out, "prediction: {}", names(&mut m.prediction().iter()));
                    }
                    out
                }
            })
        }
        Command::Eval { data, protocol, format } => {
            let p = protocol.protocol();
            let mut rows = Vec::new();
            for d in require_datasets(&data)? {
                rows.push((d.name().to_string(), evaluate_baseline(&d, &p)?));
            }
            Ok(render_eval(&rows, &p, format))
        }
        Command::Compare { sources, format } => {
            let (results, baselines) = comparison_inputs(&sources)?;
            let summary = registry::compare(&results, &baselines)?;
            Ok(match format {
                Format::Table => {
                    let mut out = registry::summary_markdown(&summary);
                    let t = summary.total;
                    let pct = t.percentage().map_or_else(|| "—".to_string(), |p| format!("{p:.1}%"));
                    let _ = writeln!(
                        out,
                        "\n{} of {} results no better than the baseline ({pct})",
                        t.underperforming, t.total
                    );
                    out
                }
                Format::Csv => registry::summary_csv(&summary),
                Format::Json => json_text(&serde_json::to_value(&summary).expect("summary serializes")),
            })
        }
        Command::Report { sources, out, format } => {
            let (results, baselines) = comparison_inputs(&sources)?;
            let summary = registry::compare(&results, &baselines)?;
            let dist = registry::distribution(&results, &baselines);
            let bundle = registry::render_report(&baselines, &summary, &dist);
            if let Some(dir) = out {
                write_bundle(&dir, &bundle)?;
            }
            Ok(match format {
                Format::Table => bundle.markdown,
                Format::Json => bundle.json,
                Format::Csv => bundle.summary_csv,
            })
        }
    }
}

fn comparison_inputs(args: &ComparisonArgs) -> Result<(Vec<registry::PublishedResult>, BaselineTable), Failure> {
    let results = registry::ingest_csv(&read(&args.results)?)?;
    let mut baselines = match &args.baselines {
        Some(p) => BaselineTable::from_csv(&read(p)?)?,
        None => BaselineTable::new(),
    };
    let p = args.protocol.protocol();
    for d in load_datasets(&args.data)? {
        baselines.insert_report(d.name(), &evaluate_baseline(&d, &p)?);
    }
    Ok((results, baselines))
}

fn write_bundle(dir: &Path, b: &registry::ReportBundle) -> Result<(), Error> {
    let io = |path: &Path, source| Error::Io { path: path.display().to_string(), source };
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    for (name, text) in [
        ("report.md", &b.markdown),
        ("report.json", &b.json),
        ("baselines.csv", &b.baselines_csv),
        ("summary.csv", &b.summary_csv),
        ("distribution.csv", &b.distribution_csv),
    ] {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|e| io(&path, e))?;
    }
    Ok(())
}

fn render_stats(stats: &[DatasetStats], format: Format) -> String {
    match format {
        Format::Json => json_text(&serde_json::to_value(stats).expect("stats serialize")),
        Format::Csv | Format::Table => {
            let decimals = (format == Format::Table).then_some(3);
            let mut out = format!("{}\n", DatasetStats::CSV_HEADER);
            for s in stats {
                out.push_str(&s.csv_row(decimals));
                out.push('\n');
            }
            out
        }
    }
}

fn render_eval(rows: &[(String, EvaluationReport)], p: &Protocol, format: Format) -> String {
    match format {
        Format::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|(name, r)| {
                    let mut v = r.to_json(name);
                    v["protocol"] = serde_json::Value::String(p.to_string());
                    v["seed"] = serde_json::Value::from(p.seed);
                    v
                })
                .collect();
            json_text(&serde_json::Value::Array(items))
        }
        Format::Csv => {
            let mut out = format!("{}\n", EvaluationReport::CSV_HEADER);
            for (name, r) in rows {
                out.push_str(&r.to_csv_rows(name));
            }
            out
        }
        Format::Table => {
            let mut out = String::from("| Dataset |");
            for m in Measure::ALL {
                let _ = write!(out, " {m} |");
            }
            out.push('\n');
            out.push_str(&format!("|{}\n", "---|".repeat(Measure::ALL.len() + 1)));
            for (name, r) in rows {
                let _ = write!(out, "| {name} |");
                for m in Measure::ALL {
                    let v = r.get(m).expect("reports hold all measures");
                    let _ = write!(out, " {v:.4} |");
                }
                out.push('\n');
            }
            out
        }
    }
}
