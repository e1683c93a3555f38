//! C interface to `mlbase`.
//!
//! Objects are handed out as opaque pointers and released with the matching
//! `*_free` function. Every fallible call returns an [`MlbStatus`]; on failure
//! [`mlb_last_error`] describes what went wrong on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mlbase::baseline::GeneralBModel;
use mlbase::metrics::{evaluate_all, BipartitionPair};
use mlbase::mldata::{parse_meka, parse_mulan, LabelSet};
use mlbase::registry::{self, BaselineTable};
use mlbase::{DatasetStats, Error, EvaluationReport, Measure, MultiLabelDataset, Protocol};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    IoError = 4,
    RegistryError = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlbMeasure {
    HammingLoss = 0,
    SubsetAccuracy = 1,
    Accuracy = 2,
    Precision = 3,
    Recall = 4,
    FMeasure = 5,
    MacroF1 = 6,
    MicroF1 = 7,
}

impl From<MlbMeasure> for Measure {
    fn from(m: MlbMeasure) -> Self {
        match m {
            MlbMeasure::HammingLoss => Measure::HammingLoss,
            MlbMeasure::SubsetAccuracy => Measure::SubsetAccuracy,
            MlbMeasure::Accuracy => Measure::Accuracy,
            MlbMeasure::Precision => Measure::Precision,
            MlbMeasure::Recall => Measure::Recall,
            MlbMeasure::FMeasure => Measure::FMeasure,
            MlbMeasure::MacroF1 => Measure::MacroF1,
            MlbMeasure::MicroF1 => Measure::MicroF1,
        }
    }
}

/// Summary statistics of a dataset.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MlbStats {
    pub num_instances: usize,
    pub num_features: usize,
    pub num_labels: usize,
    pub cardinality: f64,
    pub density: f64,
    pub distinct_labelsets: usize,
    pub freq_min: f64,
    pub freq_q1: f64,
    pub freq_median: f64,
    pub freq_q3: f64,
    pub freq_max: f64,
}

/// A parsed multi-label dataset.
pub struct MlbDataset {
    inner: MultiLabelDataset,
}

/// A fitted baseline model.
pub struct MlbModel {
    inner: GeneralBModel,
}

/// Values of the eight measures.
pub struct MlbReport {
    inner: EvaluationReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(MlbStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) => MlbStatus::ParseError,
            Error::Argument(_) => MlbStatus::InvalidArgument,
            Error::Registry(_) => MlbStatus::RegistryError,
            Error::Io { .. } => MlbStatus::IoError,
        };
        Failure(status, e.to_string())
    }
}

macro_rules! impl_failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Error::from(e).into()
            }
        }
    )*};
}

impl_failure_from!(mlbase::ParseError, mlbase::ArgumentError, mlbase::RegistryError);

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MlbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MlbStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            MlbStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(MlbStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(MlbStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

fn check_len(len: usize, expected: usize, what: &str) -> Result<(), Failure> {
    if len < expected {
        return Err(Failure(MlbStatus::InvalidArgument, format!("{what} holds {len} entries, {expected} needed")));
    }
    Ok(())
}

/// Message for the last failed call on this thread, or NULL after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn mlb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a Mulan dataset from ARFF and XML label header text.
///
/// # Safety
/// `arff` and `xml` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlb_dataset_parse_mulan(
    arff: *const c_char,
    xml: *const c_char,
    out: *mut *mut MlbDataset,
) -> MlbStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let inner = parse_mulan(text(arff, "arff")?, text(xml, "xml")?)?;
        *out = Box::into_raw(Box::new(MlbDataset { inner }));
        Ok(())
    })
}

/// Parses a MEKA dataset whose relation name carries `-C n`.
///
/// # Safety
/// `arff` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlb_dataset_parse_meka(arff: *const c_char, out: *mut *mut MlbDataset) -> MlbStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let inner = parse_meka(text(arff, "arff")?)?;
        *out = Box::into_raw(Box::new(MlbDataset { inner }));
        Ok(())
    })
}

/// Reads a dataset from disk. With a NULL `xml_path` the file is read as
/// MEKA.
///
/// # Safety
/// `arff_path` must be a NUL-terminated string, `xml_path` NULL or one;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlb_dataset_load(
    arff_path: *const c_char,
    xml_path: *const c_char,
    out: *mut *mut MlbDataset,
) -> MlbStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let read = |p: &str| std::fs::read_to_string(p).map_err(|source| Error::Io { path: p.to_string(), source });
        let arff = read(text(arff_path, "arff_path")?)?;
        let inner = if xml_path.is_null() {
            parse_meka(&arff)?
        } else {
            parse_mulan(&arff, &read(text(xml_path, "xml_path")?)?)?
        };
        *out = Box::into_raw(Box::new(MlbDataset { inner }));
        Ok(())
    })
}

/// # Safety
/// `d` must come from a `mlb_dataset_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mlb_dataset_free(d: *mut MlbDataset) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` must be a live dataset and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mlb_dataset_stats(d: *const MlbDataset, out: *mut MlbStats) -> MlbStatus {
    guard(|| {
        let d = deref(d, "dataset")?;
        let out = out_ptr(out, "out")?;
        let s = DatasetStats::compute(&d.inner);
        *out = MlbStats {
            num_instances: s.num_instances,
            num_features: s.num_features,
            num_labels: s.num_labels,
            cardinality: s.cardinality,
            density: s.density,
            distinct_labelsets: s.distinct_labelsets,
            freq_min: s.freq_summary.min,
            freq_q1: s.freq_summary.q1,
            freq_median: s.freq_summary.median,
            freq_q3: s.freq_summary.q3,
            freq_max: s.freq_summary.max,
        };
        Ok(())
    })
}

/// Writes the frequency of each label into `out[0..q]`.
///
/// # Safety
/// `d` must be a live dataset and `out` point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn mlb_dataset_label_frequencies(d: *const MlbDataset, out: *mut u64, len: usize) -> MlbStatus {
    guard(|| {
        let d = deref(d, "dataset")?;
        let freqs = mlbase::mldata::label_frequencies(&d.inner);
        check_len(len, freqs.len(), "out")?;
        slice_mut(out, len, "out")?[..freqs.len()].copy_from_slice(&freqs);
        Ok(())
    })
}

/// Fits the baseline on the whole dataset.
///
/// # Safety
/// `d` must be a live dataset and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mlb_model_fit(d: *const MlbDataset, out: *mut *mut MlbModel) -> MlbStatus {
    guard(|| {
        let d = deref(d, "dataset")?;
        let out = out_ptr(out, "out")?;
        let inner = mlbase::fit_general_b(&d.inner);
        *out = Box::into_raw(Box::new(MlbModel { inner }));
        Ok(())
    })
}

/// # Safety
/// `m` must come from `mlb_model_fit` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mlb_model_free(m: *mut MlbModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of labels the model predicts.
///
/// # Safety
/// `m` must be a live model and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mlb_model_sigma(m: *const MlbModel, out: *mut usize) -> MlbStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(m, "model")?.inner.sigma();
        Ok(())
    })
}

/// Writes the 0/1 indicator vector of the predicted labelset into
/// `out[0..q]`.
///
/// # Safety
/// `m` must be a live model and `out` point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn mlb_model_prediction(m: *const MlbModel, out: *mut u8, len: usize) -> MlbStatus {
    guard(|| {
        let m = &deref(m, "model")?.inner;
        check_len(len, m.q(), "out")?;
        let out = slice_mut(out, len, "out")?;
        for (i, slot) in out[..m.q()].iter_mut().enumerate() {
            *slot = u8::from(m.prediction().contains(i));
        }
        Ok(())
    })
}

/// Writes label indices, best ranked first, into `out[0..q]`.
///
/// # Safety
/// `m` must be a live model and `out` point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn mlb_model_ranking(m: *const MlbModel, out: *mut usize, len: usize) -> MlbStatus {
    guard(|| {
        let m = &deref(m, "model")?.inner;
        check_len(len, m.q(), "out")?;
        slice_mut(out, len, "out")?[..m.q()].copy_from_slice(m.ranked_labels());
        Ok(())
    })
}

/// Evaluates the baseline under `protocol` (`full`, `holdout:F` or `cv:K`).
///
/// # Safety
/// `d` must be a live dataset, `protocol` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mlb_evaluate_baseline(
    d: *const MlbDataset,
    protocol: *const c_char,
    seed: u64,
    out: *mut *mut MlbReport,
) -> MlbStatus {
    guard(|| {
        let d = deref(d, "dataset")?;
        let out = out_ptr(out, "out")?;
        let p: Protocol = text(protocol, "protocol")?.parse()?;
        let inner = mlbase::evaluate_baseline(&d.inner, &p.with_seed(seed))?;
        *out = Box::into_raw(Box::new(MlbReport { inner }));
        Ok(())
    })
}

/// Evaluates `n` predictions against ground truth. Both arrays are row-major
/// `n × q` 0/1 indicator matrices; any non-zero byte counts as 1.
///
/// # Safety
/// `truth` and `predicted` must each point to `n * q` readable bytes and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlb_evaluate(
    truth: *const u8,
    predicted: *const u8,
    n: usize,
    q: usize,
    out: *mut *mut MlbReport,
) -> MlbStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if truth.is_null() || predicted.is_null() {
            return Err(null("indicator matrix"));
        }
        let cells =
            n.checked_mul(q).ok_or_else(|| Failure(MlbStatus::InvalidArgument, "n * q overflows".to_string()))?;
        let rows = |p: *const u8| -> Result<Vec<LabelSet>, Failure> {
            let all = std::slice::from_raw_parts(p, cells);
            all.chunks(q.max(1))
                .take(n)
                .map(|row| {
                    LabelSet::from_indices(q, row.iter().enumerate().filter(|(_, &b)| b != 0).map(|(i, _)| i))
                        .map_err(Failure::from)
                })
                .collect()
        };
        if q == 0 {
            return Err(Failure(MlbStatus::InvalidArgument, "q must be positive".into()));
        }
        let (t, p) = (rows(truth)?, rows(predicted)?);
        let pairs = t.iter().zip(&p).map(|(a, b)| BipartitionPair::new(a, b)).collect::<Result<Vec<_>, _>>()?;
        let inner = evaluate_all(&pairs)?;
        *out = Box::into_raw(Box::new(MlbReport { inner }));
        Ok(())
    })
}

/// # Safety
/// `r` must be a live report and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mlb_report_value(r: *const MlbReport, measure: MlbMeasure, out: *mut f64) -> MlbStatus {
    guard(|| {
        let r = deref(r, "report")?;
        let out = out_ptr(out, "out")?;
        *out = r
            .inner
            .get(measure.into())
            .ok_or_else(|| Failure(MlbStatus::InvalidArgument, format!("report has no {}", Measure::from(measure))))?;
        Ok(())
    })
}

/// # Safety
/// `r` must come from an evaluation call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mlb_report_free(r: *mut MlbReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Compares published results (CSV `paper_id,dataset,measure,value,protocol,stddev`)
/// against baseline values (CSV `dataset,measure,value`) and returns the
/// Markdown report in `*out`, to be released with `mlb_string_free`.
///
/// # Safety
/// `results_csv` and `baselines_csv` must be NUL-terminated strings and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mlb_compare(
    results_csv: *const c_char,
    baselines_csv: *const c_char,
    out: *mut *mut c_char,
) -> MlbStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let results = registry::ingest_csv(text(results_csv, "results_csv")?)?;
        let baselines = BaselineTable::from_csv(text(baselines_csv, "baselines_csv")?)?;
        let summary = registry::compare(&results, &baselines)?;
        let dist = registry::distribution(&results, &baselines);
        let md = registry::render_markdown(&baselines, &summary, &dist);
        *out =
            CString::new(md).map_err(|_| Failure(MlbStatus::InvalidArgument, "report contains NUL".into()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mlb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
