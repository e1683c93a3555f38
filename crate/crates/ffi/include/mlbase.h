#ifndef MLBASE_H
#define MLBASE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum MlbStatus {
  MLB_STATUS_OK = 0,
  MLB_STATUS_NULL_POINTER = 1,
  MLB_STATUS_INVALID_ARGUMENT = 2,
  MLB_STATUS_PARSE_ERROR = 3,
  MLB_STATUS_IO_ERROR = 4,
  MLB_STATUS_REGISTRY_ERROR = 5,
  MLB_STATUS_PANIC = 6,
} MlbStatus;

typedef enum MlbMeasure {
  MLB_MEASURE_HAMMING_LOSS = 0,
  MLB_MEASURE_SUBSET_ACCURACY = 1,
  MLB_MEASURE_ACCURACY = 2,
  MLB_MEASURE_PRECISION = 3,
  MLB_MEASURE_RECALL = 4,
  MLB_MEASURE_F_MEASURE = 5,
  MLB_MEASURE_MACRO_F1 = 6,
  MLB_MEASURE_MICRO_F1 = 7,
} MlbMeasure;

/**
 * A parsed multi-label dataset.
 */
typedef struct MlbDataset MlbDataset;

/**
 * A fitted baseline model.
 */
typedef struct MlbModel MlbModel;

/**
 * Values of the eight measures.
 */
typedef struct MlbReport MlbReport;

/**
 * Summary statistics of a dataset.
 */
typedef struct MlbStats {
  size_t num_instances;
  size_t num_features;
  size_t num_labels;
  double cardinality;
  double density;
  size_t distinct_labelsets;
  double freq_min;
  double freq_q1;
  double freq_median;
  double freq_q3;
  double freq_max;
} MlbStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL after a
 * successful call. Valid until the next call on the same thread.
 */
const char *mlb_last_error(void);

/**
 * Parses a Mulan dataset from ARFF and XML label header text.
 *
 * # Safety
 * `arff` and `xml` must be NUL-terminated strings; `out` must be writable.
 */
enum MlbStatus mlb_dataset_parse_mulan(const char *arff, const char *xml, struct MlbDataset **out);

/**
 * Parses a MEKA dataset whose relation name carries `-C n`.
 *
 * # Safety
 * `arff` must be a NUL-terminated string; `out` must be writable.
 */
enum MlbStatus mlb_dataset_parse_meka(const char *arff, struct MlbDataset **out);

/**
 * Reads a dataset from disk. With a NULL `xml_path` the file is read as
 * MEKA.
 *
 * # Safety
 * `arff_path` must be a NUL-terminated string, `xml_path` NULL or one;
 * `out` must be writable.
 */
enum MlbStatus mlb_dataset_load(const char *arff_path,
                                const char *xml_path,
                                struct MlbDataset **out);

/**
 * # Safety
 * `d` must come from a `mlb_dataset_*` constructor and not be freed twice.
 */
void mlb_dataset_free(struct MlbDataset *d);

/**
 * # Safety
 * `d` must be a live dataset and `out` writable.
 */
enum MlbStatus mlb_dataset_stats(const struct MlbDataset *d, struct MlbStats *out);

/**
 * Writes the frequency of each label into `out[0..q]`.
 *
 * # Safety
 * `d` must be a live dataset and `out` point to `len` writable values.
 */
enum MlbStatus mlb_dataset_label_frequencies(const struct MlbDataset *d, uint64_t *out, size_t len);

/**
 * Fits the baseline on the whole dataset.
 *
 * # Safety
 * `d` must be a live dataset and `out` writable.
 */
enum MlbStatus mlb_model_fit(const struct MlbDataset *d, struct MlbModel **out);

/**
 * # Safety
 * `m` must come from `mlb_model_fit` and not be freed twice.
 */
void mlb_model_free(struct MlbModel *m);

/**
 * Number of labels the model predicts.
 *
 * # Safety
 * `m` must be a live model and `out` writable.
 */
enum MlbStatus mlb_model_sigma(const struct MlbModel *m, size_t *out);

/**
 * Writes the 0/1 indicator vector of the predicted labelset into
 * `out[0..q]`.
 *
 * # Safety
 * `m` must be a live model and `out` point to `len` writable bytes.
 */
enum MlbStatus mlb_model_prediction(const struct MlbModel *m, uint8_t *out, size_t len);

/**
 * Writes label indices, best ranked first, into `out[0..q]`.
 *
 * # Safety
 * `m` must be a live model and `out` point to `len` writable values.
 */
enum MlbStatus mlb_model_ranking(const struct MlbModel *m, size_t *out, size_t len);

/**
 * Evaluates the baseline under `protocol` (`full`, `holdout:F` or `cv:K`).
 *
 * # Safety
 * `d` must be a live dataset, `protocol` a NUL-terminated string and `out`
 * writable.
 */
enum MlbStatus mlb_evaluate_baseline(const struct MlbDataset *d,
                                     const char *protocol,
                                     uint64_t seed,
                                     struct MlbReport **out);

/**
 * Evaluates `n` predictions against ground truth. Both arrays are row-major
 * `n × q` 0/1 indicator matrices; any non-zero byte counts as 1.
 *
 * # Safety
 * `truth` and `predicted` must each point to `n * q` readable bytes and
 * `out` must be writable.
 */
enum MlbStatus mlb_evaluate(const uint8_t *truth,
                            const uint8_t *predicted,
                            size_t n,
                            size_t q,
                            struct MlbReport **out);

/**
 * # Safety
 * `r` must be a live report and `out` writable.
 */
enum MlbStatus mlb_report_value(const struct MlbReport *r, enum MlbMeasure measure, double *out);

/**
 * # Safety
 * `r` must come from an evaluation call and not be freed twice.
 */
void mlb_report_free(struct MlbReport *r);

/**
 * Compares published results (CSV `paper_id,dataset,measure,value,protocol,stddev`)
 * against baseline values (CSV `dataset,measure,value`) and returns the
 * Markdown report in `*out`, to be released with `mlb_string_free`.
 *
 * # Safety
 * `results_csv` and `baselines_csv` must be NUL-terminated strings and
 * `out` writable.
 */
enum MlbStatus mlb_compare(const char *results_csv, const char *baselines_csv, char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void mlb_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MLBASE_H */
