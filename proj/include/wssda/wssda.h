// include/wssda/wssda.h

// Copyright 2026  The WSSDA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

/* C interface to the WSSDA library: opaque handles, status codes, and a
 * thread-local message for the most recent failure.
 *
 * Every function returning wssda_status leaves its output arguments untouched
 * on failure. Handles returned through `out` arguments are owned by the caller
 * and released with the matching *_free function (which accepts NULL).
 */

#ifndef WSSDA_H_
#define WSSDA_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(WSSDA_BUILDING_LIBRARY)
#    define WSSDA_API __declspec(dllexport)
#  else
#    define WSSDA_API __declspec(dllimport)
#  endif
#else
#  define WSSDA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wssda_status {
  WSSDA_OK = 0,
  WSSDA_ERR_FORMAT = 1,
  WSSDA_ERR_PARSE = 2,
  WSSDA_ERR_DIMENSION = 3,
  WSSDA_ERR_PROTOCOL = 4,
  WSSDA_ERR_CONTRACT = 5,
  WSSDA_ERR_CONFIG = 6,
  WSSDA_ERR_PARTITION = 7,
  WSSDA_ERR_SPECTRUM_TOO_SHORT = 8,
  WSSDA_ERR_DEGENERATE_MODEL = 9,
  WSSDA_ERR_PIVOT_AT_NULL = 10,
  WSSDA_ERR_TRAINING = 11,
  WSSDA_ERR_MODEL_FORMAT = 12,
  WSSDA_ERR_UNSUPPORTED_VERSION = 13,
  WSSDA_ERR_IO = 14,
  WSSDA_ERR_INVALID_ARGUMENT = 98,
  WSSDA_ERR_UNKNOWN = 99
} wssda_status;

typedef enum wssda_strategy {
  WSSDA_STRATEGY_KD = 0,
  WSSDA_STRATEGY_RP = 1,
  WSSDA_STRATEGY_PCA = 2,
  WSSDA_STRATEGY_KMEANS = 3,
  WSSDA_STRATEGY_PROVIDED = 4
} wssda_strategy;

typedef enum wssda_mode {
  WSSDA_MODE_REGULARIZED = 0,
  WSSDA_MODE_TRUNCATED = 1
} wssda_mode;

typedef enum wssda_second_stage {
  WSSDA_STAGE_TOTAL_SUBCLASS = 0,
  WSSDA_STAGE_BETWEEN_SUBCLASS = 1
} wssda_second_stage;

typedef struct wssda_dataset wssda_dataset;
typedef struct wssda_partition wssda_partition;
typedef struct wssda_model wssda_model;
typedef struct wssda_pairs wssda_pairs;
typedef struct wssda_id_report wssda_id_report;
typedef struct wssda_verify_report wssda_verify_report;

typedef struct wssda_synth_spec {
  int class_count;
  int subclasses_per_class;
  int samples_per_subclass;
  int dim;
  double class_spread;
  double subclass_mean_spread;
  double scale_min;
  double scale_max;
  uint64_t seed;
} wssda_synth_spec;

typedef struct wssda_train_config {
  int d;
  double med_factor;
  wssda_mode mode;
  wssda_second_stage second_stage;
  int allow_flat_fallback;
} wssda_train_config;

WSSDA_API const char *wssda_version(void);
/* Message of the last failed call on this thread ("" if none). */
WSSDA_API const char *wssda_last_error(void);
WSSDA_API const char *wssda_status_name(wssda_status status);

WSSDA_API void wssda_synth_spec_default(wssda_synth_spec *spec);
WSSDA_API void wssda_train_config_default(wssda_train_config *config);

/* Datasets */
WSSDA_API wssda_status wssda_dataset_load_csv(const char *path, int has_subclass_column,
                                              wssda_dataset **out);
WSSDA_API wssda_status wssda_dataset_load_pgm_dir(const char *path, wssda_dataset **out);
WSSDA_API wssda_status wssda_dataset_generate(const wssda_synth_spec *spec,
                                              wssda_dataset **out);
/* Keeps the first `per_class` samples of every class. */
WSSDA_API wssda_status wssda_dataset_first_k(const wssda_dataset *ds, int per_class,
                                             wssda_dataset **out);
WSSDA_API wssda_status wssda_dataset_save_csv(const wssda_dataset *ds, const char *path);
WSSDA_API wssda_status wssda_dataset_info(const wssda_dataset *ds, size_t *samples,
                                          size_t *dim, size_t *classes, int *has_subclass);
WSSDA_API wssda_status wssda_dataset_row(const wssda_dataset *ds, size_t index,
                                         double *values, size_t dim, int *class_label);
WSSDA_API void wssda_dataset_free(wssda_dataset *ds);

/* Subclass partitions */
WSSDA_API wssda_status wssda_partition_compute(const wssda_dataset *ds,
                                               wssda_strategy strategy, int h,
                                               int max_depth, uint64_t seed,
                                               wssda_partition **out);
WSSDA_API wssda_status wssda_partition_info(const wssda_partition *part,
                                            size_t *total_subclasses,
                                            size_t *deficient_classes);
WSSDA_API wssda_status wssda_partition_subclass(const wssda_partition *part,
                                                size_t sample, int *subclass);
/* CSV `sample,class,subclass`. */
WSSDA_API wssda_status wssda_partition_save_csv(const wssda_partition *part,
                                                const char *path);
WSSDA_API void wssda_partition_free(wssda_partition *part);

/* Training and models */
WSSDA_API wssda_status wssda_train(const wssda_dataset *ds, const wssda_partition *part,
                                   const wssda_train_config *config, wssda_model **out);
WSSDA_API wssda_status wssda_model_save(const wssda_model *model, const char *path);
/* CSV `k,lambda,lambda_reg,weight`; only models produced by wssda_train
 * carry the spectrum. */
WSSDA_API wssda_status wssda_model_save_spectrum_csv(const wssda_model *model,
                                                     const char *path);
WSSDA_API wssda_status wssda_model_load(const char *path, wssda_model **out);
WSSDA_API wssda_status wssda_model_info(const wssda_model *model, size_t *dim,
                                        size_t *features, wssda_mode *mode,
                                        wssda_strategy *strategy, int *h);
/* z = U^T x; `features` may be smaller than the model's feature count, in
 * which case the leading entries are returned. */
WSSDA_API wssda_status wssda_model_extract(const wssda_model *model, const double *x,
                                           size_t dim, double *z, size_t features);
WSSDA_API void wssda_model_free(wssda_model *model);

/* Identification: exactly one of `gallery_rotations` (rotating single-image
 * galleries) and `gallery_first_k` (first k samples per class) is positive. */
WSSDA_API wssda_status wssda_eval_identification(const wssda_model *model,
                                                 const wssda_dataset *ds,
                                                 int gallery_rotations,
                                                 int gallery_first_k,
                                                 const int *d_values, size_t count,
                                                 wssda_id_report **out);
WSSDA_API wssda_status wssda_id_report_error(const wssda_id_report *report, size_t index,
                                             int *d, double *error);
/* CSV `d,error`. */
WSSDA_API wssda_status wssda_id_report_save_csv(const wssda_id_report *report,
                                                const char *path);
WSSDA_API void wssda_id_report_free(wssda_id_report *report);

/* Verification */
WSSDA_API wssda_status wssda_pairs_load_csv(const char *path, wssda_pairs **out);
WSSDA_API wssda_status wssda_pairs_count(const wssda_pairs *pairs, size_t *count);
WSSDA_API void wssda_pairs_free(wssda_pairs *pairs);
WSSDA_API wssda_status wssda_eval_verification(const wssda_model *model,
                                               const wssda_dataset *ds,
                                               const wssda_pairs *pairs, int folds,
                                               int grid_points,
                                               wssda_verify_report **out);
WSSDA_API wssda_status wssda_verify_report_summary(const wssda_verify_report *report,
                                                   double *mean_eer, double *std_eer,
                                                   size_t *folds);
WSSDA_API wssda_status wssda_verify_report_fold_eer(const wssda_verify_report *report,
                                                    size_t fold, double *eer);
/* CSV `far,tar` of the fold-averaged ROC. */
WSSDA_API wssda_status wssda_verify_report_save_roc_csv(const wssda_verify_report *report,
                                                        const char *path);
/* CSV `fold,eer,eer_percent` plus mean and std rows. */
WSSDA_API wssda_status wssda_verify_report_save_eer_csv(const wssda_verify_report *report,
                                                        const char *path);
WSSDA_API void wssda_verify_report_free(wssda_verify_report *report);

#ifdef __cplusplus
}
#endif

#endif /* WSSDA_H_ */
