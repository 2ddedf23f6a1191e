// src/c_api.cpp

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

#include "wssda/wssda.h"

#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "wssda/dataset.hpp"
#include "wssda/error.hpp"
#include "wssda/eval.hpp"
#include "wssda/extractor.hpp"
#include "wssda/partition.hpp"
#include "wssda/spectrum.hpp"

struct wssda_dataset {
  wssda::LabeledDataset ds;
};

struct wssda_partition {
  wssda::SubclassPartition part;
};

struct wssda_model {
  wssda::FeatureExtractor fx;
  // Present only for freshly trained models.
  std::optional<wssda::Eigenspectrum> spectrum;
  std::optional<wssda::SpectrumModel> spectrum_model;
};

struct wssda_pairs {
  std::vector<wssda::LabeledPair> pairs;
};

struct wssda_id_report {
  wssda::IdentificationReport report;
};

struct wssda_verify_report {
  wssda::KFoldReport report;
};

namespace {

thread_local std::string g_last_error;

wssda_status Invalid(const char *what) {
  g_last_error = what;
  return WSSDA_ERR_INVALID_ARGUMENT;
}

template <class F>
wssda_status Guard(F &&body) {
  try {
    body();
    g_last_error.clear();
    return WSSDA_OK;
  } catch (const wssda::Error &e) {
    g_last_error = e.what();
    return static_cast<wssda_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc &) {
    g_last_error = "out of memory";
  } catch (const std::exception &e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return WSSDA_ERR_UNKNOWN;
}

}  // namespace

extern "C" {

const char *wssda_version(void) { return "1.0.0"; }

const char *wssda_last_error(void) { return g_last_error.c_str(); }

const char *wssda_status_name(wssda_status status) {
  switch (status) {
    case WSSDA_OK: return "ok";
    case WSSDA_ERR_INVALID_ARGUMENT: return "invalid argument";
    case WSSDA_ERR_UNKNOWN: return "unknown error";
    default: break;
  }
  if (status >= WSSDA_ERR_FORMAT && status <= WSSDA_ERR_IO)
    return wssda::ErrorCodeName(static_cast<wssda::ErrorCode>(status));
  return "unknown error";
}

void wssda_synth_spec_default(wssda_synth_spec *spec) {
  if (!spec) return;
  wssda::SynthSpec s;
  *spec = {s.class_count, s.subclasses_per_class, s.samples_per_subclass, s.dim,
           s.class_spread, s.subclass_mean_spread, s.scale_min, s.scale_max, s.seed};
}

void wssda_train_config_default(wssda_train_config *config) {
  if (!config) return;
  wssda::TrainConfig c;
  *config = {c.d, c.med_factor, WSSDA_MODE_REGULARIZED, WSSDA_STAGE_TOTAL_SUBCLASS,
             c.allow_flat_fallback ? 1 : 0};
}

wssda_status wssda_dataset_load_csv(const char *path, int has_subclass_column,
                                    wssda_dataset **out) {
  if (!path || !out) return Invalid("null argument");
  return Guard([&] {
    *out = new wssda_dataset{wssda::load_csv(path, has_subclass_column != 0)};
  });
}

wssda_status wssda_dataset_load_pgm_dir(const char *path, wssda_dataset **out) {
  if (!path || !out) return Invalid("null argument");
  return Guard([&] { *out = new wssda_dataset{wssda::load_pgm_dir(path)}; });
}

wssda_status wssda_dataset_generate(const wssda_synth_spec *spec, wssda_dataset **out) {
  if (!spec || !out) return Invalid("null argument");
  return Guard([&] {
    wssda::SynthSpec s;
    s.class_count = spec->class_count;
    s.subclasses_per_class = spec->subclasses_per_class;
    s.samples_per_subclass = spec->samples_per_subclass;
    s.dim = spec->dim;
    s.class_spread = spec->class_spread;
    s.subclass_mean_spread = spec->subclass_mean_spread;
    s.scale_min = spec->scale_min;
    s.scale_max = spec->scale_max;
    s.seed = spec->seed;
    *out = new wssda_dataset{wssda::generate_synthetic(s)};
  });
}

wssda_status wssda_dataset_first_k(const wssda_dataset *ds, int per_class,
                                   wssda_dataset **out) {
  if (!ds || !out) return Invalid("null argument");
  return Guard([&] {
    wssda::SplitSpec split = wssda::make_first_k_split(ds->ds, per_class);
    *out = new wssda_dataset{ds->ds.subset(split.gallery)};
  });
}

wssda_status wssda_dataset_save_csv(const wssda_dataset *ds, const char *path) {
  if (!ds || !path) return Invalid("null argument");
  return Guard([&] { wssda::save_csv(ds->ds, path); });
}

wssda_status wssda_dataset_info(const wssda_dataset *ds, size_t *samples, size_t *dim,
                                size_t *classes, int *has_subclass) {
  if (!ds) return Invalid("null dataset");
  if (samples) *samples = static_cast<size_t>(ds->ds.size());
  if (dim) *dim = static_cast<size_t>(ds->ds.dim());
  if (classes) *classes = static_cast<size_t>(ds->ds.class_count());
  if (has_subclass) *has_subclass = ds->ds.has_subclass_labels() ? 1 : 0;
  return WSSDA_OK;
}

wssda_status wssda_dataset_row(const wssda_dataset *ds, size_t index, double *values,
                               size_t dim, int *class_label) {
  if (!ds) return Invalid("null dataset");
  if (index >= static_cast<size_t>(ds->ds.size())) return Invalid("row index out of range");
  if (values) {
    if (dim != static_cast<size_t>(ds->ds.dim())) return Invalid("buffer size mismatch");
    for (size_t k = 0; k < dim; ++k)
      values[k] = ds->ds.samples()(static_cast<Eigen::Index>(index),
                                   static_cast<Eigen::Index>(k));
  }
  if (class_label) *class_label = ds->ds.class_labels()[index];
  return WSSDA_OK;
}

void wssda_dataset_free(wssda_dataset *ds) { delete ds; }

wssda_status wssda_partition_compute(const wssda_dataset *ds, wssda_strategy strategy,
                                     int h, int max_depth, uint64_t seed,
                                     wssda_partition **out) {
  if (!ds || !out) return Invalid("null argument");
  if (strategy < WSSDA_STRATEGY_KD || strategy > WSSDA_STRATEGY_PROVIDED)
    return Invalid("unknown strategy");
  return Guard([&] {
    wssda::TreeParams params{h, max_depth, seed};
    *out = new wssda_partition{wssda::partition_dataset(
        ds->ds, params, static_cast<wssda::PartitionStrategy>(strategy))};
  });
}

wssda_status wssda_partition_info(const wssda_partition *part, size_t *total_subclasses,
                                  size_t *deficient_classes) {
  if (!part) return Invalid("null partition");
  if (total_subclasses) *total_subclasses = static_cast<size_t>(part->part.total_subclasses());
  if (deficient_classes) *deficient_classes = part->part.deficient_classes().size();
  return WSSDA_OK;
}

wssda_status wssda_partition_subclass(const wssda_partition *part, size_t sample,
                                      int *subclass) {
  if (!part || !subclass) return Invalid("null argument");
  if (sample >= part->part.subclass_of().size()) return Invalid("sample index out of range");
  *subclass = part->part.subclass_of()[sample];
  return WSSDA_OK;
}

wssda_status wssda_partition_save_csv(const wssda_partition *part, const char *path) {
  if (!part || !path) return Invalid("null argument");
  return Guard([&] { part->part.save_csv(path); });
}

void wssda_partition_free(wssda_partition *part) { delete part; }

wssda_status wssda_train(const wssda_dataset *ds, const wssda_partition *part,
                         const wssda_train_config *config, wssda_model **out) {
  if (!ds || !part || !config || !out) return Invalid("null argument");
  if (config->mode != WSSDA_MODE_REGULARIZED && config->mode != WSSDA_MODE_TRUNCATED)
    return Invalid("unknown mode");
  if (config->second_stage != WSSDA_STAGE_TOTAL_SUBCLASS &&
      config->second_stage != WSSDA_STAGE_BETWEEN_SUBCLASS)
    return Invalid("unknown second stage");
  return Guard([&] {
    wssda::TrainConfig c;
    c.d = config->d;
    c.med_factor = config->med_factor;
    c.mode = config->mode == WSSDA_MODE_REGULARIZED ? wssda::SpectrumMode::kRegularized
                                                    : wssda::SpectrumMode::kTruncatedBaseline;
    c.second_stage = config->second_stage == WSSDA_STAGE_TOTAL_SUBCLASS
                         ? wssda::SecondStage::kTotalSubclass
                         : wssda::SecondStage::kBetweenSubclass;
    c.allow_flat_fallback = config->allow_flat_fallback != 0;
    wssda::TrainResult r = wssda::train_detailed(ds->ds, part->part, c);
    *out = new wssda_model{std::move(r.extractor), std::move(r.within_spectrum),
                           std::move(r.model)};
  });
}

wssda_status wssda_model_save(const wssda_model *model, const char *path) {
  if (!model || !path) return Invalid("null argument");
  return Guard([&] { wssda::save_model(model->fx, path); });
}

wssda_status wssda_model_save_spectrum_csv(const wssda_model *model, const char *path) {
  if (!model || !path) return Invalid("null argument");
  if (!model->spectrum) return Invalid("model was loaded from disk and has no spectrum");
  return Guard(
      [&] { wssda::save_spectrum_csv(*model->spectrum, *model->spectrum_model, path); });
}

wssda_status wssda_model_load(const char *path, wssda_model **out) {
  if (!path || !out) return Invalid("null argument");
  return Guard([&] { *out = new wssda_model{wssda::load_model(path), {}, {}}; });
}

wssda_status wssda_model_info(const wssda_model *model, size_t *dim, size_t *features,
                              wssda_mode *mode, wssda_strategy *strategy, int *h) {
  if (!model) return Invalid("null model");
  if (dim) *dim = static_cast<size_t>(model->fx.dim());
  if (features) *features = static_cast<size_t>(model->fx.feature_count());
  if (mode) *mode = static_cast<wssda_mode>(model->fx.meta().mode);
  if (strategy) *strategy = static_cast<wssda_strategy>(model->fx.meta().strategy);
  if (h) *h = model->fx.meta().h;
  return WSSDA_OK;
}

wssda_status wssda_model_extract(const wssda_model *model, const double *x, size_t dim,
                                 double *z, size_t features) {
  if (!model || !x || !z) return Invalid("null argument");
  if (features == 0 || features > static_cast<size_t>(model->fx.feature_count()))
    return Invalid("feature count out of range");
  return Guard([&] {
    Eigen::Map<const Eigen::VectorXd> xv(x, static_cast<Eigen::Index>(dim));
    Eigen::VectorXd zv = model->fx.extract(xv);
    for (size_t k = 0; k < features; ++k) z[k] = zv(static_cast<Eigen::Index>(k));
  });
}

void wssda_model_free(wssda_model *model) { delete model; }

wssda_status wssda_eval_identification(const wssda_model *model, const wssda_dataset *ds,
                                       int gallery_rotations, int gallery_first_k,
                                       const int *d_values, size_t count,
                                       wssda_id_report **out) {
  if (!model || !ds || !d_values || !out) return Invalid("null argument");
  if ((gallery_rotations > 0) == (gallery_first_k > 0))
    return Invalid("exactly one of gallery_rotations and gallery_first_k must be positive");
  return Guard([&] {
    std::vector<wssda::SplitSpec> splits =
        gallery_rotations > 0
            ? wssda::make_gallery_probe_splits(ds->ds, gallery_rotations)
            : std::vector<wssda::SplitSpec>{wssda::make_first_k_split(ds->ds, gallery_first_k)};
    const wssda::FeatureExtractor &fx = model->fx;
    auto factory = [&fx](const wssda::LabeledDataset &, const wssda::SplitSpec &) {
      return fx;
    };
    *out = new wssda_id_report{wssda::identification_sweep(
        factory, ds->ds, splits, std::span<const int>(d_values, count))};
  });
}

wssda_status wssda_id_report_error(const wssda_id_report *report, size_t index, int *d,
                                   double *error) {
  if (!report) return Invalid("null report");
  if (index >= report->report.d_values.size()) return Invalid("index out of range");
  if (d) *d = report->report.d_values[index];
  if (error) *error = report->report.error[index];
  return WSSDA_OK;
}

wssda_status wssda_id_report_save_csv(const wssda_id_report *report, const char *path) {
  if (!report || !path) return Invalid("null argument");
  return Guard([&] { wssda::save_identification_csv(report->report, path); });
}

void wssda_id_report_free(wssda_id_report *report) { delete report; }

wssda_status wssda_pairs_load_csv(const char *path, wssda_pairs **out) {
  if (!path || !out) return Invalid("null argument");
  return Guard([&] { *out = new wssda_pairs{wssda::load_pairs_csv(path)}; });
}

wssda_status wssda_pairs_count(const wssda_pairs *pairs, size_t *count) {
  if (!pairs || !count) return Invalid("null argument");
  *count = pairs->pairs.size();
  return WSSDA_OK;
}

void wssda_pairs_free(wssda_pairs *pairs) { delete pairs; }

wssda_status wssda_eval_verification(const wssda_model *model, const wssda_dataset *ds,
                                     const wssda_pairs *pairs, int folds, int grid_points,
                                     wssda_verify_report **out) {
  if (!model || !ds || !pairs || !out) return Invalid("null argument");
  return Guard([&] {
    const Eigen::MatrixXd features = model->fx.extract_rows(ds->ds.samples());
    const auto scored = wssda::score_pairs(features, pairs->pairs);
    const auto fold_of = wssda::assign_folds(pairs->pairs, folds);
    *out = new wssda_verify_report{
        wssda::kfold_pairwise(scored, fold_of, folds, grid_points)};
  });
}

wssda_status wssda_verify_report_summary(const wssda_verify_report *report,
                                         double *mean_eer, double *std_eer, size_t *folds) {
  if (!report) return Invalid("null report");
  if (mean_eer) *mean_eer = report->report.mean_eer;
  if (std_eer) *std_eer = report->report.std_eer;
  if (folds) *folds = report->report.fold_eer.size();
  return WSSDA_OK;
}

wssda_status wssda_verify_report_fold_eer(const wssda_verify_report *report, size_t fold,
                                          double *eer) {
  if (!report || !eer) return Invalid("null argument");
  if (fold >= report->report.fold_eer.size()) return Invalid("fold out of range");
  *eer = report->report.fold_eer[fold];
  return WSSDA_OK;
}

wssda_status wssda_verify_report_save_roc_csv(const wssda_verify_report *report,
                                              const char *path) {
  if (!report || !path) return Invalid("null argument");
  return Guard([&] { wssda::save_roc_csv(report->report, path); });
}

wssda_status wssda_verify_report_save_eer_csv(const wssda_verify_report *report,
                                              const char *path) {
  if (!report || !path) return Invalid("null argument");
  return Guard([&] { wssda::save_eer_csv(report->report, path); });
}

void wssda_verify_report_free(wssda_verify_report *report) { delete report; }

}  // extern "C"
