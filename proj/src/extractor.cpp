// src/extractor.cpp

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

#include "wssda/extractor.hpp"

#include <algorithm>

#include "wssda/error.hpp"

namespace wssda {

std::string_view ModeName(SpectrumMode mode) {
  return mode == SpectrumMode::kRegularized ? "regularized" : "truncated";
}

SpectrumMode ParseMode(std::string_view name) {
  if (name == "regularized") return SpectrumMode::kRegularized;
  if (name == "truncated") return SpectrumMode::kTruncatedBaseline;
  Fail(ErrorCode::kConfig, "unknown mode '" + std::string(name) + "'");
}

std::string_view SecondStageName(SecondStage stage) {
  return stage == SecondStage::kTotalSubclass ? "ts" : "bs";
}

SecondStage ParseSecondStage(std::string_view name) {
  if (name == "ts") return SecondStage::kTotalSubclass;
  if (name == "bs") return SecondStage::kBetweenSubclass;
  Fail(ErrorCode::kConfig, "unknown second stage '" + std::string(name) + "'");
}

FeatureExtractor::FeatureExtractor(Eigen::MatrixXd u, ExtractorMeta meta)
    : u_(std::move(u)), meta_(meta) {
  if (u_.cols() > u_.rows()) Fail(ErrorCode::kContract, "feature count exceeds dimension");
  if (!u_.allFinite()) Fail(ErrorCode::kContract, "extractor has non-finite entries");
}

Eigen::VectorXd FeatureExtractor::extract(const Eigen::Ref<const Eigen::VectorXd> &x) const {
  if (x.size() != u_.rows())
    Fail(ErrorCode::kContract, "vector has dimension " + std::to_string(x.size()) +
                                   ", extractor expects " + std::to_string(u_.rows()));
  return u_.transpose() * x;
}

Eigen::MatrixXd FeatureExtractor::extract_rows(const Eigen::MatrixXd &x) const {
  if (x.cols() != u_.rows())
    Fail(ErrorCode::kContract, "sample dimension " + std::to_string(x.cols()) +
                                   " does not match extractor dimension " +
                                   std::to_string(u_.rows()));
  return x * u_;
}

FeatureExtractor FeatureExtractor::leading(int d) const {
  if (d < 1 || d > feature_count())
    Fail(ErrorCode::kConfig, "d = " + std::to_string(d) + " exceeds the model's " +
                                 std::to_string(feature_count()) + " features");
  return FeatureExtractor(u_.leftCols(d), meta_);
}

TrainResult train_from_scatter(const LabeledDataset &ds, const SubclassPartition &part,
                               const ScatterMatrix &first_stage,
                               const TrainConfig &config) {
  const int l = ds.dim();
  if (l > kMaxDimension)
    Fail(ErrorCode::kConfig, "dimension " + std::to_string(l) + " exceeds the supported " +
                                 std::to_string(kMaxDimension) + "; downsample the input");
  if (config.d < 1 || config.d > l)
    Fail(ErrorCode::kConfig, "d = " + std::to_string(config.d) + " must lie in [1, " +
                                 std::to_string(l) + "]");
  part.check_against(ds);

  TrainResult result;
  result.within_spectrum = eig_symmetric_full(first_stage);
  if (config.mode == SpectrumMode::kRegularized) {
    try {
      result.model = regularized_model(result.within_spectrum, config.med_factor,
                                       config.allow_flat_fallback);
    } catch (const Error &e) {
      Fail(ErrorCode::kTraining,
           std::string("cannot regularize the first-stage spectrum: ") + e.what());
    }
  } else {
    result.model = truncated_weights(result.within_spectrum);
    if (!result.model.usable)
      Fail(ErrorCode::kTraining, "first-stage scatter is zero; truncated whitening is empty");
  }

  result.whitening = result.within_spectrum.vectors * result.model.weights.asDiagonal();
  const Eigen::MatrixXd y = ds.samples() * result.whitening;
  const GroupMeans means = compute_group_means(y, part);
  const ScatterMatrix second =
      config.second_stage == SecondStage::kTotalSubclass
          ? total_subclass_scatter(y, ds.class_labels(), means.global_mean)
          : between_subclass_scatter(means.subclass_means, means.global_mean, part);
  const Eigenspectrum second_es = eig_symmetric_full(second);

  Eigen::MatrixXd u = result.whitening * second_es.vectors.leftCols(config.d);
  // Sign is fixed in the input space so it does not depend on how a
  // degenerate first-stage eigenspace happened to be rotated.
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    Eigen::Index arg = 0;
    u.col(k).cwiseAbs().maxCoeff(&arg);
    if (u(arg, k) < 0) u.col(k) *= -1.0;
  }

  ExtractorMeta meta;
  meta.strategy = part.strategy();
  meta.h = *std::max_element(part.subclass_counts().begin(), part.subclass_counts().end());
  meta.med_factor = config.med_factor;
  meta.mode = config.mode;
  meta.second_stage = config.second_stage;
  meta.dim = l;
  meta.class_count = ds.class_count();
  meta.sample_count = ds.size();
  meta.pivot = result.model.m;
  meta.rank = result.model.rank;
  meta.alpha = result.model.alpha;
  meta.beta = result.model.beta;
  result.extractor = FeatureExtractor(std::move(u), meta);
  return result;
}

TrainResult train_detailed(const LabeledDataset &ds, const SubclassPartition &part,
                           const TrainConfig &config) {
  part.check_against(ds);
  return train_from_scatter(ds, part, within_subclass_scatter(ds, part), config);
}

}  // namespace wssda
