// include/wssda/extractor.hpp

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

#ifndef WSSDA_EXTRACTOR_HPP_
#define WSSDA_EXTRACTOR_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "wssda/dataset.hpp"
#include "wssda/partition.hpp"
#include "wssda/scatter.hpp"
#include "wssda/spectrum.hpp"

namespace wssda {

enum class SecondStage { kTotalSubclass, kBetweenSubclass };

std::string_view ModeName(SpectrumMode mode);
SpectrumMode ParseMode(std::string_view name);        // "regularized" | "truncated"
std::string_view SecondStageName(SecondStage stage);
SecondStage ParseSecondStage(std::string_view name);  // "ts" | "bs"

struct TrainConfig {
  int d = 10;
  double med_factor = 1.0;
  SpectrumMode mode = SpectrumMode::kRegularized;
  SecondStage second_stage = SecondStage::kTotalSubclass;
  /// Fall back to uniform whitening when the spectrum is flat instead of
  /// failing.
  bool allow_flat_fallback = false;
};

struct ExtractorMeta {
  PartitionStrategy strategy = PartitionStrategy::kProvided;
  int h = 1;
  double med_factor = 1.0;
  SpectrumMode mode = SpectrumMode::kRegularized;
  SecondStage second_stage = SecondStage::kTotalSubclass;
  int dim = 0;
  int class_count = 0;
  int sample_count = 0;
  int pivot = 0;
  int rank = 0;
  double alpha = 0.0;
  double beta = 0.0;

  bool operator==(const ExtractorMeta &) const = default;
};

/// l x d projection; features are z = U^T x on raw (uncentered) vectors.
class FeatureExtractor {
 public:
  FeatureExtractor() = default;
  FeatureExtractor(Eigen::MatrixXd u, ExtractorMeta meta);

  const Eigen::MatrixXd &matrix() const { return u_; }
  const ExtractorMeta &meta() const { return meta_; }
  int dim() const { return static_cast<int>(u_.rows()); }
  int feature_count() const { return static_cast<int>(u_.cols()); }

  /// Throws Error(kContract) on a dimension mismatch.
  Eigen::VectorXd extract(const Eigen::Ref<const Eigen::VectorXd> &x) const;
  /// Row-wise extraction of a sample matrix.
  Eigen::MatrixXd extract_rows(const Eigen::MatrixXd &x) const;

  /// The leading `d` columns. Second-stage eigenvectors are sorted, so this
  /// equals training at `d`.
  FeatureExtractor leading(int d) const;

 private:
  Eigen::MatrixXd u_;
  ExtractorMeta meta_;
};

/// Everything training computes, kept for diagnostics.
struct TrainResult {
  FeatureExtractor extractor;
  Eigenspectrum within_spectrum;
  SpectrumModel model;
  /// Whitening basis Psi~ (columns weight_k * psi_k).
  Eigen::MatrixXd whitening;
};

/// The full pipeline: S_ws, its eigenbasis, spectrum model, whitening,
/// second-stage scatter, top-d eigenvectors, U.
TrainResult train_detailed(const LabeledDataset &ds,
                           const SubclassPartition &part,
                           const TrainConfig &config);

/// Same pipeline from a caller-supplied first-stage scatter, e.g. S_w for
/// whole-class analysis. `part` still drives the second-stage means.
TrainResult train_from_scatter(const LabeledDataset &ds,
                               const SubclassPartition &part,
                               const ScatterMatrix &first_stage,
                               const TrainConfig &config);

inline FeatureExtractor train(const LabeledDataset &ds,
                              const SubclassPartition &part,
                              const TrainConfig &config) {
  return train_detailed(ds, part, config).extractor;
}

// Model file: "WSSDA1", u32 version, u32 l, d, mode, strategy, h, then U
// row-major as little-endian f64, then u32 count of length-prefixed UTF-8
// key/value pairs.
inline constexpr std::uint32_t kModelVersion = 1;

void save_model(const FeatureExtractor &fx, const std::string &path);
FeatureExtractor load_model(const std::string &path);

std::string serialize_model(const FeatureExtractor &fx);
FeatureExtractor deserialize_model(std::string_view bytes);

}  // namespace wssda

#endif  // WSSDA_EXTRACTOR_HPP_
