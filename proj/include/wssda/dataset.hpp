// include/wssda/dataset.hpp

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

#ifndef WSSDA_DATASET_HPP_
#define WSSDA_DATASET_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wssda {

/// Largest sample dimension accepted by training. The pipeline computes a
/// full l x l symmetric eigendecomposition, so larger images must be
/// downsampled before ingestion.
inline constexpr int kMaxDimension = 4096;

/// Samples stored one per row, with dense class labels in [0, C) and
/// optional subclass labels (dense within each class).
class LabeledDataset {
 public:
  LabeledDataset() = default;

  /// Validates the invariants: labels dense and every class present, and
  /// when subclass labels are given, dense per class.
  LabeledDataset(Eigen::MatrixXd samples, std::vector<int> class_labels,
                 std::optional<std::vector<int>> subclass_labels = std::nullopt);

  const Eigen::MatrixXd &samples() const { return samples_; }
  const std::vector<int> &class_labels() const { return class_labels_; }
  const std::optional<std::vector<int>> &subclass_labels() const {
    return subclass_labels_;
  }
  bool has_subclass_labels() const { return subclass_labels_.has_value(); }

  int size() const { return static_cast<int>(samples_.rows()); }
  int dim() const { return static_cast<int>(samples_.cols()); }
  int class_count() const { return class_count_; }

  /// n_i for every class.
  std::vector<int> class_sizes() const;
  /// Sample indices of one class, in row order.
  std::vector<int> class_indices(int class_id) const;

  /// Rows `indices`, in the given order. Labels of classes that lose all
  /// their samples are compacted so the result is again dense.
  LabeledDataset subset(std::span<const int> indices) const;

 private:
  Eigen::MatrixXd samples_;
  std::vector<int> class_labels_;
  std::optional<std::vector<int>> subclass_labels_;
  int class_count_ = 0;
};

/// Rows are `class[,subclass],v_1,...,v_l`; no header row.
LabeledDataset load_csv(const std::string &path, bool has_subclass_column);

/// Inverse of load_csv; values printed with 17 significant digits.
void save_csv(const LabeledDataset &ds, const std::string &path);

/// One subdirectory per class (sorted by name); every *.pgm file in it
/// (sorted by name) becomes one row with pixels scaled to [0, 1].
LabeledDataset load_pgm_dir(const std::string &path);

struct SynthSpec {
  int class_count = 20;
  int subclasses_per_class = 2;
  int samples_per_subclass = 10;
  int dim = 50;
  /// Class centers are drawn from N(0, class_spread^2 I).
  double class_spread = 1.0;
  /// Distance of every subclass mean from its class center.
  double subclass_mean_spread = 1.0;
  /// Per-subclass isotropic standard deviation drawn uniformly from
  /// [scale_min, scale_max].
  double scale_min = 0.1;
  double scale_max = 0.5;
  std::uint64_t seed = 0;

  /// Throws Error(kConfig) on non-positive counts or negative spreads.
  void validate() const;
};

/// Isotropic Gaussian subclasses with heteroscedastic scales, ordered class
/// by class and subclass by subclass. Ground-truth subclass labels are
/// recorded. Deterministic given the spec.
LabeledDataset generate_synthetic(const SynthSpec &spec);

struct SplitSpec {
  std::vector<int> gallery;
  std::vector<int> probe;
};

/// Rotation i makes the i-th sample of each class the gallery entry and the
/// rest probes; one split per rotation.
std::vector<SplitSpec> make_gallery_probe_splits(const LabeledDataset &ds,
                                                 int rotations);

/// The first `k` samples of each class form the gallery (and training set),
/// the rest are probes.
SplitSpec make_first_k_split(const LabeledDataset &ds, int k);

}  // namespace wssda

#endif  // WSSDA_DATASET_HPP_
