// include/wssda/partition.hpp

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

#ifndef WSSDA_PARTITION_HPP_
#define WSSDA_PARTITION_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wssda/dataset.hpp"

namespace wssda {

enum class PartitionStrategy { kKDTree, kRPTree, kPCATree, kKMeans, kProvided };

std::string_view StrategyName(PartitionStrategy s);
/// Accepts "kd", "rp", "pca", "kmeans", "provided".
PartitionStrategy ParseStrategy(std::string_view name);

struct TreeParams {
  int h = 2;
  int max_depth = 8;
  std::uint64_t seed = 0;

  /// h >= 1; binary trees need a power of two with log2(h) <= max_depth.
  void validate(PartitionStrategy strategy) const;
};

using IndexSet = std::vector<int>;

struct ClassSplit {
  std::vector<IndexSet> subsets;
  /// Set when the class has fewer samples than h; it then gets one
  /// singleton subclass per sample.
  bool deficient = false;
  /// Number of tree levels used (1 for flat k-means, 0 when h == 1).
  int depth = 0;
};

// Binary node splits. Each returns (left, right) as indices into `points`
// rows; left holds the ceil(m/2) smallest projections, ties broken by row
// index, so both sides are non-empty for m >= 2.
std::pair<IndexSet, IndexSet> split_kd(const Eigen::MatrixXd &points);
std::pair<IndexSet, IndexSet> split_rp(const Eigen::MatrixXd &points,
                                       std::mt19937_64 &rng);
std::pair<IndexSet, IndexSet> split_pca(const Eigen::MatrixXd &points);
/// Median split of the projections onto `direction`.
std::pair<IndexSet, IndexSet> split_along(const Eigen::MatrixXd &points,
                                          const Eigen::VectorXd &direction);

/// Flat Lloyd k-means with farthest-point seeding. Requires m >= h.
std::vector<IndexSet> cluster_kmeans(const Eigen::MatrixXd &points, int h,
                                     std::uint64_t seed);

/// Partitions the rows of one class into exactly h non-empty disjoint sets
/// (m singletons when m < h). Binary trees are cut at depth log2(h).
ClassSplit partition_class(const Eigen::MatrixXd &samples_of_class,
                           const TreeParams &params, PartitionStrategy strategy,
                           std::uint64_t class_seed);

class SubclassPartition {
 public:
  SubclassPartition() = default;
  /// `subclass` gives, per sample, its subclass index within its class.
  /// Throws Error(kPartition) when a subclass is empty or labels disagree.
  SubclassPartition(const LabeledDataset &ds, std::vector<int> subclass,
                    PartitionStrategy strategy,
                    std::vector<int> deficient_classes = {});

  const std::vector<int> &class_of() const { return class_of_; }
  const std::vector<int> &subclass_of() const { return subclass_of_; }
  /// H_i.
  const std::vector<int> &subclass_counts() const { return H_; }
  /// G_ij.
  const std::vector<std::vector<int>> &group_sizes() const { return G_; }
  PartitionStrategy strategy() const { return strategy_; }
  const std::vector<int> &deficient_classes() const { return deficient_; }
  int class_count() const { return static_cast<int>(H_.size()); }
  int total_subclasses() const;

  /// Consistency with a dataset: same size and class labels.
  void check_against(const LabeledDataset &ds) const;

  /// CSV of (sample, class, subclass) with a header row.
  void save_csv(const std::string &path) const;

 private:
  std::vector<int> class_of_;
  std::vector<int> subclass_of_;
  std::vector<int> H_;
  std::vector<std::vector<int>> G_;
  PartitionStrategy strategy_ = PartitionStrategy::kProvided;
  std::vector<int> deficient_;
};

/// Applies partition_class to every class with an RNG stream derived from
/// (params.seed, class id). kProvided copies the dataset's subclass labels.
SubclassPartition partition_dataset(const LabeledDataset &ds,
                                    const TreeParams &params,
                                    PartitionStrategy strategy);

}  // namespace wssda

#endif  // WSSDA_PARTITION_HPP_
