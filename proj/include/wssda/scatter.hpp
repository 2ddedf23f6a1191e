// include/wssda/scatter.hpp

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

#ifndef WSSDA_SCATTER_HPP_
#define WSSDA_SCATTER_HPP_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wssda/dataset.hpp"
#include "wssda/partition.hpp"

namespace wssda {

enum class ScatterKind { kWithinClass, kWithinSubclass, kBetweenSubclass, kTotalSubclass };

struct ScatterMatrix {
  Eigen::MatrixXd matrix;
  ScatterKind kind;
  /// Upper bound on the rank implied by the sample counts.
  int rank_bound = 0;
};

// Priors are fixed to the equal-probability case: p_i = 1/C, q = 1/H_i.

/// S_w = (1/n) sum_i sum_j (x_ij - mu_i)(x_ij - mu_i)^T.
ScatterMatrix within_class_scatter(const LabeledDataset &ds);

/// S_ws = sum_i p_i sum_j (q_i / G_ij) sum_k (x_ijk - mu_ij)(x_ijk - mu_ij)^T.
ScatterMatrix within_subclass_scatter(const LabeledDataset &ds,
                                      const SubclassPartition &part);

/// Per-group means of the rows of `x` (which need not be the raw samples,
/// e.g. whitened data).
struct GroupMeans {
  /// One row per class.
  Eigen::MatrixXd class_means;
  /// Rows ordered class-major: class 0's subclasses first, and so on.
  Eigen::MatrixXd subclass_means;
  /// Mean of the class means, not the grand sample mean.
  Eigen::VectorXd global_mean;
};

GroupMeans compute_group_means(const Eigen::MatrixXd &x,
                               const SubclassPartition &part);

/// S_bs = sum_i (p_i / H_i) sum_j (mu_ij - mu)(mu_ij - mu)^T, with
/// `subclass_means` in the class-major order of GroupMeans.
ScatterMatrix between_subclass_scatter(const Eigen::MatrixXd &subclass_means,
                                       const Eigen::VectorXd &global_mean,
                                       const SubclassPartition &part);

/// S_ts = sum_i (p_i / n_i) sum_j (y_ij - mu)(y_ij - mu)^T.
ScatterMatrix total_subclass_scatter(const Eigen::MatrixXd &y,
                                     std::span<const int> class_labels,
                                     const Eigen::VectorXd &global_mean);

/// Eigenvalue count above max_eigenvalue * 1e-12.
int numerical_rank(const Eigen::MatrixXd &symmetric);

/// Debug dump, one matrix row per CSV line.
void save_matrix_csv(const Eigen::MatrixXd &m, const std::string &path);

}  // namespace wssda

#endif  // WSSDA_SCATTER_HPP_
