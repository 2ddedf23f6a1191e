// src/partition.cpp

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

#include "wssda/partition.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

#include "wssda/error.hpp"
#include "wssda/util.hpp"

namespace wssda {

std::string_view StrategyName(PartitionStrategy s) {
  switch (s) {
    case PartitionStrategy::kKDTree: return "kd";
    case PartitionStrategy::kRPTree: return "rp";
    case PartitionStrategy::kPCATree: return "pca";
    case PartitionStrategy::kKMeans: return "kmeans";
    case PartitionStrategy::kProvided: return "provided";
  }
  return "?";
}

PartitionStrategy ParseStrategy(std::string_view name) {
  for (auto s : {PartitionStrategy::kKDTree, PartitionStrategy::kRPTree,
                 PartitionStrategy::kPCATree, PartitionStrategy::kKMeans,
                 PartitionStrategy::kProvided})
    if (StrategyName(s) == name) return s;
  Fail(ErrorCode::kConfig, "unknown partition strategy '" + std::string(name) + "'");
}

namespace {
bool IsBinaryTree(PartitionStrategy s) {
  return s == PartitionStrategy::kKDTree || s == PartitionStrategy::kRPTree ||
         s == PartitionStrategy::kPCATree;
}

// Sign convention shared with the eigensolver: largest |component| positive.
void FixSign(Eigen::VectorXd &v) {
  if (v.size() == 0) return;
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0) v = -v;
}

std::pair<IndexSet, IndexSet> MedianSplit(const Eigen::VectorXd &proj) {
  const int m = static_cast<int>(proj.size());
  IndexSet order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return proj(a) < proj(b); });
  const int left_size = (m + 1) / 2;
  IndexSet left(order.begin(), order.begin() + left_size);
  IndexSet right(order.begin() + left_size, order.end());
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  return {std::move(left), std::move(right)};
}

Eigen::MatrixXd Rows(const Eigen::MatrixXd &x, const IndexSet &idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), x.cols());
  for (size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = x.row(idx[r]);
  return out;
}
}  // namespace

void TreeParams::validate(PartitionStrategy strategy) const {
  if (h < 1) Fail(ErrorCode::kConfig, "h must be at least 1");
  if (max_depth < 1 || max_depth > 8)
    Fail(ErrorCode::kConfig, "max_depth must lie in [1, 8]");
  if (IsBinaryTree(strategy)) {
    const unsigned uh = static_cast<unsigned>(h);
    if (!std::has_single_bit(uh))
      Fail(ErrorCode::kConfig, "binary partition trees need h to be a power of two");
    if (std::countr_zero(uh) > max_depth)
      Fail(ErrorCode::kConfig, "log2(h) exceeds max_depth");
  }
}

std::pair<IndexSet, IndexSet> split_along(const Eigen::MatrixXd &points,
                                          const Eigen::VectorXd &direction) {
  if (points.rows() < 2) Fail(ErrorCode::kContract, "a split needs at least two points");
  return MedianSplit(points * direction);
}

std::pair<IndexSet, IndexSet> split_kd(const Eigen::MatrixXd &points) {
  if (points.rows() < 2) Fail(ErrorCode::kContract, "a split needs at least two points");
  Eigen::RowVectorXd spread = points.colwise().maxCoeff() - points.colwise().minCoeff();
  Eigen::Index axis = 0;
  double best = -1.0;
  for (Eigen::Index k = 0; k < spread.size(); ++k)
    if (spread(k) > best) {
      best = spread(k);
      axis = k;
    }
  return MedianSplit(points.col(axis));
}

std::pair<IndexSet, IndexSet> split_rp(const Eigen::MatrixXd &points,
                                       std::mt19937_64 &rng) {
  if (points.rows() < 2) Fail(ErrorCode::kContract, "a split needs at least two points");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd dir(points.cols());
  for (Eigen::Index k = 0; k < dir.size(); ++k) dir(k) = gauss(rng);
  const double norm = dir.norm();
  if (norm > 0.0) dir /= norm;
  return MedianSplit(points * dir);
}

std::pair<IndexSet, IndexSet> split_pca(const Eigen::MatrixXd &points) {
  if (points.rows() < 2) Fail(ErrorCode::kContract, "a split needs at least two points");
  Eigen::MatrixXd centered = points.rowwise() - points.colwise().mean();
  Eigen::VectorXd dir = Eigen::VectorXd::Zero(points.cols());
  if (centered.squaredNorm() > 0.0) {
    // Principal axis from whichever Gram matrix is smaller.
    if (centered.rows() < centered.cols()) {
      Eigen::MatrixXd gram = centered * centered.transpose();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
      dir = centered.transpose() * es.eigenvectors().col(gram.rows() - 1);
      const double norm = dir.norm();
      if (norm > 0.0) dir /= norm;
    } else {
      Eigen::MatrixXd cov = centered.transpose() * centered;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
      dir = es.eigenvectors().col(cov.rows() - 1);
    }
    FixSign(dir);
  }
  return MedianSplit(points * dir);
}

std::vector<IndexSet> cluster_kmeans(const Eigen::MatrixXd &points, int h,
                                     std::uint64_t seed) {
  const int m = static_cast<int>(points.rows());
  if (h < 1 || m < h) Fail(ErrorCode::kContract, "k-means needs 1 <= h <= m");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, m - 1);

  // Farthest-point seeding.
  Eigen::MatrixXd centers(h, points.cols());
  centers.row(0) = points.row(pick(rng));
  Eigen::VectorXd nearest = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < h; ++c) {
    Eigen::Index far = 0;
    nearest.maxCoeff(&far);
    centers.row(c) = points.row(far);
    nearest = nearest.cwiseMin(
        (points.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }

  std::vector<int> assign(m, -1);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (int i = 0; i < m; ++i) {
      Eigen::Index best = 0;
      (centers.rowwise() - points.row(i)).rowwise().squaredNorm().minCoeff(&best);
      if (assign[i] != best) {
        assign[i] = static_cast<int>(best);
        changed = true;
      }
    }
    // Repair empty clusters by stealing the point farthest from its centroid.
    std::vector<int> sizes(h, 0);
    for (int a : assign) ++sizes[a];
    for (int c = 0; c < h; ++c) {
      if (sizes[c] > 0) continue;
      int victim = -1;
      double worst = -1.0;
      for (int i = 0; i < m; ++i) {
        if (sizes[assign[i]] < 2) continue;
        double dist = (points.row(i) - centers.row(assign[i])).squaredNorm();
        if (dist > worst) {
          worst = dist;
          victim = i;
        }
      }
      --sizes[assign[victim]];
      assign[victim] = c;
      sizes[c] = 1;
      centers.row(c) = points.row(victim);
      changed = true;
    }
    if (!changed && iter > 0) break;
    centers.setZero();
    for (int i = 0; i < m; ++i) centers.row(assign[i]) += points.row(i);
    for (int c = 0; c < h; ++c) centers.row(c) /= static_cast<double>(sizes[c]);
  }

  std::vector<IndexSet> sets(h);
  for (int i = 0; i < m; ++i) sets[assign[i]].push_back(i);
  return sets;
}

namespace {
void BuildTree(const Eigen::MatrixXd &x, IndexSet idx, int levels,
               PartitionStrategy strategy, std::mt19937_64 &rng,
               std::vector<IndexSet> &leaves) {
  if (levels == 0) {
    leaves.push_back(std::move(idx));
    return;
  }
  Eigen::MatrixXd node = Rows(x, idx);
  std::pair<IndexSet, IndexSet> split;
  switch (strategy) {
    case PartitionStrategy::kKDTree: split = split_kd(node); break;
    case PartitionStrategy::kRPTree: split = split_rp(node, rng); break;
    default: split = split_pca(node); break;
  }
  IndexSet left, right;
  for (int i : split.first) left.push_back(idx[i]);
  for (int i : split.second) right.push_back(idx[i]);
  BuildTree(x, std::move(left), levels - 1, strategy, rng, leaves);
  BuildTree(x, std::move(right), levels - 1, strategy, rng, leaves);
}
}  // namespace

ClassSplit partition_class(const Eigen::MatrixXd &samples_of_class,
                           const TreeParams &params, PartitionStrategy strategy,
                           std::uint64_t class_seed) {
  if (strategy == PartitionStrategy::kProvided)
    Fail(ErrorCode::kContract, "provided subclasses cannot be computed per class");
  params.validate(strategy);
  const int m = static_cast<int>(samples_of_class.rows());
  if (m < 1) Fail(ErrorCode::kContract, "cannot partition an empty class");

  ClassSplit out;
  if (m < params.h) {
    out.deficient = true;
    for (int i = 0; i < m; ++i) out.subsets.push_back({i});
    return out;
  }
  if (params.h == 1) {
    IndexSet all(m);
    std::iota(all.begin(), all.end(), 0);
    out.subsets.push_back(std::move(all));
    return out;
  }
  if (strategy == PartitionStrategy::kKMeans) {
    out.subsets = cluster_kmeans(samples_of_class, params.h, class_seed);
    out.depth = 1;
    return out;
  }
  const int levels = std::countr_zero(static_cast<unsigned>(params.h));
  std::mt19937_64 rng(class_seed);
  IndexSet all(m);
  std::iota(all.begin(), all.end(), 0);
  BuildTree(samples_of_class, std::move(all), levels, strategy, rng, out.subsets);
  out.depth = levels;
  return out;
}

SubclassPartition::SubclassPartition(const LabeledDataset &ds, std::vector<int> subclass,
                                     PartitionStrategy strategy,
                                     std::vector<int> deficient_classes)
    : class_of_(ds.class_labels()),
      subclass_of_(std::move(subclass)),
      strategy_(strategy),
      deficient_(std::move(deficient_classes)) {
  if (subclass_of_.size() != class_of_.size())
    Fail(ErrorCode::kPartition, "partition size does not match the dataset");
  H_.assign(ds.class_count(), 0);
  for (size_t i = 0; i < subclass_of_.size(); ++i) {
    if (subclass_of_[i] < 0) Fail(ErrorCode::kPartition, "negative subclass index");
    H_[class_of_[i]] = std::max(H_[class_of_[i]], subclass_of_[i] + 1);
  }
  G_.resize(H_.size());
  for (size_t c = 0; c < H_.size(); ++c) G_[c].assign(H_[c], 0);
  for (size_t i = 0; i < subclass_of_.size(); ++i) ++G_[class_of_[i]][subclass_of_[i]];
  for (size_t c = 0; c < G_.size(); ++c)
    for (size_t j = 0; j < G_[c].size(); ++j)
      if (G_[c][j] == 0)
        Fail(ErrorCode::kPartition, "class " + std::to_string(c) + " subclass " +
                                        std::to_string(j) + " has no samples");
}

int SubclassPartition::total_subclasses() const {
  return std::accumulate(H_.begin(), H_.end(), 0);
}

void SubclassPartition::check_against(const LabeledDataset &ds) const {
  if (class_of_ != ds.class_labels())
    Fail(ErrorCode::kPartition, "partition does not match the dataset's class labels");
}

void SubclassPartition::save_csv(const std::string &path) const {
  std::string out = "sample,class,subclass\n";
  for (size_t i = 0; i < class_of_.size(); ++i)
    out += std::to_string(i) + ',' + std::to_string(class_of_[i]) + ',' +
           std::to_string(subclass_of_[i]) + '\n';
  AtomicWriteFile(path, out);
}

SubclassPartition partition_dataset(const LabeledDataset &ds, const TreeParams &params,
                                    PartitionStrategy strategy) {
  if (strategy == PartitionStrategy::kProvided) {
    if (!ds.has_subclass_labels())
      Fail(ErrorCode::kConfig, "strategy 'provided' needs subclass labels in the data");
    return SubclassPartition(ds, *ds.subclass_labels(), strategy);
  }
  params.validate(strategy);
  std::vector<int> subclass(ds.size(), 0);
  std::vector<int> deficient;
  for (int c = 0; c < ds.class_count(); ++c) {
    IndexSet members = ds.class_indices(c);
    Eigen::MatrixXd rows = Rows(ds.samples(), members);
    ClassSplit split = partition_class(rows, params, strategy,
                                       DeriveSeed(params.seed, "partition", c));
    if (split.deficient) deficient.push_back(c);
    for (size_t j = 0; j < split.subsets.size(); ++j)
      for (int local : split.subsets[j]) subclass[members[local]] = static_cast<int>(j);
  }
  return SubclassPartition(ds, std::move(subclass), strategy, std::move(deficient));
}

}  // namespace wssda
