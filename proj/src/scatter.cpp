// src/scatter.cpp

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

#include "wssda/scatter.hpp"

#include <algorithm>
#include <cmath>

#include "wssda/error.hpp"
#include "wssda/util.hpp"

namespace wssda {

namespace {

// S = D^T D for deviations already scaled by sqrt(weight), symmetrized.
Eigen::MatrixXd Gram(const Eigen::MatrixXd &scaled_deviations) {
  Eigen::MatrixXd s = scaled_deviations.transpose() * scaled_deviations;
  return 0.5 * (s + s.transpose());
}

std::vector<int> SubclassOffsets(const SubclassPartition &part) {
  const auto &H = part.subclass_counts();
  std::vector<int> offset(H.size() + 1, 0);
  for (size_t c = 0; c < H.size(); ++c) offset[c + 1] = offset[c] + H[c];
  return offset;
}

}  // namespace

ScatterMatrix within_class_scatter(const LabeledDataset &ds) {
  const int n = ds.size(), l = ds.dim(), C = ds.class_count();
  const auto &x = ds.samples();
  const auto &labels = ds.class_labels();
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(C, l);
  std::vector<int> counts = ds.class_sizes();
  for (int i = 0; i < n; ++i) means.row(labels[i]) += x.row(i);
  for (int c = 0; c < C; ++c) means.row(c) /= counts[c];
  Eigen::MatrixXd dev(n, l);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) dev.row(i) = scale * (x.row(i) - means.row(labels[i]));
  return {Gram(dev), ScatterKind::kWithinClass, std::min(l, n - C)};
}

GroupMeans compute_group_means(const Eigen::MatrixXd &x, const SubclassPartition &part) {
  const int n = static_cast<int>(x.rows());
  const Eigen::Index l = x.cols();
  if (n != static_cast<int>(part.class_of().size()))
    Fail(ErrorCode::kPartition, "partition size does not match the data");
  const int C = part.class_count();
  const auto offset = SubclassOffsets(part);
  const auto &cls = part.class_of();
  const auto &sub = part.subclass_of();

  GroupMeans g;
  g.class_means = Eigen::MatrixXd::Zero(C, l);
  g.subclass_means = Eigen::MatrixXd::Zero(offset.back(), l);
  std::vector<int> class_n(C, 0);
  for (int i = 0; i < n; ++i) {
    g.class_means.row(cls[i]) += x.row(i);
    g.subclass_means.row(offset[cls[i]] + sub[i]) += x.row(i);
    ++class_n[cls[i]];
  }
  for (int c = 0; c < C; ++c) {
    g.class_means.row(c) /= class_n[c];
    for (int j = 0; j < part.subclass_counts()[c]; ++j)
      g.subclass_means.row(offset[c] + j) /= part.group_sizes()[c][j];
  }
  g.global_mean = g.class_means.colwise().mean().transpose();
  return g;
}

ScatterMatrix within_subclass_scatter(const LabeledDataset &ds,
                                      const SubclassPartition &part) {
  part.check_against(ds);
  const int n = ds.size(), l = ds.dim(), C = part.class_count();
  const auto &x = ds.samples();
  const auto offset = SubclassOffsets(part);
  const auto &cls = part.class_of();
  const auto &sub = part.subclass_of();
  const auto &H = part.subclass_counts();
  const auto &G = part.group_sizes();
  GroupMeans g = compute_group_means(x, part);

  Eigen::MatrixXd dev(n, l);
  int bound = 0;
  for (int c = 0; c < C; ++c)
    for (int gij : G[c]) bound += gij - 1;
  for (int i = 0; i < n; ++i) {
    const int c = cls[i], j = sub[i];
    const double w = 1.0 / (static_cast<double>(C) * H[c] * G[c][j]);
    dev.row(i) = std::sqrt(w) * (x.row(i) - g.subclass_means.row(offset[c] + j));
  }
  return {Gram(dev), ScatterKind::kWithinSubclass, std::min(l, bound)};
}

ScatterMatrix between_subclass_scatter(const Eigen::MatrixXd &subclass_means,
                                       const Eigen::VectorXd &global_mean,
                                       const SubclassPartition &part) {
  const auto offset = SubclassOffsets(part);
  if (subclass_means.rows() != offset.back())
    Fail(ErrorCode::kContract, "subclass mean count does not match the partition");
  const int C = part.class_count();
  const auto &H = part.subclass_counts();
  Eigen::MatrixXd dev(subclass_means.rows(), subclass_means.cols());
  for (int c = 0; c < C; ++c) {
    const double scale = std::sqrt(1.0 / (static_cast<double>(C) * H[c]));
    for (int j = 0; j < H[c]; ++j)
      dev.row(offset[c] + j) =
          scale * (subclass_means.row(offset[c] + j) - global_mean.transpose());
  }
  const int l = static_cast<int>(subclass_means.cols());
  return {Gram(dev), ScatterKind::kBetweenSubclass, std::min(l, offset.back() - 1)};
}

ScatterMatrix total_subclass_scatter(const Eigen::MatrixXd &y,
                                     std::span<const int> class_labels,
                                     const Eigen::VectorXd &global_mean) {
  const int n = static_cast<int>(y.rows());
  if (static_cast<int>(class_labels.size()) != n)
    Fail(ErrorCode::kContract, "label count does not match the data");
  const int C = *std::max_element(class_labels.begin(), class_labels.end()) + 1;
  std::vector<int> counts(C, 0);
  for (int c : class_labels) ++counts[c];
  Eigen::MatrixXd dev(n, y.cols());
  for (int i = 0; i < n; ++i) {
    const double w = 1.0 / (static_cast<double>(C) * counts[class_labels[i]]);
    dev.row(i) = std::sqrt(w) * (y.row(i) - global_mean.transpose());
  }
  const int l = static_cast<int>(y.cols());
  return {Gram(dev), ScatterKind::kTotalSubclass, std::min(l, n)};
}

int numerical_rank(const Eigen::MatrixXd &symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd &v = es.eigenvalues();
  if (v.size() == 0) return 0;
  const double top = v.maxCoeff();
  if (!(top > 0.0)) return 0;
  return static_cast<int>((v.array() > top * 1e-12).count());
}

void save_matrix_csv(const Eigen::MatrixXd &m, const std::string &path) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += FormatDouble(m(r, c));
    }
    out += '\n';
  }
  AtomicWriteFile(path, out);
}

}  // namespace wssda
