// tests/test_partition.cpp

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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "support/test_util.hpp"
#include "wssda/partition.hpp"

using wssda::ErrorCode;
using wssda::IndexSet;
using wssda::PartitionStrategy;

namespace {

Eigen::MatrixXd Points(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd x(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto &r : rows) {
    int k = 0;
    for (double v : r) x(i, k++) = v;
    ++i;
  }
  return x;
}

IndexSet Sorted(IndexSet s) {
  std::sort(s.begin(), s.end());
  return s;
}

// Checks that `sets` are non-empty, disjoint and cover 0..m-1.
void CheckCover(const std::vector<IndexSet> &sets, int m) {
  std::vector<int> seen(m, 0);
  for (const auto &s : sets) {
    CHECK_FALSE(s.empty());
    for (int i : s) {
      REQUIRE(i >= 0);
      REQUIRE(i < m);
      ++seen[i];
    }
  }
  for (int i = 0; i < m; ++i) CHECK(seen[i] == 1);
}

const PartitionStrategy kComputed[] = {PartitionStrategy::kKDTree, PartitionStrategy::kRPTree,
                                       PartitionStrategy::kPCATree, PartitionStrategy::kKMeans};

}  // namespace

TEST_CASE("split_kd") {
  auto [l1, r1] = wssda::split_kd(Points({{1}, {2}, {3}, {4}}));
  CHECK(Sorted(l1) == IndexSet{0, 1});
  CHECK(Sorted(r1) == IndexSet{2, 3});

  auto [l2, r2] = wssda::split_kd(Points({{0, 0}, {0, 10}, {1, 0}, {1, 10}}));
  CHECK(Sorted(l2) == IndexSet{0, 2});
  CHECK(Sorted(r2) == IndexSet{1, 3});

  auto [l3, r3] = wssda::split_kd(Eigen::MatrixXd::Constant(4, 3, 2.5));
  CHECK(Sorted(l3) == IndexSet{0, 1});
  CHECK(Sorted(r3) == IndexSet{2, 3});

  auto [l4, r4] = wssda::split_kd(Points({{5}, {1}, {3}}));
  CHECK(Sorted(l4) == IndexSet{1, 2});
  CHECK(r4 == IndexSet{0});
}

TEST_CASE("split_rp") {
  std::mt19937_64 rng(3);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(9, 4);
  std::mt19937_64 a(11), b(11);
  auto s1 = wssda::split_rp(x, a);
  auto s2 = wssda::split_rp(x, b);
  CHECK(s1 == s2);
  CheckCover({s1.first, s1.second}, 9);

  // Collinear points: any direction orders them like the line parameter,
  // up to reversal.
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd dir(5);
    for (int k = 0; k < 5; ++k) dir(k) = g(rng);
    Eigen::MatrixXd line(6, 5);
    std::vector<double> t{0.3, -2.0, 1.7, 4.0, -0.5, 2.2};
    for (int i = 0; i < 6; ++i) line.row(i) = t[i] * dir.transpose();
    std::mt19937_64 r(trial);
    auto [left, right] = wssda::split_rp(line, r);
    IndexSet low{1, 4, 0}, high{2, 5, 3};
    bool same = Sorted(left) == Sorted(low) && Sorted(right) == Sorted(high);
    bool flipped = Sorted(left) == Sorted(high) && Sorted(right) == Sorted(low);
    CHECK((same || flipped));
  }

  std::mt19937_64 r2(1);
  auto [l, rr] = wssda::split_rp(Points({{0, 1}, {2, 3}}), r2);
  CHECK(l.size() == 1);
  CHECK(rr.size() == 1);
}

TEST_CASE("split_pca") {
  auto [l1, r1] = wssda::split_pca(Points({{0, 0}, {2, 0}, {10, 0}, {12, 0}}));
  CHECK(Sorted(l1) == IndexSet{0, 1});
  CHECK(Sorted(r1) == IndexSet{2, 3});

  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd diag = Points({{3 * s, 3 * s}, {-1 * s, -1 * s}, {2 * s, 2 * s}, {0, 0}});
  auto [l2, r2] = wssda::split_pca(diag);
  CHECK(Sorted(l2) == IndexSet{1, 3});
  CHECK(Sorted(r2) == IndexSet{0, 2});

  // Splitting along a direction or its negation gives the same two sets.
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(7, 3);
  Eigen::VectorXd v = Eigen::VectorXd::Random(3);
  auto p = wssda::split_along(x, v);
  auto q = wssda::split_along(x, -v);
  // With an odd count the larger half follows the direction.
  Eigen::VectorXd proj = x * v;
  std::vector<int> order(7);
  for (int i = 0; i < 7; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int i, int j) { return proj(i) < proj(j); });
  CHECK(Sorted(p.first) == Sorted(IndexSet(order.begin(), order.begin() + 4)));
  CHECK(Sorted(q.first) == Sorted(IndexSet(order.rbegin(), order.rbegin() + 4)));

  Eigen::MatrixXd even = Eigen::MatrixXd::Random(8, 3);
  auto e1 = wssda::split_along(even, v);
  auto e2 = wssda::split_along(even, -v);
  CHECK(Sorted(e1.first) == Sorted(e2.second));
  CHECK(Sorted(e1.second) == Sorted(e2.first));

  auto [l3, r3] = wssda::split_pca(Eigen::MatrixXd::Ones(4, 2));
  CHECK(Sorted(l3) == IndexSet{0, 1});
  CHECK(Sorted(r3) == IndexSet{2, 3});
}

TEST_CASE("cluster_kmeans agrees with the exhaustive two-clustering") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd x(10, 3);
    for (int i = 0; i < 10; ++i)
      for (int k = 0; k < 3; ++k) x(i, k) = g(rng) * 0.3 + (i % 2 == 0 ? 10.0 : -10.0) * (k == 0);
    auto sets = wssda::cluster_kmeans(x, 2, trial);
    REQUIRE(sets.size() == 2);
    CheckCover(sets, 10);
    auto best = oracle::BestTwoClustering(x);
    for (const auto &s : sets)
      for (int i : s) CHECK(best[i] == best[s[0]]);
  }

  Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 2);
  auto single = wssda::cluster_kmeans(x, 5, 1);
  REQUIRE(single.size() == 5);
  for (const auto &s : single) CHECK(s.size() == 1);
  CheckCover(single, 5);

  Eigen::MatrixXd y = Eigen::MatrixXd::Random(12, 4);
  CHECK(wssda::cluster_kmeans(y, 3, 77) == wssda::cluster_kmeans(y, 3, 77));

  auto dup = wssda::cluster_kmeans(Eigen::MatrixXd::Zero(6, 2), 3, 0);
  REQUIRE(dup.size() == 3);
  CheckCover(dup, 6);
}

TEST_CASE("partition_class edge cases") {
  wssda::TreeParams p;
  p.h = 2;
  for (auto s : kComputed) {
    auto one = wssda::partition_class(Eigen::MatrixXd::Ones(1, 3), p, s, 1);
    CHECK(one.deficient);
    REQUIRE(one.subsets.size() == 1);
    CHECK(one.subsets[0] == IndexSet{0});

    auto eight = wssda::partition_class(Eigen::MatrixXd::Random(8, 3), p, s, 1);
    CHECK_FALSE(eight.deficient);
    REQUIRE(eight.subsets.size() == 2);
    CheckCover(eight.subsets, 8);
  }
  wssda::TreeParams p1;
  p1.h = 1;
  for (auto s : kComputed) {
    auto all = wssda::partition_class(Eigen::MatrixXd::Random(5, 2), p1, s, 1);
    REQUIRE(all.subsets.size() == 1);
    CHECK(Sorted(all.subsets[0]) == IndexSet{0, 1, 2, 3, 4});
  }
}

TEST_CASE("binary trees use log2(h) levels and balanced leaves") {
  std::mt19937_64 rng(2);
  for (auto s : {PartitionStrategy::kKDTree, PartitionStrategy::kRPTree,
                 PartitionStrategy::kPCATree}) {
    for (int t = 0; t <= 4; ++t) {
      wssda::TreeParams p;
      p.h = 1 << t;
      Eigen::MatrixXd x = Eigen::MatrixXd::Random(37, 6);
      auto cs = wssda::partition_class(x, p, s, rng());
      CHECK(cs.depth == t);
      REQUIRE(cs.subsets.size() == static_cast<size_t>(p.h));
      CheckCover(cs.subsets, 37);
      size_t lo = 37, hi = 0;
      for (const auto &leaf : cs.subsets) {
        lo = std::min(lo, leaf.size());
        hi = std::max(hi, leaf.size());
      }
      CHECK(hi - lo <= 1);
    }
  }
}

TEST_CASE("TreeParams validation") {
  wssda::TreeParams p;
  p.h = 3;
  CHECK_WSSDA_ERROR(p.validate(PartitionStrategy::kKDTree), ErrorCode::kConfig);
  CHECK_NOTHROW(p.validate(PartitionStrategy::kKMeans));
  p.h = 0;
  CHECK_WSSDA_ERROR(p.validate(PartitionStrategy::kKMeans), ErrorCode::kConfig);
  p.h = 512;
  CHECK_WSSDA_ERROR(p.validate(PartitionStrategy::kRPTree), ErrorCode::kConfig);
  p.h = 256;
  CHECK_NOTHROW(p.validate(PartitionStrategy::kRPTree));
  p.max_depth = 9;
  CHECK_WSSDA_ERROR(p.validate(PartitionStrategy::kRPTree), ErrorCode::kConfig);
  CHECK(wssda::ParseStrategy("pca") == PartitionStrategy::kPCATree);
  CHECK_WSSDA_ERROR(wssda::ParseStrategy("octree"), ErrorCode::kConfig);
}

TEST_CASE("partition_dataset counts and deficient classes") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(9, 3);
  wssda::LabeledDataset ds(x, {0, 0, 0, 0, 0, 0, 1, 2, 2});
  wssda::TreeParams p;
  p.h = 4;
  auto part = wssda::partition_dataset(ds, p, PartitionStrategy::kKDTree);
  CHECK(part.subclass_counts() == std::vector<int>{4, 1, 2});
  CHECK(part.deficient_classes() == std::vector<int>{1, 2});
  CHECK(part.group_sizes()[0] == std::vector<int>{2, 1, 2, 1});
  CHECK(part.total_subclasses() == 7);
  CHECK_NOTHROW(part.check_against(ds));

  CHECK_WSSDA_ERROR(wssda::partition_dataset(ds, p, PartitionStrategy::kProvided),
                    ErrorCode::kConfig);

  wssda::LabeledDataset labeled(x, {0, 0, 0, 0, 0, 0, 1, 2, 2},
                                std::vector<int>{0, 1, 1, 2, 0, 2, 0, 0, 0});
  auto given = wssda::partition_dataset(labeled, p, PartitionStrategy::kProvided);
  CHECK(given.subclass_counts() == std::vector<int>{3, 1, 1});
  CHECK(given.group_sizes()[0] == std::vector<int>{2, 2, 2});

  CHECK_WSSDA_ERROR(
      wssda::SubclassPartition(ds, {0, 0, 2, 2, 0, 0, 0, 0, 0}, PartitionStrategy::kProvided),
      ErrorCode::kPartition);
}

TEST_CASE("per-class RNG streams make partitioning deterministic") {
  wssda::SynthSpec spec;
  spec.class_count = 4;
  spec.dim = 6;
  spec.seed = 9;
  auto ds = wssda::generate_synthetic(spec);
  wssda::TreeParams p;
  p.h = 4;
  p.seed = 123;
  for (auto s : kComputed) {
    auto a = wssda::partition_dataset(ds, p, s);
    auto b = wssda::partition_dataset(ds, p, s);
    CHECK(a.subclass_of() == b.subclass_of());
  }
}

TEST_CASE("subclass means never increase the squared deviation") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(13, 5) * (trial + 1);
    std::vector<int> all(13);
    for (int i = 0; i < 13; ++i) all[i] = i;
    const double whole = oracle::SumSquaredDeviation(x, all);
    for (auto s : kComputed) {
      wssda::TreeParams p;
      p.h = 4;
      auto cs = wssda::partition_class(x, p, s, rng());
      double parts = 0.0;
      for (const auto &leaf : cs.subsets) parts += oracle::SumSquaredDeviation(x, leaf);
      CHECK(parts <= whole * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("partition CSV export") {
  testutil::TempDir dir;
  wssda::LabeledDataset ds(Eigen::MatrixXd::Random(4, 2), {0, 0, 1, 1});
  wssda::SubclassPartition part(ds, {0, 1, 0, 0}, PartitionStrategy::kProvided);
  part.save_csv(dir.file("p.csv"));
  CHECK(testutil::ReadFile(dir.file("p.csv")) ==
        "sample,class,subclass\n0,0,0\n1,0,1\n2,1,0\n3,1,0\n");
}
