// tests/test_eval.cpp

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
#include "wssda/eval.hpp"

using wssda::ErrorCode;
using wssda::ScoredPair;

namespace {

std::vector<ScoredPair> Pairs(const std::vector<double> &same, const std::vector<double> &diff) {
  std::vector<ScoredPair> out;
  for (double s : same) out.push_back({s, true});
  for (double s : diff) out.push_back({s, false});
  return out;
}

}  // namespace

TEST_CASE("cosine distance") {
  CHECK(wssda::cosine_distance(Eigen::Vector2d(3, 4), Eigen::Vector2d(3, 4)) ==
        doctest::Approx(0.0));
  CHECK(wssda::cosine_distance(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)) ==
        doctest::Approx(1.0));
  CHECK(wssda::cosine_distance(Eigen::Vector2d(1, 0), Eigen::Vector2d(-1, 0)) ==
        doctest::Approx(2.0));
  CHECK_WSSDA_ERROR(wssda::cosine_distance(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)),
                    ErrorCode::kContract);
  CHECK_WSSDA_ERROR(wssda::cosine_distance(Eigen::Vector2d(1, 0), Eigen::Vector3d(1, 0, 0)),
                    ErrorCode::kContract);
}

TEST_CASE("nearest neighbour rules") {
  Eigen::MatrixXd g(3, 2);
  g << 1, 0, 0, 1, 1, 1;
  std::vector<int> labels{4, 7, 9};
  CHECK(wssda::nn_classify(g, labels, Eigen::Vector2d(0, 1)) == 7);
  Eigen::MatrixXd tie(2, 2);
  tie << 1, 0, 0, 1;
  CHECK(wssda::nn_classify(tie, std::vector<int>{5, 3}, Eigen::Vector2d(1, 1)) == 5);
  CHECK_WSSDA_ERROR(wssda::nn_classify(g, labels, Eigen::Vector3d(1, 0, 0)),
                    ErrorCode::kContract);
}

TEST_CASE("nearest neighbour decisions ignore positive scaling") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.01, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd g(6, 4);
    for (int i = 0; i < 6; ++i)
      for (int k = 0; k < 4; ++k) g(i, k) = n(rng);
    Eigen::VectorXd p(4);
    for (int k = 0; k < 4; ++k) p(k) = n(rng);
    std::vector<int> labels{0, 1, 2, 3, 4, 5};
    const int base = wssda::nn_classify(g, labels, p);
    CHECK(wssda::nn_classify(g, labels, u(rng) * p) == base);
    CHECK(wssda::nn_classify(g * u(rng), labels, p) == base);
  }
}

TEST_CASE("identification error and sweeps") {
  Eigen::MatrixXd g(2, 2);
  g << 1, 0, 0, 1;
  Eigen::MatrixXd p(3, 2);
  p << 2, 0.1, 0.2, 3, 1, 0.2;
  CHECK(wssda::identification_error(g, std::vector<int>{0, 1}, p, std::vector<int>{0, 1, 1}) ==
        doctest::Approx(1.0 / 3.0));

  wssda::LabeledDataset ds(Eigen::MatrixXd::Random(6, 3), {0, 0, 0, 1, 1, 1});
  auto splits = wssda::make_gallery_probe_splits(ds, 3);
  auto factory = [](const wssda::LabeledDataset &, const wssda::SplitSpec &) {
    return wssda::FeatureExtractor(Eigen::MatrixXd::Identity(3, 3), wssda::ExtractorMeta{});
  };
  auto report = wssda::identification_sweep(factory, ds, splits, std::vector<int>{1, 3});
  CHECK(report.d_values == std::vector<int>{1, 3});
  CHECK(report.per_split.size() == 3);
  for (double e : report.error) {
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
  }
  CHECK_WSSDA_ERROR(wssda::identification_sweep(factory, ds, splits, std::vector<int>{3, 1}),
                    ErrorCode::kConfig);
  CHECK_WSSDA_ERROR(wssda::identification_sweep(factory, ds, splits, std::vector<int>{4}),
                    ErrorCode::kConfig);

  testutil::TempDir dir;
  wssda::save_identification_csv(report, dir.file("id.csv"));
  auto text = testutil::ReadFile(dir.file("id.csv"));
  CHECK(text.rfind("d,error\n1,", 0) == 0);
}

TEST_CASE("random labels give chance-level identification") {
  const int C = 5, per = 20;
  double total = 0.0;
  for (int seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    Eigen::MatrixXd x(C * per, 4);
    for (int i = 0; i < x.rows(); ++i)
      for (int k = 0; k < 4; ++k) x(i, k) = n(rng);
    std::vector<int> labels(C * per);
    for (int i = 0; i < C * per; ++i) labels[i] = i % C;
    std::shuffle(labels.begin(), labels.end(), rng);
    wssda::LabeledDataset ds(x, labels);
    auto splits = wssda::make_gallery_probe_splits(ds, 4);
    auto factory = [](const wssda::LabeledDataset &, const wssda::SplitSpec &) {
      return wssda::FeatureExtractor(Eigen::MatrixXd::Identity(4, 4), wssda::ExtractorMeta{});
    };
    total += wssda::identification_sweep(factory, ds, splits, std::vector<int>{1}).error[0];
  }
  CHECK(total / 10 == doctest::Approx(1.0 - 1.0 / C).epsilon(0.05));
}

TEST_CASE("hand-built ROC") {
  auto roc = wssda::verification_roc(Pairs({0.9, 0.8}, {0.7, 0.1}));
  CHECK(roc.eer == 0.0);
  CHECK(roc.threshold_at_eer > 0.7);
  CHECK(roc.threshold_at_eer < 0.8);
  CHECK(roc.points.front().far == 0.0);
  CHECK(roc.points.front().tar == 0.0);
  CHECK(roc.points.back().far == 1.0);
  CHECK(roc.points.back().tar == 1.0);

  // Fully inverted scores.
  auto worst = wssda::verification_roc(Pairs({0.1, 0.2}, {0.8, 0.9}));
  CHECK(worst.eer == doctest::Approx(1.0));

  auto half = wssda::verification_roc(Pairs({0.9, 0.2}, {0.8, 0.1}));
  CHECK(half.eer == doctest::Approx(0.5));

  CHECK_WSSDA_ERROR(wssda::verification_roc(Pairs({0.3}, {})), ErrorCode::kProtocol);
  CHECK_WSSDA_ERROR(wssda::verification_roc(Pairs({}, {0.3})), ErrorCode::kProtocol);
}

TEST_CASE("ROC points match a brute-force threshold counter") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> coarse(0, 20);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> scores(100);
    std::vector<bool> same(100);
    std::vector<ScoredPair> pairs;
    for (int i = 0; i < 100; ++i) {
      same[i] = i % 3 == 0;
      // Coarse scores force ties.
      scores[i] = coarse(rng) / 20.0 + (same[i] ? 0.1 : 0.0);
      pairs.push_back({scores[i], same[i]});
    }
    auto roc = wssda::verification_roc(pairs);
    std::vector<double> distinct(scores);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    REQUIRE(roc.points.size() == distinct.size() + 1);
    for (size_t i = 1; i < roc.points.size(); ++i) {
      auto [far, tar] = oracle::CountRates(scores, same, roc.points[i].threshold);
      CHECK(roc.points[i].far == far);
      CHECK(roc.points[i].tar == tar);
      CHECK(roc.points[i].far >= roc.points[i - 1].far);
      CHECK(roc.points[i].tar >= roc.points[i - 1].tar);
    }
    CHECK(roc.eer >= 0.0);
    CHECK(roc.eer <= 1.0);
  }
}

TEST_CASE("EER ignores strictly increasing score transforms") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ScoredPair> a, b;
    for (int i = 0; i < 60; ++i) {
      const bool same = i % 2 == 0;
      const double s = n(rng) + (same ? 0.8 : 0.0);
      a.push_back({s, same});
      b.push_back({std::exp(3.0 * s) + 7.0, same});
    }
    CHECK(wssda::verification_roc(a).eer == wssda::verification_roc(b).eer);
  }
}

TEST_CASE("identically distributed scores give EER near one half") {
  double sum = 0.0;
  for (int seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    std::vector<ScoredPair> pairs;
    for (int i = 0; i < 2000; ++i) pairs.push_back({n(rng), i % 2 == 0});
    sum += wssda::verification_roc(pairs).eer;
  }
  CHECK(std::abs(sum / 10 - 0.5) <= 0.02);
}

TEST_CASE("k-fold verification") {
  std::vector<ScoredPair> block = Pairs({0.9, 0.6, 0.4}, {0.5, 0.2, 0.1});
  std::vector<ScoredPair> all;
  std::vector<int> fold_of;
  for (int f = 0; f < 4; ++f)
    for (const auto &p : block) {
      all.push_back(p);
      fold_of.push_back(f);
    }
  auto same = wssda::kfold_pairwise(all, fold_of, 4);
  CHECK(same.fold_eer.size() == 4);
  CHECK(same.std_eer == 0.0);
  CHECK(same.mean_eer == same.fold_eer[0]);
  CHECK(same.far_grid.size() == 101);
  CHECK(same.mean_tar.back() == 1.0);

  auto one = wssda::kfold_pairwise(block, std::vector<int>(6, 0), 1);
  CHECK(one.mean_eer == wssda::verification_roc(block).eer);

  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  std::vector<ScoredPair> noisy;
  std::vector<int> folds;
  for (int i = 0; i < 500; ++i) {
    const bool s = i % 2 == 0;
    noisy.push_back({n(rng) + (s ? 1.0 : 0.0), s});
    folds.push_back((i / 2) % 10);
  }
  auto rep = wssda::kfold_pairwise(noisy, folds, 10);
  auto [lo, hi] = std::minmax_element(rep.fold_eer.begin(), rep.fold_eer.end());
  CHECK(rep.mean_eer >= *lo);
  CHECK(rep.mean_eer <= *hi);
  CHECK(rep.std_eer > 0.0);
  for (size_t g = 1; g < rep.mean_tar.size(); ++g) CHECK(rep.mean_tar[g] >= rep.mean_tar[g - 1]);

  std::vector<int> lopsided(6, 0);
  lopsided[3] = 1;
  CHECK_WSSDA_ERROR(wssda::kfold_pairwise(block, lopsided, 2), ErrorCode::kProtocol);
}

TEST_CASE("pairs files") {
  testutil::TempDir dir;
  testutil::WriteFile(dir.file("p.csv"), "index_a,index_b,label\n0,1,same\n2,3,diff\n\n4,5,same\n");
  auto pairs = wssda::load_pairs_csv(dir.file("p.csv"));
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].same);
  CHECK_FALSE(pairs[1].same);
  CHECK(pairs[2].a == 4);
  CHECK(wssda::assign_folds(pairs, 3) == std::vector<int>{0, 1, 2});
  CHECK(wssda::assign_folds(pairs, 2) == std::vector<int>{0, 0, 1});

  testutil::WriteFile(dir.file("f.csv"), "0,1,same,1\n2,3,diff,0\n");
  CHECK(wssda::assign_folds(wssda::load_pairs_csv(dir.file("f.csv")), 2) ==
        std::vector<int>{1, 0});

  testutil::WriteFile(dir.file("bad.csv"), "0,1,same\n2,x,diff\n");
  try {
    wssda::load_pairs_csv(dir.file("bad.csv"));
    FAIL("expected a parse error");
  } catch (const wssda::Error &e) {
    CHECK(e.code() == ErrorCode::kParse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  Eigen::MatrixXd feats = Eigen::MatrixXd::Identity(4, 4) + Eigen::MatrixXd::Constant(4, 4, 0.1);
  CHECK_WSSDA_ERROR(wssda::score_pairs(feats, pairs), ErrorCode::kConfig);
  std::vector<wssda::LabeledPair> ok{{0, 0, true, -1}, {0, 1, false, -1}};
  auto scored = wssda::score_pairs(feats, ok);
  CHECK(scored[0].score == doctest::Approx(1.0));
  CHECK(scored[1].score < 1.0);
}

TEST_CASE("verification CSV reports") {
  testutil::TempDir dir;
  auto rep = wssda::kfold_pairwise(Pairs({0.9, 0.8}, {0.7, 0.1}), std::vector<int>(4, 0), 1, 3);
  wssda::save_roc_csv(rep, dir.file("roc.csv"));
  wssda::save_eer_csv(rep, dir.file("eer.csv"));
  CHECK(testutil::ReadFile(dir.file("roc.csv")) == "far,tar\n0,1\n0.5,1\n1,1\n");
  CHECK(testutil::ReadFile(dir.file("eer.csv")) ==
        "fold,eer,eer_percent\n0,0,0.00\nmean,0,0.00\nstd,0,0.00\n");
}

TEST_CASE("ten folds over five thousand pairs") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> n;
  std::vector<wssda::LabeledPair> labeled;
  for (int i = 0; i < 5000; ++i) labeled.push_back({i % 50, (i + 7) % 50, i % 2 == 0, -1});
  auto folds = wssda::assign_folds(labeled, 10);
  std::vector<ScoredPair> scored;
  for (const auto &p : labeled) scored.push_back({n(rng) + (p.same ? 1.5 : 0.0), p.same});
  auto rep = wssda::kfold_pairwise(scored, folds, 10);
  CHECK(rep.fold_eer.size() == 10);
  CHECK(std::count(folds.begin(), folds.end(), 3) == 500);
  CHECK(rep.mean_eer > 0.0);
  CHECK(rep.mean_eer < 0.5);
}
