// tests/support/oracles.hpp

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

// Independent reference computations used only by tests. Nothing here calls
// into the library's numerical routines.

#ifndef WSSDA_TESTS_ORACLES_HPP_
#define WSSDA_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Cyclic Jacobi rotations on a small symmetric matrix. Returns eigenvalues
/// in descending order with matching eigenvector columns.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> JacobiEigen(Eigen::MatrixXd a) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(n, n);
  for (int k = 0; k < n; ++k) {
    values(k) = a(order[k], order[k]);
    vectors.col(k) = v.col(order[k]);
  }
  return {values, vectors};
}

/// Random symmetric PSD matrix B B^T with B of size l x rank.
inline Eigen::MatrixXd RandomPsd(int l, int rank, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd b(l, rank);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < rank; ++j) b(i, j) = g(rng);
  Eigen::MatrixXd s = b * b.transpose();
  return 0.5 * (s + s.transpose());
}

inline double SumSquaredDeviation(const Eigen::MatrixXd &x, const std::vector<int> &rows) {
  Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(x.cols());
  for (int r : rows) mean += x.row(r);
  mean /= static_cast<double>(rows.size());
  double s = 0.0;
  for (int r : rows) s += (x.row(r) - mean).squaredNorm();
  return s;
}

/// Exhaustive minimum-SSE split of the rows into two non-empty groups.
inline std::vector<int> BestTwoClustering(const Eigen::MatrixXd &x) {
  const int m = static_cast<int>(x.rows());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_assign;
  for (unsigned mask = 1; mask < (1u << (m - 1)); ++mask) {
    std::vector<int> a, b;
    for (int i = 0; i < m; ++i) ((mask >> i) & 1u ? a : b).push_back(i);
    double cost = SumSquaredDeviation(x, a) + SumSquaredDeviation(x, b);
    if (cost < best) {
      best = cost;
      best_assign.assign(m, 0);
      for (int i : a) best_assign[i] = 1;
    }
  }
  return best_assign;
}

/// FAR/TAR of accepting score >= threshold, by direct counting.
inline std::pair<double, double> CountRates(const std::vector<double> &scores,
                                            const std::vector<bool> &same,
                                            double threshold) {
  double acc_same = 0, acc_diff = 0, n_same = 0, n_diff = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (same[i]) {
      ++n_same;
      if (scores[i] >= threshold) ++acc_same;
    } else {
      ++n_diff;
      if (scores[i] >= threshold) ++acc_diff;
    }
  }
  return {acc_diff / n_diff, acc_same / n_same};
}

/// One-sided sign test: P(X >= wins) for X ~ Binomial(wins + losses, 1/2).
inline double SignTestPValue(int wins, int losses) {
  const int n = wins + losses;
  if (n == 0) return 1.0;
  double p = 0.0;
  for (int k = wins; k <= n; ++k) {
    double log_c = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    p += std::exp(log_c - n * std::log(2.0));
  }
  return std::min(1.0, p);
}

}  // namespace oracle

#endif  // WSSDA_TESTS_ORACLES_HPP_
