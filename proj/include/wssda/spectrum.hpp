// include/wssda/spectrum.hpp

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

#ifndef WSSDA_SPECTRUM_HPP_
#define WSSDA_SPECTRUM_HPP_

#include <string>

#include <Eigen/Dense>

#include "wssda/scatter.hpp"

namespace wssda {

/// Relative threshold (to the largest eigenvalue) below which an eigenvalue
/// counts as null.
inline constexpr double kRankTolerance = 1e-12;

/// Full eigenbasis of a symmetric PSD matrix. Index k in the vectors is
/// zero-based; the text below uses 1-based k as is usual for spectra.
struct Eigenspectrum {
  /// Descending, negatives clamped to zero.
  Eigen::VectorXd values;
  /// Column k pairs with values(k). Sign fixed so the largest-magnitude
  /// component is positive.
  Eigen::MatrixXd vectors;
  /// Number of values above values(0) * kRankTolerance.
  int rank = 0;

  int dim() const { return static_cast<int>(values.size()); }
  Eigen::VectorXd tau() const { return values.cwiseSqrt(); }
};

/// Throws Error(kContract) when `s` is not symmetric to 1e-10 (relative
/// Frobenius).
Eigenspectrum eig_symmetric_full(const Eigen::MatrixXd &s);
inline Eigenspectrum eig_symmetric_full(const ScatterMatrix &s) {
  return eig_symmetric_full(s.matrix);
}

struct Pivot {
  /// 1-based pivot index m.
  int m = 0;
  /// lambda_1 == lambda_m after clamping; no 1/f model can be fitted.
  bool flat = false;
};

/// m is the first k whose eigenvalue drops below med_factor times the median
/// of the non-null eigenvalues, clamped to [2, r - 1]. Requires r >= 3.
Pivot find_pivot(const Eigenspectrum &es, double med_factor = 1.0);

struct ModelConstants {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Constants of lambda_k ~ alpha / (k + beta) through (1, lambda_1) and
/// (m, lambda_m).
ModelConstants fit_model(const Eigenspectrum &es, int m);

enum class SpectrumMode { kRegularized, kTruncatedBaseline };

struct SpectrumModel {
  SpectrumMode mode = SpectrumMode::kRegularized;
  int m = 0;
  int rank = 0;
  double alpha = 0.0;
  double beta = 0.0;
  bool flat = false;
  /// False for a truncated model of the zero matrix.
  bool usable = true;
  /// Regularized spectrum (the raw spectrum in truncated mode).
  Eigen::VectorXd lambda_reg;
  /// Per-dimension scaling applied to the eigenvectors.
  Eigen::VectorXd weights;
};

/// Regularized spectrum:
///   k <  m       : lambda_k
///   m <= k <= r  : alpha / (k + beta)
///   k >  r       : alpha / (r + 1 + beta)
/// with weights 1 / sqrt(lambda_reg).
SpectrumModel regularize(const Eigenspectrum &es, int m,
                         const ModelConstants &constants);

/// Flat fallback: every dimension gets lambda_1.
SpectrumModel flat_model(const Eigenspectrum &es, int m);

/// Pivot, fit and regularize in one step. A flat spectrum throws
/// Error(kDegenerateModel) unless `allow_flat` is set.
SpectrumModel regularized_model(const Eigenspectrum &es, double med_factor,
                                bool allow_flat);

/// Whitening with truncation: 1/sqrt(lambda_k) on the range, 0 on the
/// null space.
SpectrumModel truncated_weights(const Eigenspectrum &es);

/// CSV with header `k,lambda,lambda_reg,weight` (k is 1-based).
void save_spectrum_csv(const Eigenspectrum &es, const SpectrumModel &model,
                       const std::string &path);

}  // namespace wssda

#endif  // WSSDA_SPECTRUM_HPP_
