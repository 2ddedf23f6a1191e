// src/spectrum.cpp

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

#include "wssda/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "wssda/error.hpp"
#include "wssda/util.hpp"

namespace wssda {

Eigenspectrum eig_symmetric_full(const Eigen::MatrixXd &s) {
  if (s.rows() != s.cols()) Fail(ErrorCode::kContract, "scatter matrix is not square");
  const double norm = s.norm();
  if ((s - s.transpose()).norm() > 1e-10 * norm)
    Fail(ErrorCode::kContract, "matrix is not symmetric");
  const Eigen::Index l = s.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (s + s.transpose()));
  if (solver.info() != Eigen::Success)
    Fail(ErrorCode::kContract, "symmetric eigensolver did not converge");

  Eigenspectrum es;
  es.values = solver.eigenvalues().reverse().cwiseMax(0.0);
  es.vectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index k = 0; k < l; ++k) {
    Eigen::Index arg = 0;
    es.vectors.col(k).cwiseAbs().maxCoeff(&arg);
    if (es.vectors(arg, k) < 0) es.vectors.col(k) *= -1.0;
  }
  if (l > 0 && es.values(0) > 0.0)
    es.rank = static_cast<int>((es.values.array() > es.values(0) * kRankTolerance).count());
  return es;
}

Pivot find_pivot(const Eigenspectrum &es, double med_factor) {
  const int r = es.rank;
  if (r < 3)
    Fail(ErrorCode::kSpectrumTooShort,
         "spectrum rank " + std::to_string(r) + " is below 3; no pivot can be placed");
  std::vector<double> head(es.values.data(), es.values.data() + r);
  std::sort(head.begin(), head.end());
  const double median =
      r % 2 ? head[r / 2] : 0.5 * (head[r / 2 - 1] + head[r / 2]);
  const double cut = med_factor * median;
  int m = r;
  for (int k = 1; k <= r; ++k)
    if (es.values(k - 1) < cut) {
      m = k;
      break;
    }
  m = std::clamp(m, 2, r - 1);
  return {m, es.values(0) == es.values(m - 1)};
}

ModelConstants fit_model(const Eigenspectrum &es, int m) {
  if (m < 2 || m > es.rank)
    Fail(ErrorCode::kContract, "pivot " + std::to_string(m) + " outside [2, rank]");
  const double l1 = es.values(0), lm = es.values(m - 1);
  if (!(lm > 0.0)) Fail(ErrorCode::kPivotAtNull, "pivot eigenvalue is zero");
  if (!(l1 > lm))
    Fail(ErrorCode::kDegenerateModel, "lambda_1 equals lambda_m; the spectrum is flat");
  const double gap = l1 - lm;
  return {l1 * lm * (m - 1) / gap, (m * lm - l1) / gap};
}

SpectrumModel regularize(const Eigenspectrum &es, int m, const ModelConstants &c) {
  const int l = es.dim(), r = es.rank;
  if (m < 2 || m > r) Fail(ErrorCode::kContract, "pivot outside [2, rank]");
  SpectrumModel model;
  model.mode = SpectrumMode::kRegularized;
  model.m = m;
  model.rank = r;
  model.alpha = c.alpha;
  model.beta = c.beta;
  model.lambda_reg.resize(l);
  const double tail = c.alpha / (r + 1 + c.beta);
  for (int k = 1; k <= l; ++k) {
    double v;
    if (k < m)
      v = es.values(k - 1);
    else if (k <= r)
      v = c.alpha / (k + c.beta);
    else
      v = tail;
    model.lambda_reg(k - 1) = v;
  }
  model.weights = model.lambda_reg.cwiseSqrt().cwiseInverse();
  return model;
}

SpectrumModel flat_model(const Eigenspectrum &es, int m) {
  if (es.dim() == 0 || !(es.values(0) > 0.0))
    Fail(ErrorCode::kDegenerateModel, "zero spectrum cannot be whitened");
  SpectrumModel model;
  model.mode = SpectrumMode::kRegularized;
  model.m = m;
  model.rank = es.rank;
  model.flat = true;
  model.lambda_reg = Eigen::VectorXd::Constant(es.dim(), es.values(0));
  model.weights = model.lambda_reg.cwiseSqrt().cwiseInverse();
  return model;
}

SpectrumModel regularized_model(const Eigenspectrum &es, double med_factor,
                                bool allow_flat) {
  Pivot p = find_pivot(es, med_factor);
  if (p.flat) {
    if (allow_flat) return flat_model(es, p.m);
    Fail(ErrorCode::kDegenerateModel,
         "within-subclass spectrum is flat up to the pivot (m = " + std::to_string(p.m) +
             ", lambda_1 = " + FormatDouble(es.values(0)) +
             "); enable the flat-spectrum fallback or change med_factor");
  }
  return regularize(es, p.m, fit_model(es, p.m));
}

SpectrumModel truncated_weights(const Eigenspectrum &es) {
  SpectrumModel model;
  model.mode = SpectrumMode::kTruncatedBaseline;
  model.rank = es.rank;
  model.lambda_reg = es.values;
  model.weights = Eigen::VectorXd::Zero(es.dim());
  for (int k = 0; k < es.rank; ++k) model.weights(k) = 1.0 / std::sqrt(es.values(k));
  model.usable = es.rank > 0;
  return model;
}

void save_spectrum_csv(const Eigenspectrum &es, const SpectrumModel &model,
                       const std::string &path) {
  std::string out = "k,lambda,lambda_reg,weight\n";
  for (int k = 0; k < es.dim(); ++k)
    out += std::to_string(k + 1) + ',' + FormatDouble(es.values(k)) + ',' +
           FormatDouble(model.lambda_reg(k)) + ',' + FormatDouble(model.weights(k)) + '\n';
  AtomicWriteFile(path, out);
}

}  // namespace wssda
