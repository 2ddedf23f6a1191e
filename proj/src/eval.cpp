// src/eval.cpp

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

#include "wssda/eval.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "wssda/error.hpp"
#include "wssda/util.hpp"

namespace wssda {

double cosine_distance(const Eigen::Ref<const Eigen::VectorXd> &a,
                       const Eigen::Ref<const Eigen::VectorXd> &b) {
  if (a.size() != b.size())
    Fail(ErrorCode::kContract, "cosine distance of vectors with different dimensions");
  const double na = a.norm(), nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0))
    Fail(ErrorCode::kContract, "cosine distance of a zero vector (degenerate features)");
  return std::clamp(1.0 - a.dot(b) / (na * nb), 0.0, 2.0);
}

int nn_classify(const Eigen::MatrixXd &gallery, std::span<const int> gallery_labels,
                const Eigen::Ref<const Eigen::VectorXd> &probe) {
  if (gallery.rows() == 0) Fail(ErrorCode::kContract, "empty gallery");
  if (static_cast<Eigen::Index>(gallery_labels.size()) != gallery.rows())
    Fail(ErrorCode::kContract, "gallery label count does not match the gallery");
  if (gallery.cols() != probe.size())
    Fail(ErrorCode::kContract, "probe dimension does not match the gallery");
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (Eigen::Index g = 0; g < gallery.rows(); ++g) {
    const double dist = cosine_distance(gallery.row(g).transpose(), probe);
    if (dist < best_dist) {
      best_dist = dist;
      best = static_cast<int>(g);
    }
  }
  return gallery_labels[best];
}

double identification_error(const Eigen::MatrixXd &gallery,
                            std::span<const int> gallery_labels,
                            const Eigen::MatrixXd &probes,
                            std::span<const int> probe_labels) {
  if (probes.rows() == 0) Fail(ErrorCode::kProtocol, "no probes to identify");
  if (static_cast<Eigen::Index>(probe_labels.size()) != probes.rows())
    Fail(ErrorCode::kContract, "probe label count does not match the probes");
  int wrong = 0;
  for (Eigen::Index p = 0; p < probes.rows(); ++p)
    if (nn_classify(gallery, gallery_labels, probes.row(p).transpose()) != probe_labels[p])
      ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(probes.rows());
}

IdentificationReport identification_sweep(const ExtractorFactory &factory,
                                          const LabeledDataset &ds,
                                          std::span<const SplitSpec> splits,
                                          std::span<const int> d_values) {
  if (d_values.empty()) Fail(ErrorCode::kConfig, "no feature counts to sweep");
  for (size_t j = 0; j < d_values.size(); ++j) {
    if (d_values[j] < 1) Fail(ErrorCode::kConfig, "feature counts must be positive");
    if (j && d_values[j] <= d_values[j - 1])
      Fail(ErrorCode::kConfig, "feature counts must be strictly increasing");
  }
  if (splits.empty()) Fail(ErrorCode::kProtocol, "no splits to evaluate");

  IdentificationReport report;
  report.d_values.assign(d_values.begin(), d_values.end());
  report.error.assign(d_values.size(), 0.0);
  for (const SplitSpec &split : splits) {
    if (split.gallery.empty() || split.probe.empty())
      Fail(ErrorCode::kProtocol, "every split needs gallery and probe samples");
    FeatureExtractor fx = factory(ds, split);
    if (fx.feature_count() < d_values.back())
      Fail(ErrorCode::kConfig, "d = " + std::to_string(d_values.back()) +
                                   " exceeds the model's " +
                                   std::to_string(fx.feature_count()) + " features");
    auto gather = [&](const std::vector<int> &idx, std::vector<int> &labels) {
      Eigen::MatrixXd rows(static_cast<Eigen::Index>(idx.size()), ds.dim());
      labels.resize(idx.size());
      for (size_t r = 0; r < idx.size(); ++r) {
        if (idx[r] < 0 || idx[r] >= ds.size())
          Fail(ErrorCode::kContract, "split index out of range");
        rows.row(static_cast<Eigen::Index>(r)) = ds.samples().row(idx[r]);
        labels[r] = ds.class_labels()[idx[r]];
      }
      return fx.extract_rows(rows);
    };
    std::vector<int> gallery_labels, probe_labels;
    const Eigen::MatrixXd gallery = gather(split.gallery, gallery_labels);
    const Eigen::MatrixXd probes = gather(split.probe, probe_labels);
    std::vector<double> row;
    for (int d : d_values)
      row.push_back(identification_error(gallery.leftCols(d), gallery_labels,
                                         probes.leftCols(d), probe_labels));
    report.per_split.push_back(std::move(row));
  }
  for (size_t j = 0; j < d_values.size(); ++j) {
    double sum = 0.0;
    for (const auto &row : report.per_split) sum += row[j];
    report.error[j] = sum / static_cast<double>(report.per_split.size());
  }
  return report;
}

void save_identification_csv(const IdentificationReport &report, const std::string &path) {
  std::string out = "d,error\n";
  for (size_t j = 0; j < report.d_values.size(); ++j)
    out += std::to_string(report.d_values[j]) + ',' + FormatDouble(report.error[j]) + '\n';
  AtomicWriteFile(path, out);
}

RocReport verification_roc(std::span<const ScoredPair> pairs) {
  size_t n_same = 0, n_diff = 0;
  for (const auto &p : pairs) (p.same ? n_same : n_diff) += 1;
  if (n_same == 0 || n_diff == 0)
    Fail(ErrorCode::kProtocol, "verification needs both same and different pairs");

  std::vector<ScoredPair> sorted(pairs.begin(), pairs.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredPair &a, const ScoredPair &b) { return a.score > b.score; });

  RocReport roc;
  roc.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  size_t acc_same = 0, acc_diff = 0;
  for (size_t i = 0; i < sorted.size();) {
    const double t = sorted[i].score;
    for (; i < sorted.size() && sorted[i].score == t; ++i)
      (sorted[i].same ? acc_same : acc_diff) += 1;
    roc.points.push_back({static_cast<double>(acc_diff) / static_cast<double>(n_diff),
                          static_cast<double>(acc_same) / static_cast<double>(n_same), t});
  }

  // FAR - FRR runs from -1 (reject all) to +1 (accept all).
  auto gap = [](const RocPoint &p) { return p.far - (1.0 - p.tar); };
  for (size_t i = 1; i < roc.points.size(); ++i) {
    const RocPoint &cur = roc.points[i];
    const double gi = gap(cur);
    if (gi < 0.0) continue;
    if (gi == 0.0) {
      roc.eer = cur.far;
      roc.threshold_at_eer = i + 1 < roc.points.size()
                                 ? 0.5 * (cur.threshold + roc.points[i + 1].threshold)
                                 : cur.threshold;
    } else {
      const RocPoint &prev = roc.points[i - 1];
      const double gp = gap(prev);
      const double f = -gp / (gi - gp);
      roc.eer = prev.far + f * (cur.far - prev.far);
      const double t_prev = i == 1 ? cur.threshold : prev.threshold;
      roc.threshold_at_eer = t_prev + f * (cur.threshold - t_prev);
    }
    break;
  }
  return roc;
}

double tar_at_far(const RocReport &roc, double far) {
  const auto &pts = roc.points;
  size_t a = 0;
  while (a + 1 < pts.size() && pts[a + 1].far <= far) ++a;
  if (pts[a].far == far || a + 1 == pts.size()) return pts[a].tar;
  const RocPoint &lo = pts[a], &hi = pts[a + 1];
  const double f = (far - lo.far) / (hi.far - lo.far);
  return lo.tar + f * (hi.tar - lo.tar);
}

KFoldReport kfold_pairwise(std::span<const ScoredPair> pairs, std::span<const int> fold_of,
                           int folds, int grid_points) {
  if (folds < 1) Fail(ErrorCode::kConfig, "fold count must be positive");
  if (grid_points < 2) Fail(ErrorCode::kConfig, "FAR grid needs at least two points");
  if (fold_of.size() != pairs.size())
    Fail(ErrorCode::kContract, "fold assignment does not match the pairs");
  std::vector<std::vector<ScoredPair>> per_fold(folds);
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (fold_of[i] < 0 || fold_of[i] >= folds)
      Fail(ErrorCode::kProtocol, "pair " + std::to_string(i) + " has fold " +
                                     std::to_string(fold_of[i]) + " outside [0, " +
                                     std::to_string(folds) + ")");
    per_fold[fold_of[i]].push_back(pairs[i]);
  }

  KFoldReport report;
  report.far_grid.resize(grid_points);
  for (int g = 0; g < grid_points; ++g)
    report.far_grid[g] = static_cast<double>(g) / (grid_points - 1);
  report.mean_tar.assign(grid_points, 0.0);
  for (int f = 0; f < folds; ++f) {
    try {
      report.folds.push_back(verification_roc(per_fold[f]));
    } catch (const Error &e) {
      Fail(ErrorCode::kProtocol, "fold " + std::to_string(f) + ": " + e.what());
    }
    report.fold_eer.push_back(report.folds.back().eer);
    for (int g = 0; g < grid_points; ++g)
      report.mean_tar[g] += tar_at_far(report.folds.back(), report.far_grid[g]);
  }
  for (double &t : report.mean_tar) t /= folds;
  double sum = 0.0;
  for (double e : report.fold_eer) sum += e;
  report.mean_eer = sum / folds;
  if (folds > 1) {
    double ss = 0.0;
    for (double e : report.fold_eer) ss += (e - report.mean_eer) * (e - report.mean_eer);
    report.std_eer = std::sqrt(ss / (folds - 1));
  }
  return report;
}

namespace {
std::string_view TrimCell(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool ParseIndex(std::string_view cell, int &out) {
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && !cell.empty() && out >= 0;
}
}  // namespace

std::vector<LabeledPair> load_pairs_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open pairs file " + path);
  std::vector<LabeledPair> pairs;
  std::string line;
  bool first = true;
  for (size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (TrimCell(line).empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    while (true) {
      size_t pos = rest.find(',');
      cells.push_back(TrimCell(rest.substr(0, pos)));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    const bool header = first && cells[0] == "index_a";
    first = false;
    if (header) continue;
    auto bad = [&](const std::string &why) {
      Fail(ErrorCode::kParse, path + " line " + std::to_string(lineno) + ": " + why);
    };
    if (cells.size() != 3 && cells.size() != 4)
      bad("expected index_a,index_b,same|diff[,fold]");
    LabeledPair p;
    if (!ParseIndex(cells[0], p.a) || !ParseIndex(cells[1], p.b))
      bad("indices must be non-negative integers");
    if (cells[2] == "same")
      p.same = true;
    else if (cells[2] != "diff")
      bad("label must be 'same' or 'diff'");
    if (cells.size() == 4 && !ParseIndex(cells[3], p.fold))
      bad("fold must be a non-negative integer");
    pairs.push_back(p);
  }
  return pairs;
}

std::vector<int> assign_folds(std::span<const LabeledPair> pairs, int folds) {
  if (folds < 1) Fail(ErrorCode::kConfig, "fold count must be positive");
  const size_t with_fold = std::count_if(pairs.begin(), pairs.end(),
                                         [](const LabeledPair &p) { return p.fold >= 0; });
  std::vector<int> out(pairs.size());
  if (with_fold == pairs.size() && !pairs.empty()) {
    for (size_t i = 0; i < pairs.size(); ++i) out[i] = pairs[i].fold;
    return out;
  }
  if (with_fold != 0)
    Fail(ErrorCode::kProtocol, "either every pair or no pair must carry a fold");
  for (size_t i = 0; i < pairs.size(); ++i)
    out[i] = static_cast<int>(i * static_cast<size_t>(folds) / pairs.size());
  return out;
}

std::vector<ScoredPair> score_pairs(const Eigen::MatrixXd &features,
                                    std::span<const LabeledPair> pairs) {
  std::vector<ScoredPair> out;
  out.reserve(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    const auto &p = pairs[i];
    if (p.a >= features.rows() || p.b >= features.rows())
      Fail(ErrorCode::kConfig, "pair " + std::to_string(i) + " references index " +
                                   std::to_string(std::max(p.a, p.b)) + " but only " +
                                   std::to_string(features.rows()) + " samples exist");
    out.push_back({1.0 - cosine_distance(features.row(p.a).transpose(),
                                         features.row(p.b).transpose()),
                   p.same});
  }
  return out;
}

void save_roc_csv(const KFoldReport &report, const std::string &path) {
  std::string out = "far,tar\n";
  for (size_t g = 0; g < report.far_grid.size(); ++g)
    out += FormatDouble(report.far_grid[g]) + ',' + FormatDouble(report.mean_tar[g]) + '\n';
  AtomicWriteFile(path, out);
}

void save_eer_csv(const KFoldReport &report, const std::string &path) {
  auto percent = [](double eer) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * eer);
    return std::string(buf);
  };
  std::string out = "fold,eer,eer_percent\n";
  for (size_t f = 0; f < report.fold_eer.size(); ++f)
    out += std::to_string(f) + ',' + FormatDouble(report.fold_eer[f]) + ',' +
           percent(report.fold_eer[f]) + '\n';
  out += "mean," + FormatDouble(report.mean_eer) + ',' + percent(report.mean_eer) + '\n';
  out += "std," + FormatDouble(report.std_eer) + ',' + percent(report.std_eer) + '\n';
  AtomicWriteFile(path, out);
}

}  // namespace wssda
