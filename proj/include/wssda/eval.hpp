// include/wssda/eval.hpp

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

#ifndef WSSDA_EVAL_HPP_
#define WSSDA_EVAL_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wssda/dataset.hpp"
#include "wssda/extractor.hpp"

namespace wssda {

/// 1 - cos(a, b), in [0, 2]. Zero vectors throw Error(kContract).
double cosine_distance(const Eigen::Ref<const Eigen::VectorXd> &a,
                       const Eigen::Ref<const Eigen::VectorXd> &b);

/// Label of the gallery row nearest in cosine distance; ties go to the
/// lowest row.
int nn_classify(const Eigen::MatrixXd &gallery, std::span<const int> gallery_labels,
                const Eigen::Ref<const Eigen::VectorXd> &probe);

/// Fraction of probe rows misclassified by cosine 1-NN against the gallery.
double identification_error(const Eigen::MatrixXd &gallery,
                            std::span<const int> gallery_labels,
                            const Eigen::MatrixXd &probes,
                            std::span<const int> probe_labels);

struct IdentificationReport {
  std::vector<int> d_values;
  /// Mean over splits, one entry per d.
  std::vector<double> error;
  /// per_split[s][j] is the error of split s at d_values[j].
  std::vector<std::vector<double>> per_split;
};

/// Returns an extractor for one split; its feature count must cover the
/// largest requested d.
using ExtractorFactory =
    std::function<FeatureExtractor(const LabeledDataset &, const SplitSpec &)>;

/// For every split, obtains one extractor and evaluates each d on its
/// leading d columns. `d_values` must be strictly increasing.
IdentificationReport identification_sweep(const ExtractorFactory &factory,
                                          const LabeledDataset &ds,
                                          std::span<const SplitSpec> splits,
                                          std::span<const int> d_values);

void save_identification_csv(const IdentificationReport &report,
                             const std::string &path);

struct ScoredPair {
  double score = 0.0;
  bool same = false;
};

struct RocPoint {
  double far = 0.0;
  double tar = 0.0;
  double threshold = 0.0;
};

struct RocReport {
  /// Sorted by FAR, starting at (0, 0) and ending at (1, 1).
  std::vector<RocPoint> points;
  double eer = 0.0;
  double threshold_at_eer = 0.0;
};

/// A pair is accepted when score >= threshold; one ROC point per distinct
/// score. The EER is interpolated linearly where FAR - FRR changes sign.
RocReport verification_roc(std::span<const ScoredPair> pairs);

/// Linear interpolation of the ROC's upper envelope at `far`.
double tar_at_far(const RocReport &roc, double far);

struct KFoldReport {
  std::vector<double> far_grid;
  std::vector<double> mean_tar;
  std::vector<double> fold_eer;
  double mean_eer = 0.0;
  double std_eer = 0.0;
  std::vector<RocReport> folds;
};

/// Per-fold ROC and EER; ROCs are averaged on an evenly spaced FAR grid of
/// `grid_points` points. `fold_of[i]` must lie in [0, folds).
KFoldReport kfold_pairwise(std::span<const ScoredPair> pairs,
                           std::span<const int> fold_of, int folds,
                           int grid_points = 101);

struct LabeledPair {
  int a = 0;
  int b = 0;
  bool same = false;
  /// -1 when the file carries no fold column.
  int fold = -1;
};

/// Rows `index_a,index_b,same|diff[,fold]`, optional header row.
std::vector<LabeledPair> load_pairs_csv(const std::string &path);

/// Explicit folds when every pair has one, otherwise contiguous blocks of
/// near-equal size.
std::vector<int> assign_folds(std::span<const LabeledPair> pairs, int folds);

/// Similarity 1 - cosine distance of each pair's feature rows.
std::vector<ScoredPair> score_pairs(const Eigen::MatrixXd &features,
                                    std::span<const LabeledPair> pairs);

/// `far,tar` rows of the fold-averaged ROC.
void save_roc_csv(const KFoldReport &report, const std::string &path);
/// `fold,eer,eer_percent` rows followed by mean and std rows.
void save_eer_csv(const KFoldReport &report, const std::string &path);

}  // namespace wssda

#endif  // WSSDA_EVAL_HPP_
