// src/dataset.cpp

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

#include "wssda/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "wssda/error.hpp"
#include "wssda/util.hpp"

namespace wssda {

namespace {

// Dense relabeling in sorted order of the original values.
std::vector<int> Densify(const std::vector<long long> &raw) {
  std::vector<long long> uniq(raw);
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  std::vector<int> out(raw.size());
  for (size_t i = 0; i < raw.size(); ++i)
    out[i] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), raw[i]) -
                              uniq.begin());
  return out;
}

// Subclass labels made dense within each class.
std::vector<int> DensifyWithin(const std::vector<int> &classes,
                               const std::vector<long long> &raw, int class_count) {
  std::vector<std::map<long long, int>> maps(class_count);
  for (size_t i = 0; i < raw.size(); ++i) maps[classes[i]][raw[i]] = 0;
  for (auto &m : maps) {
    int next = 0;
    for (auto &kv : m) kv.second = next++;
  }
  std::vector<int> out(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) out[i] = maps[classes[i]].at(raw[i]);
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> cells;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(',', start);
    cells.push_back(Trim(line.substr(start, pos == std::string_view::npos
                                                ? std::string_view::npos
                                                : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::string Where(size_t row, size_t col) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col);
}

long long ParseLabel(std::string_view cell, size_t row, size_t col) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty())
    Fail(ErrorCode::kParse, "non-integer label '" + std::string(cell) + "' at " +
                                Where(row, col));
  return v;
}

double ParseValue(std::string_view cell, size_t row, size_t col) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty())
    Fail(ErrorCode::kParse, "non-numeric value '" + std::string(cell) + "' at " +
                                Where(row, col));
  return v;
}

}  // namespace

LabeledDataset::LabeledDataset(Eigen::MatrixXd samples, std::vector<int> class_labels,
                               std::optional<std::vector<int>> subclass_labels)
    : samples_(std::move(samples)),
      class_labels_(std::move(class_labels)),
      subclass_labels_(std::move(subclass_labels)) {
  const size_t n = static_cast<size_t>(samples_.rows());
  if (class_labels_.size() != n)
    Fail(ErrorCode::kContract, "class label count does not match sample count");
  if (n == 0) Fail(ErrorCode::kContract, "dataset has no samples");
  int max_label = -1;
  for (int c : class_labels_) {
    if (c < 0) Fail(ErrorCode::kContract, "negative class label");
    max_label = std::max(max_label, c);
  }
  class_count_ = max_label + 1;
  std::vector<int> counts(class_count_, 0);
  for (int c : class_labels_) ++counts[c];
  for (int c = 0; c < class_count_; ++c)
    if (counts[c] == 0)
      Fail(ErrorCode::kContract, "class " + std::to_string(c) + " has no samples");
  if (subclass_labels_) {
    const auto &sub = *subclass_labels_;
    if (sub.size() != n)
      Fail(ErrorCode::kContract, "subclass label count does not match sample count");
    std::vector<std::vector<int>> seen(class_count_);
    for (size_t i = 0; i < n; ++i) {
      if (sub[i] < 0) Fail(ErrorCode::kContract, "negative subclass label");
      auto &s = seen[class_labels_[i]];
      if (static_cast<int>(s.size()) <= sub[i]) s.resize(sub[i] + 1, 0);
      ++s[sub[i]];
    }
    for (int c = 0; c < class_count_; ++c)
      for (size_t j = 0; j < seen[c].size(); ++j)
        if (seen[c][j] == 0)
          Fail(ErrorCode::kContract, "class " + std::to_string(c) + " subclass " +
                                         std::to_string(j) + " is empty");
  }
}

std::vector<int> LabeledDataset::class_sizes() const {
  std::vector<int> counts(class_count_, 0);
  for (int c : class_labels_) ++counts[c];
  return counts;
}

std::vector<int> LabeledDataset::class_indices(int class_id) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (class_labels_[i] == class_id) out.push_back(i);
  return out;
}

LabeledDataset LabeledDataset::subset(std::span<const int> indices) const {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(indices.size()), samples_.cols());
  std::vector<long long> classes(indices.size());
  std::vector<long long> subs;
  for (size_t r = 0; r < indices.size(); ++r) {
    int i = indices[r];
    if (i < 0 || i >= size()) Fail(ErrorCode::kContract, "subset index out of range");
    rows.row(static_cast<Eigen::Index>(r)) = samples_.row(i);
    classes[r] = class_labels_[i];
  }
  std::vector<int> dense = Densify(classes);
  std::optional<std::vector<int>> sub;
  if (subclass_labels_) {
    subs.resize(indices.size());
    for (size_t r = 0; r < indices.size(); ++r) subs[r] = (*subclass_labels_)[indices[r]];
    int c = dense.empty() ? 0 : *std::max_element(dense.begin(), dense.end()) + 1;
    sub = DensifyWithin(dense, subs, c);
  }
  return LabeledDataset(std::move(rows), std::move(dense), std::move(sub));
}

LabeledDataset load_csv(const std::string &path, bool has_subclass_column) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path);
  std::vector<long long> classes, subs;
  std::vector<std::vector<double>> rows;
  const size_t label_cols = has_subclass_column ? 2 : 1;
  std::string line;
  size_t row = 0;
  size_t width = 0;
  for (; std::getline(in, line); ++row) {
    if (Trim(line).empty()) continue;
    auto cells = SplitCommas(line);
    if (cells.size() <= label_cols)
      Fail(ErrorCode::kFormat, path + ": row " + std::to_string(row) + " has no values");
    size_t l = cells.size() - label_cols;
    if (rows.empty()) {
      width = l;
    } else if (l != width) {
      Fail(ErrorCode::kFormat, path + ": ragged row " + std::to_string(row) + " has " +
                                   std::to_string(l) + " values, expected " +
                                   std::to_string(width));
    }
    classes.push_back(ParseLabel(cells[0], row, 0));
    if (has_subclass_column) subs.push_back(ParseLabel(cells[1], row, 1));
    std::vector<double> values(l);
    for (size_t k = 0; k < l; ++k)
      values[k] = ParseValue(cells[label_cols + k], row, label_cols + k);
    rows.push_back(std::move(values));
  }
  if (rows.empty()) Fail(ErrorCode::kFormat, path + ": no data rows");

  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(width));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t k = 0; k < width; ++k)
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = rows[r][k];
  std::vector<int> dense = Densify(classes);
  std::optional<std::vector<int>> sub;
  if (has_subclass_column) {
    int c = *std::max_element(dense.begin(), dense.end()) + 1;
    sub = DensifyWithin(dense, subs, c);
  }
  return LabeledDataset(std::move(x), std::move(dense), std::move(sub));
}

void save_csv(const LabeledDataset &ds, const std::string &path) {
  std::string out;
  const auto &x = ds.samples();
  for (int i = 0; i < ds.size(); ++i) {
    out += std::to_string(ds.class_labels()[i]);
    if (ds.has_subclass_labels()) {
      out += ',';
      out += std::to_string((*ds.subclass_labels())[i]);
    }
    for (int k = 0; k < ds.dim(); ++k) {
      out += ',';
      out += FormatDouble(x(i, k));
    }
    out += '\n';
  }
  AtomicWriteFile(path, out);
}

namespace {

struct PgmImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;  // row-major, scaled to [0, 1]
};

PgmImage ReadPgm(const std::filesystem::path &file) {
  const std::string name = file.string();
  std::ifstream in(file, std::ios::binary);
  if (!in) Fail(ErrorCode::kFormat, "cannot read PGM " + name);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  size_t pos = 0;
  auto bad = [&](const std::string &why) {
    Fail(ErrorCode::kFormat, "malformed PGM " + name + ": " + why);
  };
  auto skip_space = [&]() {
    while (pos < data.size()) {
      char c = data[pos];
      if (c == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&]() -> long {
    skip_space();
    size_t start = pos;
    while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) ++pos;
    if (start == pos) bad("expected an integer");
    long v = 0;
    std::from_chars(data.data() + start, data.data() + pos, v);
    return v;
  };
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5'))
    bad("magic is not P2 or P5");
  const bool binary = data[1] == '5';
  pos = 2;
  long w = read_int(), h = read_int(), maxval = read_int();
  if (w <= 0 || h <= 0) bad("non-positive size");
  if (maxval <= 0 || maxval > 65535) bad("max gray value out of range");
  PgmImage img;
  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  const size_t count = static_cast<size_t>(w) * static_cast<size_t>(h);
  img.pixels.resize(count);
  if (binary) {
    if (pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[pos])))
      bad("missing separator before raster");
    ++pos;
    const size_t bytes = maxval < 256 ? 1 : 2;
    if (data.size() - pos < count * bytes) bad("truncated raster");
    for (size_t i = 0; i < count; ++i) {
      unsigned v = static_cast<unsigned char>(data[pos + i * bytes]);
      if (bytes == 2) v = (v << 8) | static_cast<unsigned char>(data[pos + i * 2 + 1]);
      if (v > static_cast<unsigned>(maxval)) bad("pixel exceeds max gray value");
      img.pixels[i] = static_cast<double>(v) / static_cast<double>(maxval);
    }
  } else {
    for (size_t i = 0; i < count; ++i) {
      long v = read_int();
      if (v > maxval) bad("pixel exceeds max gray value");
      img.pixels[i] = static_cast<double>(v) / static_cast<double>(maxval);
    }
  }
  return img;
}

bool IsPgm(const std::filesystem::path &p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".pgm";
}

}  // namespace

LabeledDataset load_pgm_dir(const std::string &path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(path, ec)) Fail(ErrorCode::kIo, "not a directory: " + path);
  std::vector<fs::path> class_dirs;
  for (const auto &entry : fs::directory_iterator(path))
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  std::sort(class_dirs.begin(), class_dirs.end());
  if (class_dirs.empty()) Fail(ErrorCode::kFormat, path + " has no class subdirectories");

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  int width = -1, height = -1;
  std::string first_file;
  for (size_t c = 0; c < class_dirs.size(); ++c) {
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(class_dirs[c]))
      if (entry.is_regular_file() && IsPgm(entry.path())) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
      Fail(ErrorCode::kFormat, "class directory " + class_dirs[c].string() +
                                   " contains no PGM images");
    for (const auto &f : files) {
      PgmImage img = ReadPgm(f);
      if (width < 0) {
        width = img.width;
        height = img.height;
        first_file = f.string();
      } else if (img.width != width || img.height != height) {
        Fail(ErrorCode::kDimension,
             f.string() + " is " + std::to_string(img.width) + "x" +
                 std::to_string(img.height) + " but " + first_file + " is " +
                 std::to_string(width) + "x" + std::to_string(height));
      }
      rows.push_back(std::move(img.pixels));
      labels.push_back(static_cast<int>(c));
    }
  }
  const Eigen::Index l = static_cast<Eigen::Index>(width) * height;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), l);
  for (size_t r = 0; r < rows.size(); ++r)
    x.row(static_cast<Eigen::Index>(r)) =
        Eigen::Map<const Eigen::RowVectorXd>(rows[r].data(), l);
  return LabeledDataset(std::move(x), std::move(labels));
}

void SynthSpec::validate() const {
  if (class_count < 1 || subclasses_per_class < 1 || samples_per_subclass < 1 || dim < 1)
    Fail(ErrorCode::kConfig, "synthetic spec counts must be positive");
  if (!(class_spread >= 0.0) || !(subclass_mean_spread >= 0.0))
    Fail(ErrorCode::kConfig, "synthetic spreads must be non-negative");
  if (!(scale_min >= 0.0) || !(scale_max >= scale_min))
    Fail(ErrorCode::kConfig, "synthetic scale range must satisfy 0 <= min <= max");
}

LabeledDataset generate_synthetic(const SynthSpec &spec) {
  spec.validate();
  std::mt19937_64 rng(DeriveSeed(spec.seed, "synth"));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](int l) {
    Eigen::VectorXd v(l);
    for (int k = 0; k < l; ++k) v(k) = gauss(rng);
    return v;
  };

  const int per_class = spec.subclasses_per_class * spec.samples_per_subclass;
  const int n = spec.class_count * per_class;
  Eigen::MatrixXd x(n, spec.dim);
  std::vector<int> classes(n), subs(n);
  int row = 0;
  for (int c = 0; c < spec.class_count; ++c) {
    Eigen::VectorXd center = spec.class_spread * draw(spec.dim);
    for (int j = 0; j < spec.subclasses_per_class; ++j) {
      Eigen::VectorXd dir = draw(spec.dim);
      const double norm = dir.norm();
      if (norm > 0.0) dir /= norm;
      Eigen::VectorXd mean = center + spec.subclass_mean_spread * dir;
      const double scale = spec.scale_min + (spec.scale_max - spec.scale_min) * unit(rng);
      for (int s = 0; s < spec.samples_per_subclass; ++s, ++row) {
        x.row(row) = (mean + scale * draw(spec.dim)).transpose();
        classes[row] = c;
        subs[row] = j;
      }
    }
  }
  return LabeledDataset(std::move(x), std::move(classes), std::move(subs));
}

std::vector<SplitSpec> make_gallery_probe_splits(const LabeledDataset &ds, int rotations) {
  if (rotations < 1) Fail(ErrorCode::kConfig, "rotation count must be positive");
  std::vector<std::vector<int>> members(ds.class_count());
  for (int i = 0; i < ds.size(); ++i) members[ds.class_labels()[i]].push_back(i);
  for (int c = 0; c < ds.class_count(); ++c)
    if (static_cast<int>(members[c].size()) < rotations)
      Fail(ErrorCode::kProtocol, "class " + std::to_string(c) + " has " +
                                     std::to_string(members[c].size()) +
                                     " samples, fewer than " + std::to_string(rotations) +
                                     " rotations");
  std::vector<SplitSpec> splits(rotations);
  for (int r = 0; r < rotations; ++r) {
    std::vector<bool> is_gallery(ds.size(), false);
    for (const auto &m : members) is_gallery[m[r]] = true;
    for (int i = 0; i < ds.size(); ++i)
      (is_gallery[i] ? splits[r].gallery : splits[r].probe).push_back(i);
  }
  return splits;
}

SplitSpec make_first_k_split(const LabeledDataset &ds, int k) {
  if (k < 1) Fail(ErrorCode::kConfig, "gallery size per class must be positive");
  std::vector<int> seen(ds.class_count(), 0);
  SplitSpec split;
  for (int i = 0; i < ds.size(); ++i) {
    int &s = seen[ds.class_labels()[i]];
    (s < k ? split.gallery : split.probe).push_back(i);
    ++s;
  }
  for (int c = 0; c < ds.class_count(); ++c)
    if (seen[c] < k)
      Fail(ErrorCode::kProtocol, "class " + std::to_string(c) + " has fewer than " +
                                     std::to_string(k) + " samples");
  return split;
}

}  // namespace wssda
