// tools/wssda_cli.cpp

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

// Command-line front end. Links only against the C API in wssda.h.
//
//   wssda synth       --classes 20 --true-subclasses 2 --out-dir runs/a
//   wssda train       --data-csv runs/a/dataset.csv --strategy kmeans --h 2 --d 40
//   wssda eval-id     --data-csv runs/a/dataset.csv --gallery-first 5 --d-sweep 5,10,20
//   wssda eval-verify --data-csv test.csv --pairs pairs.csv --folds 10
//   wssda partition   --data-csv runs/a/dataset.csv --strategy rp --h 4
//
// Any flag may also come from `--config FILE`, a flat `key = value` file whose
// keys are the long flag names; flags given on the command line win.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wssda/wssda.h"

namespace {

namespace fs = std::filesystem;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad flag combinations; reported like parse errors.
struct UsageError : CliError {
  using CliError::CliError;
};

void Check(wssda_status status) {
  if (status != WSSDA_OK)
    throw CliError(std::string(wssda_status_name(status)) + ": " + wssda_last_error());
}

template <class T, void (*Free)(T *)>
struct Deleter {
  void operator()(T *p) const { Free(p); }
};
using Dataset = std::unique_ptr<wssda_dataset, Deleter<wssda_dataset, wssda_dataset_free>>;
using Partition =
    std::unique_ptr<wssda_partition, Deleter<wssda_partition, wssda_partition_free>>;
using Model = std::unique_ptr<wssda_model, Deleter<wssda_model, wssda_model_free>>;
using Pairs = std::unique_ptr<wssda_pairs, Deleter<wssda_pairs, wssda_pairs_free>>;
using IdReport =
    std::unique_ptr<wssda_id_report, Deleter<wssda_id_report, wssda_id_report_free>>;
using VerifyReport = std::unique_ptr<wssda_verify_report,
                                     Deleter<wssda_verify_report, wssda_verify_report_free>>;

struct Options {
  // Dataset source.
  std::string data_csv;
  bool csv_subclass = false;
  std::string data_pgm;
  bool synth = false;
  wssda_synth_spec spec{};
  // Partition and training.
  std::string strategy = "kmeans";
  int h = 2;
  int max_depth = 8;
  std::uint64_t seed = 0;
  int train_first = 0;
  int d = 10;
  double med_factor = 1.0;
  std::string mode = "regularized";
  std::string second_stage = "ts";
  bool flat_fallback = false;
  // Evaluation.
  std::string model;
  int gallery_rotations = 0;
  int gallery_first = 0;
  std::vector<int> d_sweep;
  std::string pairs;
  int folds = 10;
  int grid = 101;
  std::string out_dir = ".";
};

// Files written by the running command, removed again if it fails.
std::vector<std::string> g_written;

std::string OutPath(const Options &o, const std::string &name) {
  fs::create_directories(o.out_dir);
  std::string path = (fs::path(o.out_dir) / name).string();
  g_written.push_back(path);
  return path;
}

void WriteTextAtomic(const std::string &path, const std::string &text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw CliError("cannot write " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw CliError("cannot rename onto " + path);
  }
}

wssda_strategy StrategyCode(const std::string &name) {
  if (name == "kd") return WSSDA_STRATEGY_KD;
  if (name == "rp") return WSSDA_STRATEGY_RP;
  if (name == "pca") return WSSDA_STRATEGY_PCA;
  if (name == "kmeans") return WSSDA_STRATEGY_KMEANS;
  return WSSDA_STRATEGY_PROVIDED;
}

Dataset LoadData(const Options &o) {
  const int sources = !o.data_csv.empty() + !o.data_pgm.empty() + (o.synth ? 1 : 0);
  if (sources != 1)
    throw UsageError("choose exactly one of --data-csv, --data-pgm and --synth");
  wssda_dataset *raw = nullptr;
  if (!o.data_csv.empty()) {
    Check(wssda_dataset_load_csv(o.data_csv.c_str(), o.csv_subclass ? 1 : 0, &raw));
  } else if (!o.data_pgm.empty()) {
    Check(wssda_dataset_load_pgm_dir(o.data_pgm.c_str(), &raw));
  } else {
    wssda_synth_spec spec = o.spec;
    spec.seed = o.seed;
    Check(wssda_dataset_generate(&spec, &raw));
  }
  Dataset ds(raw);
  if (o.train_first > 0) {
    Check(wssda_dataset_first_k(ds.get(), o.train_first, &raw));
    ds.reset(raw);
  }
  return ds;
}

Partition ComputePartition(const Options &o, const wssda_dataset *ds) {
  wssda_partition *raw = nullptr;
  Check(wssda_partition_compute(ds, StrategyCode(o.strategy), o.h, o.max_depth, o.seed,
                                &raw));
  return Partition(raw);
}

std::string ModelPath(const Options &o) {
  return o.model.empty() ? (fs::path(o.out_dir) / "model.wssda").string() : o.model;
}

void RunSynth(const Options &o) {
  wssda_synth_spec spec = o.spec;
  spec.seed = o.seed;
  wssda_dataset *raw = nullptr;
  Check(wssda_dataset_generate(&spec, &raw));
  Dataset ds(raw);
  const std::string csv = OutPath(o, "dataset.csv");
  Check(wssda_dataset_save_csv(ds.get(), csv.c_str()));
  std::ostringstream cfg;
  cfg << "# synthetic dataset written to " << csv << "\n"
      << "classes = " << spec.class_count << "\n"
      << "true-subclasses = " << spec.subclasses_per_class << "\n"
      << "per-subclass = " << spec.samples_per_subclass << "\n"
      << "dim = " << spec.dim << "\n"
      << "class-spread = " << CLI::detail::to_string(spec.class_spread) << "\n"
      << "subclass-spread = " << CLI::detail::to_string(spec.subclass_mean_spread) << "\n"
      << "scale-min = " << CLI::detail::to_string(spec.scale_min) << "\n"
      << "scale-max = " << CLI::detail::to_string(spec.scale_max) << "\n"
      << "seed = " << spec.seed << "\n";
  WriteTextAtomic(OutPath(o, "dataset.cfg"), cfg.str());
}

void RunPartition(const Options &o) {
  Dataset ds = LoadData(o);
  Partition part = ComputePartition(o, ds.get());
  size_t total = 0, deficient = 0;
  Check(wssda_partition_info(part.get(), &total, &deficient));
  Check(wssda_partition_save_csv(part.get(), OutPath(o, "partition.csv").c_str()));
  std::cout << "subclasses " << total << ", deficient classes " << deficient << "\n";
}

void RunTrain(const Options &o) {
  Dataset ds = LoadData(o);
  Partition part = ComputePartition(o, ds.get());
  wssda_train_config config;
  wssda_train_config_default(&config);
  config.d = o.d;
  config.med_factor = o.med_factor;
  config.mode = o.mode == "truncated" ? WSSDA_MODE_TRUNCATED : WSSDA_MODE_REGULARIZED;
  config.second_stage =
      o.second_stage == "bs" ? WSSDA_STAGE_BETWEEN_SUBCLASS : WSSDA_STAGE_TOTAL_SUBCLASS;
  config.allow_flat_fallback = o.flat_fallback ? 1 : 0;
  wssda_model *raw = nullptr;
  Check(wssda_train(ds.get(), part.get(), &config, &raw));
  Model model(raw);
  const std::string model_path = ModelPath(o);
  fs::create_directories(fs::path(model_path).parent_path().empty()
                             ? fs::path(".")
                             : fs::path(model_path).parent_path());
  g_written.push_back(model_path);
  Check(wssda_model_save(model.get(), model_path.c_str()));
  Check(wssda_partition_save_csv(part.get(), OutPath(o, "partition.csv").c_str()));
  Check(wssda_model_save_spectrum_csv(model.get(), OutPath(o, "spectrum.csv").c_str()));
}

Model OpenModel(const Options &o) {
  wssda_model *raw = nullptr;
  Check(wssda_model_load(ModelPath(o).c_str(), &raw));
  return Model(raw);
}

void RunEvalId(const Options &o) {
  Model model = OpenModel(o);
  Dataset ds = LoadData(o);
  std::vector<int> sweep = o.d_sweep;
  if (sweep.empty()) {
    size_t features = 0;
    Check(wssda_model_info(model.get(), nullptr, &features, nullptr, nullptr, nullptr));
    sweep.push_back(static_cast<int>(features));
  }
  wssda_id_report *raw = nullptr;
  Check(wssda_eval_identification(model.get(), ds.get(), o.gallery_rotations,
                                  o.gallery_first, sweep.data(), sweep.size(), &raw));
  IdReport report(raw);
  Check(wssda_id_report_save_csv(report.get(), OutPath(o, "identification.csv").c_str()));
  for (size_t j = 0; j < sweep.size(); ++j) {
    int d = 0;
    double err = 0;
    Check(wssda_id_report_error(report.get(), j, &d, &err));
    std::printf("d=%d error=%.4f\n", d, err);
  }
}

void RunEvalVerify(const Options &o) {
  Model model = OpenModel(o);
  Dataset ds = LoadData(o);
  wssda_pairs *raw_pairs = nullptr;
  Check(wssda_pairs_load_csv(o.pairs.c_str(), &raw_pairs));
  Pairs pairs(raw_pairs);
  wssda_verify_report *raw = nullptr;
  Check(wssda_eval_verification(model.get(), ds.get(), pairs.get(), o.folds, o.grid, &raw));
  VerifyReport report(raw);
  Check(wssda_verify_report_save_roc_csv(report.get(), OutPath(o, "roc.csv").c_str()));
  Check(wssda_verify_report_save_eer_csv(report.get(), OutPath(o, "eer.csv").c_str()));
  double mean = 0, sd = 0;
  size_t folds = 0;
  Check(wssda_verify_report_summary(report.get(), &mean, &sd, &folds));
  std::printf("EER %.2f%% (std %.2f, %zu folds)\n", 100.0 * mean, 100.0 * sd, folds);
}

// Flat `key = value` file to `--key=value` tokens.
std::vector<std::string> ReadConfig(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open config " + path);
  std::vector<std::string> tokens;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = CLI::detail::trim_copy(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CliError(path + " line " + std::to_string(lineno) + ": expected key = value");
    std::string key = CLI::detail::trim_copy(line.substr(0, eq));
    std::string value = CLI::detail::trim_copy(line.substr(eq + 1));
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

void AddDataOptions(CLI::App *cmd, Options &o) {
  cmd->add_option("--data-csv", o.data_csv, "Dataset CSV: class[,subclass],values...")
      ->check(CLI::ExistingFile);
  cmd->add_flag("--csv-subclass", o.csv_subclass,
                "The CSV carries a subclass column after the class label");
  cmd->add_option("--data-pgm", o.data_pgm, "Directory of per-class PGM folders")
      ->check(CLI::ExistingDirectory);
  cmd->add_flag("--synth", o.synth, "Generate a synthetic dataset from the synth flags");
}

void AddSynthOptions(CLI::App *cmd, Options &o) {
  cmd->add_option("--classes", o.spec.class_count)->check(CLI::PositiveNumber);
  cmd->add_option("--true-subclasses", o.spec.subclasses_per_class)->check(CLI::PositiveNumber);
  cmd->add_option("--per-subclass", o.spec.samples_per_subclass)->check(CLI::PositiveNumber);
  cmd->add_option("--dim", o.spec.dim)->check(CLI::PositiveNumber);
  cmd->add_option("--class-spread", o.spec.class_spread)->check(CLI::NonNegativeNumber);
  cmd->add_option("--subclass-spread", o.spec.subclass_mean_spread)
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--scale-min", o.spec.scale_min)->check(CLI::NonNegativeNumber);
  cmd->add_option("--scale-max", o.spec.scale_max)->check(CLI::NonNegativeNumber);
}

void AddPartitionOptions(CLI::App *cmd, Options &o) {
  cmd->add_option("--strategy", o.strategy, "Subclass partition strategy")
      ->check(CLI::IsMember({"kd", "rp", "pca", "kmeans", "provided"}));
  cmd->add_option("--h", o.h, "Subclasses per class")->check(CLI::PositiveNumber);
  cmd->add_option("--max-depth", o.max_depth, "Tree depth limit")->check(CLI::Range(1, 8));
  cmd->add_option("--train-first", o.train_first,
                  "Use only the first K samples of each class (0 = all)")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char **argv) {
  Options o;
  wssda_synth_spec_default(&o.spec);

  CLI::App app{"Whole-space subclass discriminant analysis"};
  // Long form only: -h would collide with --h.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;

  auto common = [&](CLI::App *cmd) {
    cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--config", config_path, "Flat key = value file of flag defaults");
    cmd->add_option("--seed", o.seed, "Base seed for every random stream");
    cmd->add_option("--out-dir", o.out_dir, "Output directory")->envname("WSSDA_OUTPUT_DIR");
  };

  CLI::App *synth = app.add_subcommand("synth", "Write a synthetic dataset CSV");
  common(synth);
  AddSynthOptions(synth, o);

  CLI::App *part = app.add_subcommand("partition", "Partition classes into subclasses");
  common(part);
  AddDataOptions(part, o);
  AddSynthOptions(part, o);
  AddPartitionOptions(part, o);

  CLI::App *train = app.add_subcommand("train", "Train a feature extractor");
  common(train);
  AddDataOptions(train, o);
  AddSynthOptions(train, o);
  AddPartitionOptions(train, o);
  train->add_option("--d", o.d, "Feature count")->check(CLI::PositiveNumber);
  train->add_option("--med-factor", o.med_factor, "Pivot median multiplier")
      ->check(CLI::PositiveNumber);
  train->add_option("--mode", o.mode)->check(CLI::IsMember({"regularized", "truncated"}));
  train->add_option("--second-stage", o.second_stage)->check(CLI::IsMember({"ts", "bs"}));
  train->add_flag("--flat-fallback", o.flat_fallback,
                  "Whiten uniformly instead of failing on a flat spectrum");
  train->add_option("--model", o.model, "Model output path (default OUT_DIR/model.wssda)");

  CLI::App *eval_id = app.add_subcommand("eval-id", "Identification error against d");
  common(eval_id);
  AddDataOptions(eval_id, o);
  AddSynthOptions(eval_id, o);
  eval_id->add_option("--model", o.model, "Model file (default OUT_DIR/model.wssda)");
  auto *rot = eval_id->add_option("--gallery-rotations", o.gallery_rotations,
                                  "Rotate a single gallery image per class N times")
                  ->check(CLI::PositiveNumber);
  auto *first = eval_id->add_option("--gallery-first", o.gallery_first,
                                    "First K samples per class form the gallery")
                    ->check(CLI::PositiveNumber);
  rot->excludes(first);
  eval_id->add_option("--d-sweep", o.d_sweep, "Comma-separated feature counts")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  CLI::App *verify = app.add_subcommand("eval-verify", "Pairwise verification ROC and EER");
  common(verify);
  AddDataOptions(verify, o);
  AddSynthOptions(verify, o);
  verify->add_option("--model", o.model, "Model file (default OUT_DIR/model.wssda)");
  verify->add_option("--pairs", o.pairs, "CSV of index_a,index_b,same|diff[,fold]")
      ->required()
      ->check(CLI::ExistingFile);
  verify->add_option("--folds", o.folds)->check(CLI::PositiveNumber);
  verify->add_option("--grid", o.grid, "FAR grid points for the averaged ROC")
      ->check(CLI::Range(2, 1000000));

  // Splice config-file tokens in right after the subcommand so that explicit
  // flags, which come later, take precedence.
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string cfg;
  for (size_t i = 0; i < args.size() && cfg.empty(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) cfg = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) cfg = args[i].substr(9);
  }
  if (!cfg.empty() && !args.empty()) {
    try {
      auto tokens = ReadConfig(cfg);
      args.insert(args.begin() + 1, tokens.begin(), tokens.end());
    } catch (const std::exception &e) {
      std::cerr << "wssda: " << e.what() << "\n";
      return 2;
    }
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (eval_id->parsed() && o.gallery_rotations == 0 && o.gallery_first == 0) {
    std::cerr << "wssda: eval-id needs --gallery-rotations or --gallery-first\n";
    return 2;
  }

  try {
    if (synth->parsed()) RunSynth(o);
    else if (part->parsed()) RunPartition(o);
    else if (train->parsed()) RunTrain(o);
    else if (eval_id->parsed()) RunEvalId(o);
    else if (verify->parsed()) RunEvalVerify(o);
  } catch (const UsageError &e) {
    std::cerr << "wssda: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::error_code ec;
    for (const auto &path : g_written) fs::remove(path, ec);
    std::cerr << "wssda: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
