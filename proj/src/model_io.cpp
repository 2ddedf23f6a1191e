// src/model_io.cpp

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

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>

#include "wssda/error.hpp"
#include "wssda/extractor.hpp"
#include "wssda/util.hpp"

namespace wssda {

namespace {

constexpr char kMagic[6] = {'W', 'S', 'S', 'D', 'A', '1'};

void PutU32(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

void PutF64(std::string &out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out += static_cast<char>((bits >> (8 * i)) & 0xff);
}

void PutString(std::string &out, std::string_view s) {
  PutU32(out, static_cast<std::uint32_t>(s.size()));
  out.append(s);
}

std::string ShortestDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  void need(size_t n) const {
    if (bytes_.size() - pos_ < n)
      Fail(ErrorCode::kModelFormat, "model file is truncated at byte " + std::to_string(pos_));
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }
  std::string_view take(size_t n) {
    need(n);
    std::string_view s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  size_t pos_ = 0;
};

int ParseInt(const std::map<std::string, std::string, std::less<>> &kv, std::string_view key) {
  auto it = kv.find(key);
  if (it == kv.end()) Fail(ErrorCode::kModelFormat, "model metadata lacks '" + std::string(key) + "'");
  int v = 0;
  auto [ptr, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
  if (ec != std::errc() || ptr != it->second.data() + it->second.size())
    Fail(ErrorCode::kModelFormat, "bad integer for '" + std::string(key) + "'");
  return v;
}

double ParseReal(const std::map<std::string, std::string, std::less<>> &kv, std::string_view key) {
  auto it = kv.find(key);
  if (it == kv.end()) Fail(ErrorCode::kModelFormat, "model metadata lacks '" + std::string(key) + "'");
  double v = 0;
  auto [ptr, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
  if (ec != std::errc() || ptr != it->second.data() + it->second.size())
    Fail(ErrorCode::kModelFormat, "bad number for '" + std::string(key) + "'");
  return v;
}

}  // namespace

std::string serialize_model(const FeatureExtractor &fx) {
  const auto &u = fx.matrix();
  const auto &meta = fx.meta();
  std::string out(kMagic, sizeof(kMagic));
  PutU32(out, kModelVersion);
  PutU32(out, static_cast<std::uint32_t>(u.rows()));
  PutU32(out, static_cast<std::uint32_t>(u.cols()));
  PutU32(out, static_cast<std::uint32_t>(meta.mode));
  PutU32(out, static_cast<std::uint32_t>(meta.strategy));
  PutU32(out, static_cast<std::uint32_t>(meta.h));
  for (Eigen::Index r = 0; r < u.rows(); ++r)
    for (Eigen::Index c = 0; c < u.cols(); ++c) PutF64(out, u(r, c));

  const std::pair<std::string, std::string> kv[] = {
      {"strategy", std::string(StrategyName(meta.strategy))},
      {"h", std::to_string(meta.h)},
      {"med_factor", ShortestDouble(meta.med_factor)},
      {"mode", std::string(ModeName(meta.mode))},
      {"second_stage", std::string(SecondStageName(meta.second_stage))},
      {"dim", std::to_string(meta.dim)},
      {"class_count", std::to_string(meta.class_count)},
      {"sample_count", std::to_string(meta.sample_count)},
      {"pivot", std::to_string(meta.pivot)},
      {"rank", std::to_string(meta.rank)},
      {"alpha", ShortestDouble(meta.alpha)},
      {"beta", ShortestDouble(meta.beta)},
  };
  PutU32(out, static_cast<std::uint32_t>(std::size(kv)));
  for (const auto &[key, value] : kv) {
    PutString(out, key);
    PutString(out, value);
  }
  return out;
}

FeatureExtractor deserialize_model(std::string_view bytes) {
  Reader in(bytes);
  if (in.remaining() < sizeof(kMagic) ||
      std::memcmp(in.take(sizeof(kMagic)).data(), kMagic, sizeof(kMagic)) != 0)
    Fail(ErrorCode::kModelFormat, "bad magic; not a WSSDA model file");
  const std::uint32_t version = in.u32();
  if (version != kModelVersion)
    Fail(ErrorCode::kUnsupportedVersion, "model version " + std::to_string(version) +
                                             " is not supported (expected " +
                                             std::to_string(kModelVersion) + ")");
  const std::uint32_t l = in.u32(), d = in.u32();
  const std::uint32_t mode = in.u32(), strategy = in.u32(), h = in.u32();
  if (l == 0 || d == 0 || d > l) Fail(ErrorCode::kModelFormat, "bad model dimensions");
  if (mode > 1 || strategy > 4) Fail(ErrorCode::kModelFormat, "bad mode or strategy code");
  in.need(static_cast<size_t>(l) * d * 8);
  Eigen::MatrixXd u(l, d);
  for (std::uint32_t r = 0; r < l; ++r)
    for (std::uint32_t c = 0; c < d; ++c) u(r, c) = in.f64();

  std::map<std::string, std::string, std::less<>> kv;
  const std::uint32_t count = in.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string key(in.take(in.u32()));
    std::string value(in.take(in.u32()));
    kv[std::move(key)] = std::move(value);
  }
  if (in.remaining() != 0) Fail(ErrorCode::kModelFormat, "trailing bytes after model metadata");

  ExtractorMeta meta;
  meta.mode = static_cast<SpectrumMode>(mode);
  meta.strategy = static_cast<PartitionStrategy>(strategy);
  meta.h = static_cast<int>(h);
  meta.med_factor = ParseReal(kv, "med_factor");
  auto stage = kv.find("second_stage");
  if (stage == kv.end()) Fail(ErrorCode::kModelFormat, "model metadata lacks 'second_stage'");
  meta.second_stage = stage->second == "bs" ? SecondStage::kBetweenSubclass
                                            : SecondStage::kTotalSubclass;
  meta.dim = ParseInt(kv, "dim");
  meta.class_count = ParseInt(kv, "class_count");
  meta.sample_count = ParseInt(kv, "sample_count");
  meta.pivot = ParseInt(kv, "pivot");
  meta.rank = ParseInt(kv, "rank");
  meta.alpha = ParseReal(kv, "alpha");
  meta.beta = ParseReal(kv, "beta");
  if (meta.dim != static_cast<int>(l))
    Fail(ErrorCode::kModelFormat, "metadata dimension disagrees with the header");
  return FeatureExtractor(std::move(u), meta);
}

void save_model(const FeatureExtractor &fx, const std::string &path) {
  AtomicWriteFile(path, serialize_model(fx));
}

FeatureExtractor load_model(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open model " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace wssda
