// src/util.cpp

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

#include "wssda/util.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "wssda/error.hpp"

namespace wssda {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kDimension: return "dimension error";
    case ErrorCode::kProtocol: return "protocol error";
    case ErrorCode::kContract: return "contract error";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kPartition: return "partition error";
    case ErrorCode::kSpectrumTooShort: return "spectrum too short";
    case ErrorCode::kDegenerateModel: return "degenerate model";
    case ErrorCode::kPivotAtNull: return "pivot at null";
    case ErrorCode::kTraining: return "training error";
    case ErrorCode::kModelFormat: return "model format error";
    case ErrorCode::kUnsupportedVersion: return "unsupported version";
    case ErrorCode::kIo: return "I/O error";
  }
  return "unknown error";
}

void Fail(ErrorCode code, const std::string &message) {
  throw Error(code, message);
}

std::string FormatDouble(double value) {
  char buf[40];
  int len = std::snprintf(buf, sizeof(buf), "%.17g", value);
  return std::string(buf, static_cast<size_t>(len));
}

void AtomicWriteFile(const std::string &path, std::string_view contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorCode::kIo, "cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      Fail(ErrorCode::kIo, "write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    Fail(ErrorCode::kIo, "cannot rename onto " + path);
  }
}

namespace {
std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view stream,
                         std::uint64_t index) {
  // FNV-1a over the stream name.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : stream) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return SplitMix64(SplitMix64(seed ^ h) + index);
}

}  // namespace wssda
