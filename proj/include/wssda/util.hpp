// include/wssda/util.hpp

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

#ifndef WSSDA_UTIL_HPP_
#define WSSDA_UTIL_HPP_

#include <cstdint>
#include <string>
#include <string_view>

namespace wssda {

/// Fixed 17-significant-digit formatting used by every CSV writer, so that
/// reruns with the same inputs produce byte-identical files.
std::string FormatDouble(double value);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
/// Throws Error(kIo) on failure and leaves no temporary file behind.
void AtomicWriteFile(const std::string &path, std::string_view contents);

/// Named RNG sub-stream: mixes a base seed with a stream name (and an optional
/// index, e.g. a class id) through splitmix64.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view stream,
                         std::uint64_t index = 0);

}  // namespace wssda

#endif  // WSSDA_UTIL_HPP_
