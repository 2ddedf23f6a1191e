// include/wssda/error.hpp

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

#ifndef WSSDA_ERROR_HPP_
#define WSSDA_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace wssda {

// Values match the WSSDA_ERR_* codes of the C API.
enum class ErrorCode : int {
  kFormat = 1,
  kParse = 2,
  kDimension = 3,
  kProtocol = 4,
  kContract = 5,
  kConfig = 6,
  kPartition = 7,
  kSpectrumTooShort = 8,
  kDegenerateModel = 9,
  kPivotAtNull = 10,
  kTraining = 11,
  kModelFormat = 12,
  kUnsupportedVersion = 13,
  kIo = 14,
};

const char *ErrorCodeName(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string &message);

}  // namespace wssda

#endif  // WSSDA_ERROR_HPP_
