// Copyright 2026 The lotdepth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOTDEPTH_CORE_ERRORS_HPP_
#define LOTDEPTH_CORE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace lotdepth {

// Error categories. The numeric values are the C API status codes.
enum class ErrorCode : int {
  kArgument = 1,
  kFormat = 2,
  kLength = 3,
  kDegenerateImage = 4,
  kDomain = 5,
  kNumerical = 6,
  kIo = 7,
  kDegenerateDirection = 8,
  kUnderflow = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define LOTDEPTH_DEFINE_ERROR(Name, Code)                          \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(Code, what) {} \
  };

LOTDEPTH_DEFINE_ERROR(ArgumentError, ErrorCode::kArgument)
LOTDEPTH_DEFINE_ERROR(FormatError, ErrorCode::kFormat)
LOTDEPTH_DEFINE_ERROR(LengthError, ErrorCode::kLength)
LOTDEPTH_DEFINE_ERROR(DegenerateImageError, ErrorCode::kDegenerateImage)
LOTDEPTH_DEFINE_ERROR(DomainError, ErrorCode::kDomain)
LOTDEPTH_DEFINE_ERROR(IoError, ErrorCode::kIo)
LOTDEPTH_DEFINE_ERROR(DegenerateDirectionError, ErrorCode::kDegenerateDirection)
LOTDEPTH_DEFINE_ERROR(UnderflowError, ErrorCode::kUnderflow)

#undef LOTDEPTH_DEFINE_ERROR

// Solver failure. `gap` carries the residual the solver could not close
// (duality gap for the exact solver, marginal violation for Sinkhorn).
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double gap)
      : Error(ErrorCode::kNumerical, what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_ERRORS_HPP_
