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

#ifndef LOTDEPTH_CORE_IO_UTIL_HPP_
#define LOTDEPTH_CORE_IO_UTIL_HPP_

#include <string>

namespace lotdepth {

// Whole-file helpers. Throw IoError.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

// Shortest decimal string that round-trips a double ("%.17g" trimmed).
std::string FormatDouble(double v);

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_IO_UTIL_HPP_
