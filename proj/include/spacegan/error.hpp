// Copyright 2026 The SpaceGAN Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPACEGAN_ERROR_HPP_
#define SPACEGAN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace spacegan {

enum class Errc {
  invalid_argument,
  invalid_dimension,
  invalid_k,
  degenerate_input,
  degenerate_column,
  shape_mismatch,
  schema,
  parse,
  empty_fold,
  numeric_fault,
  missing_cache,
  ill_conditioned,
  io,
};

const char* to_string(Errc code);

// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::invalid_dimension: return "invalid dimension";
    case Errc::invalid_k: return "invalid k";
    case Errc::degenerate_input: return "degenerate input";
    case Errc::degenerate_column: return "degenerate column";
    case Errc::shape_mismatch: return "shape mismatch";
    case Errc::schema: return "schema error";
    case Errc::parse: return "parse error";
    case Errc::empty_fold: return "empty fold";
    case Errc::numeric_fault: return "numeric fault";
    case Errc::missing_cache: return "missing cache";
    case Errc::ill_conditioned: return "ill-conditioned";
    case Errc::io: return "I/O error";
  }
  return "unknown error";
}

}  // namespace spacegan

#endif  // SPACEGAN_ERROR_HPP_
