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

#ifndef SPACEGAN_EXEC_HPP_
#define SPACEGAN_EXEC_HPP_

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spacegan {

// Selects the OpenMP kernel or the serial reference loop. Both paths
// produce bit-identical results; `serial` is what the tests compare against.
enum class Exec { serial, parallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace spacegan

#endif  // SPACEGAN_EXEC_HPP_
