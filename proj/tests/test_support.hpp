// Copyright 2026 The rampdet Authors
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

#pragma once

// Small generators shared by the property tests.

#include <cmath>

#include "rampdet/random.hpp"
#include "rampdet/types.hpp"

namespace rampdet::testing {

inline CMatrix random_matrix(Rng& rng, long rows, long cols, double var = 1.0) {
  CMatrix h(rows, cols);
  for (long j = 0; j < cols; ++j) {
    for (long i = 0; i < rows; ++i) h(i, j) = rng.complex_normal(var);
  }
  return h;
}

inline CVector random_vector(Rng& rng, long size, double var = 1.0) {
  CVector x(size);
  for (long i = 0; i < size; ++i) x[i] = rng.complex_normal(var);
  return x;
}

inline double rel_diff(const CVector& a, const CVector& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

}  // namespace rampdet::testing
