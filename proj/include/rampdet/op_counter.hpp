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

#include <cstdint>

namespace rampdet {

/// Complex multiply-accumulate tally. Setup work (Gram matrix, channel
/// normalization) is kept apart from per-iteration work.
struct OpCounter {
  std::uint64_t setup = 0;
  std::uint64_t iterative = 0;
  int iterations = 0;

  void add(std::uint64_t macs) { iterative += macs; }
  void add_setup(std::uint64_t macs) { setup += macs; }
  std::uint64_t per_iteration() const {
    return iterations > 0 ? iterative / static_cast<std::uint64_t>(iterations) : 0;
  }
};

}  // namespace rampdet
