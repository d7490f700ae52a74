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

#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace rampdet::kernels {

namespace {

const Table kScalar{
    "scalar",
    &scalar_impl::matvec,
    &scalar_impl::matvec_adjoint,
    &scalar_impl::beta_weights,
    &scalar_impl::ramp_denoise,
    &scalar_impl::squared_norm,
    &scalar_impl::residual_combine,
};

#if defined(RAMPDET_HAVE_AVX2)
const Table kAvx2{
    "avx2",
    &avx2_impl::matvec,
    &avx2_impl::matvec_adjoint,
    &avx2_impl::beta_weights,
    &avx2_impl::ramp_denoise,
    &avx2_impl::squared_norm,
    &avx2_impl::residual_combine,
};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const Table& select() {
  const char* forced = std::getenv("RAMPDET_KERNELS");
  const std::string_view choice = forced ? forced : "";
  if (choice == "scalar") return kScalar;
  if (const Table* fast = avx2()) return *fast;
  return kScalar;
}

}  // namespace

const Table& scalar() { return kScalar; }

const Table* avx2() {
#if defined(RAMPDET_HAVE_AVX2)
  static const bool available = cpu_has_avx2();
  return available ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() {
  static const Table& chosen = select();
  return chosen;
}

}  // namespace rampdet::kernels
