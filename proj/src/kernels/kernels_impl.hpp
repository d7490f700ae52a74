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

#include "rampdet/kernels.hpp"

namespace rampdet::kernels {

#define RAMPDET_KERNEL_DECLS                                                                 \
  void matvec(MatrixView h, std::span<const cplx> x, std::span<cplx> out);                   \
  void matvec_adjoint(MatrixView h, std::span<const cplx> z, std::span<cplx> out);           \
  void beta_weights(std::span<const cplx> s, std::span<const cplx> points, double alpha,     \
                    std::span<double> weights, std::span<cplx> b, std::span<double> bv);     \
  double ramp_denoise(std::span<const cplx> r, std::span<const cplx> b,                      \
                      std::span<const double> bv, DenoiseParams p, std::span<cplx> out);     \
  double squared_norm(std::span<const cplx> x);                                              \
  void residual_combine(std::span<const cplx> y, std::span<const cplx> hs,                   \
                        std::span<const cplx> z_prev, double coeff, std::span<cplx> out);

namespace scalar_impl {
RAMPDET_KERNEL_DECLS
}

namespace avx2_impl {
RAMPDET_KERNEL_DECLS
}

#undef RAMPDET_KERNEL_DECLS

}  // namespace rampdet::kernels
