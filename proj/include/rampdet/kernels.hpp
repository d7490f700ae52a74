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

// Inner loops of the message-passing detectors. Each kernel has a scalar
// reference implementation and, on x86-64 builds, an AVX2/FMA variant. The
// variant is picked once at startup from CPU features; RAMPDET_KERNELS=scalar
// (or =avx2) in the environment forces a choice.

#include <cstddef>
#include <span>
#include <string_view>

#include "rampdet/types.hpp"

namespace rampdet::kernels {

/// Column-major complex matrix view.
struct MatrixView {
  const cplx* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;

  const cplx* column(std::size_t j) const { return data + j * rows; }
};

inline MatrixView view(const CMatrix& h) {
  return {h.data(), static_cast<std::size_t>(h.rows()), static_cast<std::size_t>(h.cols())};
}

struct DenoiseParams {
  double v = 0.0;
  double lambda_eff = 0.0;
  bool robust = false;
};

struct Table {
  std::string_view name;

  /// out = H x
  void (*matvec)(MatrixView h, std::span<const cplx> x, std::span<cplx> out);
  /// out = H^H z
  void (*matvec_adjoint)(MatrixView h, std::span<const cplx> z, std::span<cplx> out);
  /// weights[m*K + i] = sqrt(alpha) / (|s_m - c_i|^2 + alpha);
  /// b_m = sum_i weights^2 c_i, bv_m = sum_i weights^2.
  void (*beta_weights)(std::span<const cplx> s, std::span<const cplx> points, double alpha,
                       std::span<double> weights, std::span<cplx> b, std::span<double> bv);
  /// out_m = (r_m + lambda v b_m) / (1 + [robust] v + lambda v bv_m).
  /// Returns sum_m 1 / denominator_m.
  double (*ramp_denoise)(std::span<const cplx> r, std::span<const cplx> b,
                         std::span<const double> bv, DenoiseParams p, std::span<cplx> out);
  double (*squared_norm)(std::span<const cplx> x);
  /// out = y - hs + coeff * z_prev
  void (*residual_combine)(std::span<const cplx> y, std::span<const cplx> hs,
                           std::span<const cplx> z_prev, double coeff, std::span<cplx> out);
};

const Table& scalar();
/// nullptr when the build or the CPU lacks AVX2+FMA.
const Table* avx2();
/// The table selected for this process.
const Table& active();

}  // namespace rampdet::kernels
