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

#include <cmath>

#include "kernels_impl.hpp"

namespace rampdet::kernels::scalar_impl {

void matvec(MatrixView h, std::span<const cplx> x, std::span<cplx> out) {
  for (std::size_t i = 0; i < h.rows; ++i) out[i] = cplx{};
  for (std::size_t j = 0; j < h.cols; ++j) {
    const cplx* col = h.column(j);
    const double xr = x[j].real();
    const double xi = x[j].imag();
    for (std::size_t i = 0; i < h.rows; ++i) {
      const double hr = col[i].real();
      const double hi = col[i].imag();
      out[i] += cplx{hr * xr - hi * xi, hi * xr + hr * xi};
    }
  }
}

void matvec_adjoint(MatrixView h, std::span<const cplx> z, std::span<cplx> out) {
  for (std::size_t j = 0; j < h.cols; ++j) {
    const cplx* col = h.column(j);
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < h.rows; ++i) {
      const double hr = col[i].real();
      const double hi = col[i].imag();
      re += hr * z[i].real() + hi * z[i].imag();
      im += hr * z[i].imag() - hi * z[i].real();
    }
    out[j] = {re, im};
  }
}

void beta_weights(std::span<const cplx> s, std::span<const cplx> points, double alpha,
                  std::span<double> weights, std::span<cplx> b, std::span<double> bv) {
  const std::size_t k = points.size();
  const double root_alpha = std::sqrt(alpha);
  for (std::size_t m = 0; m < s.size(); ++m) {
    double b_re = 0.0;
    double b_im = 0.0;
    double bv_m = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double dr = s[m].real() - points[i].real();
      const double di = s[m].imag() - points[i].imag();
      const double w = root_alpha / (dr * dr + di * di + alpha);
      const double w2 = w * w;
      weights[m * k + i] = w;
      b_re += w2 * points[i].real();
      b_im += w2 * points[i].imag();
      bv_m += w2;
    }
    b[m] = {b_re, b_im};
    bv[m] = bv_m;
  }
}

double ramp_denoise(std::span<const cplx> r, std::span<const cplx> b, std::span<const double> bv,
                    DenoiseParams p, std::span<cplx> out) {
  const double lv = p.lambda_eff * p.v;
  const double base = 1.0 + (p.robust ? p.v : 0.0);
  double inv_sum = 0.0;
  for (std::size_t m = 0; m < r.size(); ++m) {
    const double inv = 1.0 / (base + lv * bv[m]);
    out[m] = {(r[m].real() + lv * b[m].real()) * inv, (r[m].imag() + lv * b[m].imag()) * inv};
    inv_sum += inv;
  }
  return inv_sum;
}

double squared_norm(std::span<const cplx> x) {
  double acc = 0.0;
  for (const cplx& v : x) acc += v.real() * v.real() + v.imag() * v.imag();
  return acc;
}

void residual_combine(std::span<const cplx> y, std::span<const cplx> hs,
                      std::span<const cplx> z_prev, double coeff, std::span<cplx> out) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = {y[i].real() - hs[i].real() + coeff * z_prev[i].real(),
              y[i].imag() - hs[i].imag() + coeff * z_prev[i].imag()};
  }
}

}  // namespace rampdet::kernels::scalar_impl
