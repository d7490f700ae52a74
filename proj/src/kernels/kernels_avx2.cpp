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

// AVX2/FMA variants. Two complex doubles per 256-bit register, interleaved
// (re, im, re, im); odd-length tails fall back to scalar arithmetic.

#include <immintrin.h>

#include <cmath>
#include <vector>

#include "kernels_impl.hpp"

namespace rampdet::kernels::avx2_impl {

namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// (a0, a1) -> (a0, a0, a1, a1)
inline __m256d duplicate_pair(const double* p) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(p)), 0b01010000);
}

}  // namespace

void matvec(MatrixView h, std::span<const cplx> x, std::span<cplx> out) {
  double* o = as_doubles(out.data());
  const std::size_t rows = h.rows;
  for (std::size_t i = 0; i < rows; ++i) out[i] = cplx{};
  for (std::size_t j = 0; j < h.cols; ++j) {
    const double* col = as_doubles(h.column(j));
    const __m256d xr = _mm256_set1_pd(x[j].real());
    const __m256d xi = _mm256_set1_pd(x[j].imag());
    std::size_t i = 0;
    for (; i + 2 <= rows; i += 2) {
      const __m256d hv = _mm256_loadu_pd(col + 2 * i);
      const __m256d swapped = _mm256_permute_pd(hv, 0b0101);
      const __m256d cross = _mm256_mul_pd(swapped, xi);
      const __m256d prod = _mm256_fmaddsub_pd(hv, xr, cross);
      _mm256_storeu_pd(o + 2 * i, _mm256_add_pd(_mm256_loadu_pd(o + 2 * i), prod));
    }
    for (; i < rows; ++i) {
      const cplx hv = h.column(j)[i];
      out[i] += cplx{hv.real() * x[j].real() - hv.imag() * x[j].imag(),
                     hv.imag() * x[j].real() + hv.real() * x[j].imag()};
    }
  }
}

void matvec_adjoint(MatrixView h, std::span<const cplx> z, std::span<cplx> out) {
  const double* zd = as_doubles(z.data());
  const std::size_t rows = h.rows;
  const __m256d alternate = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  for (std::size_t j = 0; j < h.cols; ++j) {
    const double* col = as_doubles(h.column(j));
    __m256d direct = _mm256_setzero_pd();  // hr zr, hi zi
    __m256d cross = _mm256_setzero_pd();   // hr zi, hi zr
    std::size_t i = 0;
    for (; i + 2 <= rows; i += 2) {
      const __m256d hv = _mm256_loadu_pd(col + 2 * i);
      const __m256d zv = _mm256_loadu_pd(zd + 2 * i);
      direct = _mm256_fmadd_pd(hv, zv, direct);
      cross = _mm256_fmadd_pd(hv, _mm256_permute_pd(zv, 0b0101), cross);
    }
    double re = hsum(direct);
    double im = hsum(_mm256_mul_pd(cross, alternate));
    for (; i < rows; ++i) {
      const cplx hv = h.column(j)[i];
      re += hv.real() * z[i].real() + hv.imag() * z[i].imag();
      im += hv.real() * z[i].imag() - hv.imag() * z[i].real();
    }
    out[j] = {re, im};
  }
}

void beta_weights(std::span<const cplx> s, std::span<const cplx> points, double alpha,
                  std::span<double> weights, std::span<cplx> b, std::span<double> bv) {
  const std::size_t k = points.size();
  const std::size_t count = s.size();
  const double root_alpha = std::sqrt(alpha);
  __m256d pv[64];  // constellations have at most 64 points
  for (std::size_t i = 0; i < k; ++i) {
    pv[i] = _mm256_setr_pd(points[i].real(), points[i].imag(), points[i].real(), points[i].imag());
  }
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vra = _mm256_set1_pd(root_alpha);
  const double* sd = as_doubles(s.data());
  double* bd = as_doubles(b.data());
  alignas(32) double lanes[4];

  std::size_t m = 0;
  for (; m + 2 <= count; m += 2) {
    const __m256d sv = _mm256_loadu_pd(sd + 2 * m);
    __m256d b_acc = _mm256_setzero_pd();
    __m256d bv_acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < k; ++i) {
      const __m256d d = _mm256_sub_pd(sv, pv[i]);
      const __m256d sq = _mm256_mul_pd(d, d);
      const __m256d dist = _mm256_hadd_pd(sq, sq);  // (d0, d0, d1, d1)
      const __m256d w = _mm256_div_pd(vra, _mm256_add_pd(dist, va));
      const __m256d w2 = _mm256_mul_pd(w, w);
      _mm256_store_pd(lanes, w);
      weights[m * k + i] = lanes[0];
      weights[(m + 1) * k + i] = lanes[2];
      b_acc = _mm256_fmadd_pd(w2, pv[i], b_acc);
      bv_acc = _mm256_add_pd(bv_acc, w2);
    }
    _mm256_storeu_pd(bd + 2 * m, b_acc);
    _mm256_store_pd(lanes, bv_acc);
    bv[m] = lanes[0];
    bv[m + 1] = lanes[2];
  }
  if (m < count) {
    scalar_impl::beta_weights(s.subspan(m), points, alpha, weights.subspan(m * k), b.subspan(m),
                              bv.subspan(m));
  }
}

double ramp_denoise(std::span<const cplx> r, std::span<const cplx> b, std::span<const double> bv,
                    DenoiseParams p, std::span<cplx> out) {
  const double lv_s = p.lambda_eff * p.v;
  const double base_s = 1.0 + (p.robust ? p.v : 0.0);
  const __m256d lv = _mm256_set1_pd(lv_s);
  const __m256d base = _mm256_set1_pd(base_s);
  const __m256d one = _mm256_set1_pd(1.0);
  const double* rd = as_doubles(r.data());
  const double* bd = as_doubles(b.data());
  double* od = as_doubles(out.data());
  __m256d inv_acc = _mm256_setzero_pd();
  std::size_t m = 0;
  for (; m + 2 <= r.size(); m += 2) {
    const __m256d den = _mm256_fmadd_pd(lv, duplicate_pair(bv.data() + m), base);
    const __m256d inv = _mm256_div_pd(one, den);
    const __m256d num = _mm256_fmadd_pd(lv, _mm256_loadu_pd(bd + 2 * m), _mm256_loadu_pd(rd + 2 * m));
    _mm256_storeu_pd(od + 2 * m, _mm256_mul_pd(num, inv));
    inv_acc = _mm256_add_pd(inv_acc, inv);
  }
  // Each symbol's 1/den sits in two lanes.
  double inv_sum = 0.5 * hsum(inv_acc);
  for (; m < r.size(); ++m) {
    const double inv = 1.0 / (base_s + lv_s * bv[m]);
    out[m] = {(r[m].real() + lv_s * b[m].real()) * inv, (r[m].imag() + lv_s * b[m].imag()) * inv};
    inv_sum += inv;
  }
  return inv_sum;
}

double squared_norm(std::span<const cplx> x) {
  const double* xd = as_doubles(x.data());
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= x.size(); i += 2) {
    const __m256d v = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double total = hsum(acc);
  for (; i < x.size(); ++i) total += std::norm(x[i]);
  return total;
}

void residual_combine(std::span<const cplx> y, std::span<const cplx> hs,
                      std::span<const cplx> z_prev, double coeff, std::span<cplx> out) {
  const double* yd = as_doubles(y.data());
  const double* hd = as_doubles(hs.data());
  const double* zd = as_doubles(z_prev.data());
  double* od = as_doubles(out.data());
  const __m256d c = _mm256_set1_pd(coeff);
  std::size_t i = 0;
  for (; i + 2 <= y.size(); i += 2) {
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(yd + 2 * i), _mm256_loadu_pd(hd + 2 * i));
    _mm256_storeu_pd(od + 2 * i, _mm256_fmadd_pd(c, _mm256_loadu_pd(zd + 2 * i), diff));
  }
  for (; i < y.size(); ++i) out[i] = y[i] - hs[i] + coeff * z_prev[i];
}

}  // namespace rampdet::kernels::avx2_impl
