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

#include "rampdet/oracle.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>

namespace rampdet::oracle {

double scalar_objective(cplx s, cplx r, double v, std::span<const double> beta_row,
                        std::span<const cplx> points, double lambda_eff, Variant variant) {
  double value = std::norm(r - s) / v;
  if (variant == Variant::Robust) value += std::norm(s);
  double penalty = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    penalty += beta_row[i] * beta_row[i] * std::norm(s - points[i]);
  }
  return value + lambda_eff * penalty;
}

cplx scalar_gradient(cplx s, cplx r, double v, std::span<const double> beta_row,
                     std::span<const cplx> points, double lambda_eff, Variant variant) {
  cplx g = (s - r) / v;
  if (variant == Variant::Robust) g += s;
  for (std::size_t i = 0; i < points.size(); ++i) {
    g += lambda_eff * beta_row[i] * beta_row[i] * (s - points[i]);
  }
  return g;
}

namespace {

// Scans a (2*half+1)^2 lattice of the given pitch centred on `centre`.
cplx scan(cplx centre, double pitch, int half, cplx r, double v, std::span<const double> beta_row,
          std::span<const cplx> points, double lambda_eff, Variant variant) {
  cplx best = centre;
  double best_value = std::numeric_limits<double>::infinity();
  for (int a = -half; a <= half; ++a) {
    for (int b = -half; b <= half; ++b) {
      const cplx s = centre + cplx{a * pitch, b * pitch};
      const double f = scalar_objective(s, r, v, beta_row, points, lambda_eff, variant);
      if (f < best_value) {
        best_value = f;
        best = s;
      }
    }
  }
  return best;
}

}  // namespace

cplx grid_argmin(cplx r, double v, std::span<const double> beta_row,
                 std::span<const cplx> points, double lambda_eff, Variant variant,
                 double bound) {
  const int coarse_half = static_cast<int>(std::ceil(bound / 0.1));
  cplx best = scan({0.0, 0.0}, 0.1, coarse_half, r, v, beta_row, points, lambda_eff, variant);
  best = scan(best, 0.01, 10, r, v, beta_row, points, lambda_eff, variant);
  return scan(best, 0.001, 10, r, v, beta_row, points, lambda_eff, variant);
}

double central_difference(const std::function<cplx(cplx)>& f, cplx r, double step) {
  const cplx hi = f(r + cplx{step, 0.0});
  const cplx lo = f(r - cplx{step, 0.0});
  return (hi.real() - lo.real()) / (2.0 * step);
}

CVector dense_normal_solve(const CVector& y, const CMatrix& h, const RMatrix& weights,
                           std::span<const cplx> points, double lambda, double noise_var,
                           Variant variant) {
  const Eigen::Index m = h.cols();
  CMatrix a = h.adjoint() * h;
  CVector rhs = h.adjoint() * y;
  for (Eigen::Index j = 0; j < m; ++j) {
    double bv = 0.0;
    cplx b{};
    for (Eigen::Index i = 0; i < weights.rows(); ++i) {
      const double w2 = weights(i, j) * weights(i, j);
      bv += w2;
      b += w2 * points[static_cast<std::size_t>(i)];
    }
    a(j, j) += lambda * bv + (variant == Variant::Robust ? noise_var : 0.0);
    rhs[j] += lambda * b;
  }
  return a.fullPivLu().solve(rhs);
}

CVector objective_gradient(const CVector& y, const CMatrix& h, const CVector& s,
                           const RMatrix& weights, std::span<const cplx> points, double lambda,
                           double noise_var, Variant variant) {
  CVector g = -(h.adjoint() * (y - h * s));
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    if (variant == Variant::Robust) g[j] += noise_var * s[j];
    for (Eigen::Index i = 0; i < weights.rows(); ++i) {
      g[j] += lambda * weights(i, j) * weights(i, j) * (s[j] - points[static_cast<std::size_t>(i)]);
    }
  }
  return g;
}

}  // namespace rampdet::oracle
