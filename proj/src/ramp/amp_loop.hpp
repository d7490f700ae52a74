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

// Iteration skeleton shared by RAMP and the standard-AMP baseline. Only the
// element-wise denoiser differs between them.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "rampdet/kernels.hpp"
#include "rampdet/ramp.hpp"

namespace rampdet::detail {

struct NormalizedProblem {
  CMatrix h;
  CVector y;
  double scale = 1.0;
};

inline NormalizedProblem normalize(const CMatrix& h, const CVector& y, OpCounter* ops) {
  require_same(h.rows(), y.size(), "detector: rows(H) vs len(y)");
  if (h.cols() == 0 || h.rows() == 0) throw DimensionError("detector: empty channel");
  NormalizedProblem p;
  p.scale = column_scale(h);
  if (!(p.scale > 0.0) || !std::isfinite(p.scale)) {
    throw NumericError("detector: channel has zero or non-finite energy");
  }
  p.h = h / p.scale;
  p.y = y / p.scale;
  if (ops) ops->add_setup(static_cast<std::uint64_t>(h.size() + y.size()));
  return p;
}

inline bool all_finite(const CVector& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i].real()) || !std::isfinite(x[i].imag())) return false;
  }
  return true;
}

struct LoopOptions {
  const DetectorParams* params = nullptr;
  const CVector* reference = nullptr;
  const std::vector<int>* capture_iterations = nullptr;
  bool record_estimates = false;
  OpCounter* ops = nullptr;
};

/// `denoise(s_hat, r, v, out)` writes the new estimate and returns <eta'>.
template <class Denoise>
AmpResult amp_iterate(const NormalizedProblem& p, const LoopOptions& opt, Denoise&& denoise) {
  const auto& k = kernels::active();
  const auto view = kernels::view(p.h);
  const Eigen::Index n = p.h.rows();
  const Eigen::Index m = p.h.cols();
  const auto nn = static_cast<std::size_t>(n);
  const auto mm = static_cast<std::size_t>(m);
  const DetectorParams& params = *opt.params;

  AmpResult out;
  DetectorState& st = out.state;
  st.aspect_ratio = static_cast<double>(n) / static_cast<double>(m);
  st.s_hat = CVector::Zero(m);
  st.residual = CVector::Zero(n);

  CVector r(m), next(m), hs(n), z_next(n);
  for (int t = 1; t <= params.t_max; ++t) {
    const double v =
        std::max(k.squared_norm({st.residual.data(), nn}) / static_cast<double>(n), kVarianceFloor);
    k.matvec_adjoint(view, {st.residual.data(), nn}, {r.data(), mm});
    r += st.s_hat;

    const double divergence = denoise(st.s_hat, r, v, next);
    if (!all_finite(next) || !std::isfinite(divergence)) {
      out.diverged_at = t;
      break;
    }

    k.matvec(view, {next.data(), mm}, {hs.data(), nn});
    k.residual_combine({p.y.data(), nn}, {hs.data(), nn}, {st.residual.data(), nn},
                       divergence / st.aspect_ratio, {z_next.data(), nn});
    if (opt.ops) {
      opt.ops->add(2 * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(m) +
                   2 * static_cast<std::uint64_t>(n));
      ++opt.ops->iterations;
    }

    IterationRecord rec;
    rec.v = v;
    rec.eps = (next - st.s_hat).norm();
    rec.divergence = divergence;
    if (opt.reference) {
      rec.mse = (next - *opt.reference).squaredNorm() / static_cast<double>(m);
      rec.effective_var = (r - *opt.reference).squaredNorm() / static_cast<double>(m);
    }
    if (opt.capture_iterations &&
        std::find(opt.capture_iterations->begin(), opt.capture_iterations->end(), t) !=
            opt.capture_iterations->end()) {
      out.captures.push_back({t, r, v});
    }

    std::swap(st.s_hat, next);
    std::swap(st.residual, z_next);
    st.eff_var = v;
    st.eps_t = rec.eps;
    st.iter = t;
    st.trace.push_back(rec);
    if (opt.record_estimates) out.estimates.push_back(st.s_hat);

    // Iteration 1 runs on the zero residual and cannot move the estimate.
    if (params.early_stop && t > 1 && rec.eps < params.epsilon) break;
  }
  out.s_hat = st.s_hat;
  return out;
}

}  // namespace rampdet::detail
