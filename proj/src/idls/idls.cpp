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
#include <string>

#include "rampdet/idls.hpp"

namespace rampdet {

namespace {

std::uint64_t u64(Eigen::Index v) { return static_cast<std::uint64_t>(v); }

}  // namespace

double idls_objective(const CVector& y, const CMatrix& h, const CVector& s,
                      const BetaWeights& beta, const Constellation& c, double lambda,
                      double noise_var, Variant variant) {
  double value = (y - h * s).squaredNorm();
  if (variant == Variant::Robust) value += noise_var * s.squaredNorm();
  double penalty = 0.0;
  for (Eigen::Index m = 0; m < s.size(); ++m) {
    for (Eigen::Index i = 0; i < beta.points(); ++i) {
      const double w = beta.weights(i, m);
      penalty += w * w * std::norm(s[m] - c.points[static_cast<std::size_t>(i)]);
    }
  }
  return value + lambda * penalty;
}

IdlsSolver::IdlsSolver(const CMatrix& h, const CVector& y, OpCounter* ops) {
  require_same(h.rows(), y.size(), "IdlsSolver: rows(H) vs len(y)");
  gram_.setZero(h.cols(), h.cols());
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(h.adjoint());
  gram_ = gram_.selfadjointView<Eigen::Lower>();
  matched_ = h.adjoint() * y;
  if (ops) ops->add_setup(u64(h.rows()) * u64(h.cols()) * u64(h.cols() + 1) / 2 + u64(h.size()));
}

CVector IdlsSolver::solve(const BetaWeights& beta, double lambda, double noise_var,
                          Variant variant, OpCounter* ops) const {
  const Eigen::Index m = gram_.rows();
  require_same(beta.symbols(), m, "IdlsSolver: beta symbols vs columns(H)");
  if (!(lambda >= 0.0)) throw NumericError("IDLS: lambda must be >= 0");

  CMatrix a = gram_;
  const double ridge = variant == Variant::Robust ? noise_var : 0.0;
  a.diagonal().array() += (ridge + lambda * beta.bv_agg.array()).cast<cplx>();
  const CVector rhs = matched_ + lambda * beta.b_agg;

  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw SingularSystemError("IDLS: regularized normal matrix is not positive definite", 0.0);
  }
  const double rcond = llt.rcond();
  if (!(rcond > 1e-15)) {
    throw SingularSystemError("IDLS: normal matrix is ill-conditioned (rcond " +
                                  std::to_string(rcond) + ")",
                              rcond);
  }
  if (ops) {
    // Cholesky ~ M^3/6, two triangular solves ~ M^2, diagonal and rhs updates 2M.
    ops->add(u64(m) * u64(m) * u64(m) / 6 + u64(m) * u64(m) + 2 * u64(m));
  }
  return llt.solve(rhs);
}

CVector idls_solve_step(const CVector& y, const CMatrix& h, const BetaWeights& beta,
                        double lambda, double noise_var, Variant variant) {
  return IdlsSolver(h, y).solve(beta, lambda, noise_var, variant);
}

IdlsResult idls_detect(const CVector& y, const CMatrix& h, double noise_var,
                       const Constellation& c, const DetectorParams& params, Variant variant,
                       OpCounter* ops) {
  const IdlsSolver solver(h, y, ops);
  const double lambda = params.lambda_eff * noise_var;
  const auto k = static_cast<std::uint64_t>(c.order());

  IdlsResult result;
  result.s_hat = CVector::Zero(h.cols());
  BetaWeights beta;
  for (int t = 1; t <= params.t_max; ++t) {
    compute_beta_weights(result.s_hat, c, params.alpha, beta);
    if (ops) ops->add(k * u64(h.cols()));
    CVector next = solver.solve(beta, lambda, noise_var, variant, ops);
    const double eps = (next - result.s_hat).norm();
    result.s_hat = std::move(next);
    result.trace.push_back({eps, idls_objective(y, h, result.s_hat, beta, c, lambda, noise_var,
                                                variant)});
    result.iterations = t;
    if (ops) ++ops->iterations;
    if (params.early_stop && eps < params.epsilon) break;
  }
  return result;
}

}  // namespace rampdet
