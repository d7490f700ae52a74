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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rampdet {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;  // column-major
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised when the regularized normal matrix cannot be factorized.
/// `rcond()` carries the reciprocal condition estimate (0 when unknown).
class SingularSystemError : public NumericError {
 public:
  SingularSystemError(const std::string& what, double rcond)
      : NumericError(what), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

class RankDeficientError : public NumericError {
 public:
  RankDeficientError(const std::string& what, long rank)
      : NumericError(what), rank_(rank) {}
  long rank() const noexcept { return rank_; }

 private:
  long rank_;
};

/// Base (zero-forcing-like) or robust (l2-penalized, LMMSE-like) formulation.
enum class Variant { Base, Robust };

inline const char* to_string(Variant v) { return v == Variant::Base ? "base" : "robust"; }

inline void require_same(long a, long b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": " + std::to_string(a) + " != " + std::to_string(b));
  }
}

}  // namespace rampdet
