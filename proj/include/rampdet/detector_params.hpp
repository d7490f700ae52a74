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

#include "rampdet/system.hpp"

namespace rampdet {

/// Iteration controls shared by the iterative detectors.
struct DetectorParams {
  double alpha = 0.1;       // l0-approximation tightness of the beta weights
  double lambda_eff = 1.0;  // regularization strength relative to noise power
  int t_max = 100;
  double epsilon = 1e-6;
  bool early_stop = true;

  static DetectorParams from(const SimConfig& cfg) {
    return {cfg.alpha, cfg.lambda_eff, cfg.t_max, cfg.epsilon, true};
  }
};

}  // namespace rampdet
