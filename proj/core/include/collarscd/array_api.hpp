// Copyright 2026 The collarscd Authors
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

// Flat-array entry points for foreign-language wrappers. Inputs are plain
// contiguous doubles and integers; failures surface as collarscd::Error with
// the same ErrorKind as the underlying library call.

#include <cstdint>
#include <span>
#include <vector>

#include "collarscd/types.hpp"

namespace collarscd::array_api {

struct CollarLossOutput {
  double value = 0.0;
  std::vector<double> grad_log_p0;
  std::vector<double> grad_log_p1;
};

// Collar-aware loss and gradient. Scores are not required to be normalized.
// collar == 0 with inclusive semantics is plain BCE.
CollarLossOutput CollarLossForwardBackward(
    std::span<const double> log_p0, std::span<const double> log_p1,
    std::span<const std::int64_t> change_points, int collar,
    CollarSemantics semantics);

struct ScoreOutput {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

ScoreOutput Score(std::span<const double> refs_seconds,
                  std::span<const double> hyps_seconds, double forgiveness);

}  // namespace collarscd::array_api
