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

#include "collarscd/array_api.hpp"

#include <string>

#include "collarscd/error.hpp"
#include "collarscd/evaluation.hpp"
#include "collarscd/losses.hpp"

namespace collarscd::array_api {

CollarLossOutput CollarLossForwardBackward(
    std::span<const double> log_p0, std::span<const double> log_p1,
    std::span<const std::int64_t> change_points, int collar,
    CollarSemantics semantics) {
  const FrameScoreSequence scores(
      std::vector<double>(log_p0.begin(), log_p0.end()),
      std::vector<double>(log_p1.begin(), log_p1.end()), 1.0,
      FrameScoreSequence::Normalization::kUnchecked);
  std::vector<std::size_t> positions;
  positions.reserve(change_points.size());
  for (std::int64_t z : change_points) {
    if (z < 0) {
      throw Error(ErrorKind::kOutOfBounds,
                  "negative change point " + std::to_string(z));
    }
    positions.push_back(static_cast<std::size_t>(z));
  }
  const CollarConfig cfg{collar, semantics, EdgePolicy::kClamp};
  auto loss = CollarLossEfficient(scores, ChangePointSet(std::move(positions)),
                                  cfg, WithGradient::kYes);
  return {loss.value, std::move(loss.grad->d_log_p0),
          std::move(loss.grad->d_log_p1)};
}

ScoreOutput Score(std::span<const double> refs_seconds,
                  std::span<const double> hyps_seconds, double forgiveness) {
  const ChangePointTimes refs(
      std::vector<double>(refs_seconds.begin(), refs_seconds.end()));
  const ChangePointTimes hyps(
      std::vector<double>(hyps_seconds.begin(), hyps_seconds.end()));
  const auto p = PrecisionRecallF1(MatchChangePoints(refs, hyps, forgiveness));
  return {p.precision, p.recall, p.f1};
}

}  // namespace collarscd::array_api
