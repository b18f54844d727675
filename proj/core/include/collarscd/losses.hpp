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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "collarscd/types.hpp"

namespace collarscd {

// Partial derivatives of a loss with respect to each per-frame log-likelihood.
struct Gradient {
  std::vector<double> d_log_p0;
  std::vector<double> d_log_p1;
};

struct LossResult {
  double value = 0.0;  // nats
  std::optional<Gradient> grad;
};

enum class WithGradient : bool { kNo = false, kYes = true };

// Standard per-frame binary cross-entropy over dense 0/1 labels.
LossResult BceDense(const FrameScoreSequence& scores,
                    const LabelSequence& labels,
                    WithGradient with_grad = WithGradient::kYes);

// Same objective written over the sparse boundary set: all no-boundary terms,
// minus the no-boundary terms at the boundaries, plus the boundary terms.
LossResult BceSparse(const FrameScoreSequence& scores,
                     const ChangePointSet& boundaries,
                     WithGradient with_grad = WithGradient::kYes);

// Labels every frame whose time lies within radius_seconds of an annotated
// boundary (inclusive) as positive. The comparison is done in whole frames,
// so a 50 ms radius covers +-5 frames at 10 ms and only the boundary frame at
// 80 ms.
LabelSequence ExpandNeighborhood(const ChangePointSet& boundaries,
                                 double radius_seconds, double frame_shift,
                                 std::size_t num_frames);

// Collar windows of all boundaries, in order. Throws kOverlap if two windows
// share a frame, plus whatever CollarWindow throws.
std::vector<IndexRange> CollarWindows(const ChangePointSet& boundaries,
                                      const CollarConfig& cfg,
                                      std::size_t num_frames);

inline constexpr std::size_t kMaxEnumeratedConfigurations = 1'000'000;

// Reference implementation of the collar-aware loss by explicit enumeration
// of every configuration with exactly one boundary per collar window:
//
//   L = -log sum_{Z'} exp(-BceSparse(scores, Z'))
//
// The gradient is the posterior-weighted average of the per-configuration
// BCE gradients. Exponential in the number of boundaries; intended as an
// oracle for small inputs only (kTooLarge past max_configurations).
LossResult CollarLossBruteForce(
    const FrameScoreSequence& scores, const ChangePointSet& boundaries,
    const CollarConfig& cfg, WithGradient with_grad = WithGradient::kYes,
    std::size_t max_configurations = kMaxEnumeratedConfigurations);

// Linear-time collar-aware loss. Each window contributes
// logsumexp_j(log_p1_j + sum_{t in W, t != j} log_p0_t) in place of its
// no-boundary terms; the inner sum is the window total minus log_p0_j.
LossResult CollarLossEfficient(const FrameScoreSequence& scores,
                               const ChangePointSet& boundaries,
                               const CollarConfig& cfg,
                               WithGradient with_grad = WithGradient::kYes);

// Posterior probability of each candidate position within each collar window
// (softmax of the candidate terms). One vector per boundary, each summing to 1.
std::vector<std::vector<double>> CollarPosteriors(
    const FrameScoreSequence& scores, const ChangePointSet& boundaries,
    const CollarConfig& cfg);

// Chains a (log_p0, log_p1) gradient through log_p1 = logsigmoid(a),
// log_p0 = logsigmoid(-a) to get d/da per frame.
std::vector<double> GradientWrtLogits(const Gradient& grad,
                                      std::span<const double> logits);

}  // namespace collarscd
