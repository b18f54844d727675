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

#include "collarscd/losses.hpp"

#include <cmath>
#include <string>

#include "collarscd/error.hpp"
#include "collarscd/logmath.hpp"

namespace collarscd {

namespace {

Gradient ZeroGradient(std::size_t n) {
  return Gradient{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
}

// Candidate terms of one window: log_p1_j + (sum_{t in W} log_p0_t - log_p0_j).
std::vector<double> WindowCandidates(const FrameScoreSequence& scores,
                                     const IndexRange& w,
                                     double* window_log_p0) {
  const auto lp0 = scores.log_p0();
  const auto lp1 = scores.log_p1();
  KahanSum total;
  for (std::size_t t = w.first; t <= w.last; ++t) total.Add(lp0[t]);
  *window_log_p0 = total.value();
  std::vector<double> cand(w.size());
  for (std::size_t j = w.first; j <= w.last; ++j) {
    cand[j - w.first] = lp1[j] + (*window_log_p0 - lp0[j]);
  }
  return cand;
}

}  // namespace

LossResult BceDense(const FrameScoreSequence& scores,
                    const LabelSequence& labels, WithGradient with_grad) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                "scores have " + std::to_string(scores.size()) +
                    " frames but labels have " +
                    std::to_string(labels.size()));
  }
  const auto lp0 = scores.log_p0();
  const auto lp1 = scores.log_p1();
  double acc = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    acc += labels[i] ? lp1[i] : lp0[i];
  }
  LossResult out{-acc, std::nullopt};
  if (with_grad == WithGradient::kYes) {
    Gradient g = ZeroGradient(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
      (labels[i] ? g.d_log_p1 : g.d_log_p0)[i] = -1.0;
    }
    out.grad = std::move(g);
  }
  return out;
}

LossResult BceSparse(const FrameScoreSequence& scores,
                     const ChangePointSet& boundaries,
                     WithGradient with_grad) {
  boundaries.CheckRange(scores.size());
  const auto lp0 = scores.log_p0();
  const auto lp1 = scores.log_p1();
  double acc = 0.0;
  for (double v : lp0) acc += v;
  for (std::size_t z : boundaries.positions()) acc -= lp0[z];
  for (std::size_t z : boundaries.positions()) acc += lp1[z];
  LossResult out{-acc, std::nullopt};
  if (with_grad == WithGradient::kYes) {
    Gradient g{std::vector<double>(scores.size(), -1.0),
               std::vector<double>(scores.size(), 0.0)};
    for (std::size_t z : boundaries.positions()) {
      g.d_log_p0[z] = 0.0;
      g.d_log_p1[z] = -1.0;
    }
    out.grad = std::move(g);
  }
  return out;
}

LabelSequence ExpandNeighborhood(const ChangePointSet& boundaries,
                                 double radius_seconds, double frame_shift,
                                 std::size_t num_frames) {
  if (num_frames == 0) {
    throw Error(ErrorKind::kInvalidArgument, "need at least one frame");
  }
  if (!(frame_shift > 0.0) || !(radius_seconds >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "radius must be >= 0 and frame shift > 0");
  }
  boundaries.CheckRange(num_frames);
  // Frames k steps away are at distance k * frame_shift; the epsilon absorbs
  // representation error in e.g. 0.05 / 0.01.
  const auto radius = static_cast<std::size_t>(
      std::floor(radius_seconds / frame_shift + 1e-9));
  std::vector<std::uint8_t> labels(num_frames, 0);
  for (std::size_t z : boundaries.positions()) {
    const std::size_t lo = z >= radius ? z - radius : 0;
    const std::size_t hi = std::min(num_frames - 1, z + radius);
    for (std::size_t t = lo; t <= hi; ++t) labels[t] = 1;
  }
  return LabelSequence(std::move(labels));
}

std::vector<IndexRange> CollarWindows(const ChangePointSet& boundaries,
                                      const CollarConfig& cfg,
                                      std::size_t num_frames) {
  cfg.Validate();
  boundaries.CheckRange(num_frames);
  std::vector<IndexRange> windows;
  windows.reserve(boundaries.size());
  for (std::size_t z : boundaries.positions()) {
    windows.push_back(CollarWindow(z, cfg, num_frames));
    if (windows.size() > 1 &&
        windows[windows.size() - 2].last >= windows.back().first) {
      throw Error(ErrorKind::kOverlap,
                  "collar windows of change points " +
                      std::to_string(boundaries[windows.size() - 2]) +
                      " and " + std::to_string(z) + " overlap");
    }
  }
  return windows;
}

LossResult CollarLossBruteForce(const FrameScoreSequence& scores,
                                const ChangePointSet& boundaries,
                                const CollarConfig& cfg,
                                WithGradient with_grad,
                                std::size_t max_configurations) {
  const auto windows = CollarWindows(boundaries, cfg, scores.size());

  std::size_t count = 1;
  for (const auto& w : windows) {
    if (count > max_configurations / w.size()) {
      throw Error(ErrorKind::kTooLarge,
                  "more than " + std::to_string(max_configurations) +
                      " collar configurations to enumerate");
    }
    count *= w.size();
  }

  // Odometer over one chosen frame per window.
  std::vector<std::size_t> choice(windows.size());
  for (std::size_t k = 0; k < windows.size(); ++k) choice[k] = windows[k].first;
  std::vector<std::vector<std::size_t>> configs;
  std::vector<double> neg_losses;
  configs.reserve(count);
  neg_losses.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const ChangePointSet config(choice);
    neg_losses.push_back(-BceSparse(scores, config, WithGradient::kNo).value);
    configs.push_back(choice);
    for (std::size_t k = windows.size(); k-- > 0;) {
      if (choice[k] < windows[k].last) {
        ++choice[k];
        break;
      }
      choice[k] = windows[k].first;
    }
  }

  LossResult out{-LogSumExp(neg_losses), std::nullopt};
  if (!std::isfinite(out.value)) {
    throw Error(ErrorKind::kNumeric, "collar loss is not finite");
  }
  if (with_grad == WithGradient::kYes) {
    Gradient g = ZeroGradient(scores.size());
    for (std::size_t n = 0; n < configs.size(); ++n) {
      const double weight = std::exp(neg_losses[n] + out.value);
      const auto per_config =
          BceSparse(scores, ChangePointSet(configs[n]), WithGradient::kYes);
      for (std::size_t t = 0; t < scores.size(); ++t) {
        g.d_log_p0[t] += weight * per_config.grad->d_log_p0[t];
        g.d_log_p1[t] += weight * per_config.grad->d_log_p1[t];
      }
    }
    out.grad = std::move(g);
  }
  return out;
}

LossResult CollarLossEfficient(const FrameScoreSequence& scores,
                               const ChangePointSet& boundaries,
                               const CollarConfig& cfg,
                               WithGradient with_grad) {
  const auto windows = CollarWindows(boundaries, cfg, scores.size());
  const auto lp0 = scores.log_p0();

  double result = 0.0;
  for (double v : lp0) result += v;

  std::optional<Gradient> g;
  if (with_grad == WithGradient::kYes) {
    g = Gradient{std::vector<double>(scores.size(), -1.0),
                 std::vector<double>(scores.size(), 0.0)};
  }
  for (const auto& w : windows) {
    double window_log_p0 = 0.0;
    auto cand = WindowCandidates(scores, w, &window_log_p0);
    result -= window_log_p0;
    result += SoftmaxInPlace(cand);  // cand now holds the posteriors
    if (g) {
      for (std::size_t j = w.first; j <= w.last; ++j) {
        const double alpha = cand[j - w.first];
        g->d_log_p1[j] = -alpha;
        g->d_log_p0[j] = -(1.0 - alpha);
      }
    }
  }
  if (!std::isfinite(result)) {
    throw Error(ErrorKind::kNumeric, "collar loss is not finite");
  }
  return LossResult{-result, std::move(g)};
}

std::vector<std::vector<double>> CollarPosteriors(
    const FrameScoreSequence& scores, const ChangePointSet& boundaries,
    const CollarConfig& cfg) {
  const auto windows = CollarWindows(boundaries, cfg, scores.size());
  std::vector<std::vector<double>> out;
  out.reserve(windows.size());
  for (const auto& w : windows) {
    double unused = 0.0;
    auto cand = WindowCandidates(scores, w, &unused);
    SoftmaxInPlace(cand);
    out.push_back(std::move(cand));
  }
  return out;
}

std::vector<double> GradientWrtLogits(const Gradient& grad,
                                      std::span<const double> logits) {
  if (grad.d_log_p0.size() != logits.size() ||
      grad.d_log_p1.size() != logits.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                "gradient and logits differ in length");
  }
  std::vector<double> out(logits.size());
  for (std::size_t t = 0; t < logits.size(); ++t) {
    // d logsigmoid(a)/da = sigmoid(-a); d logsigmoid(-a)/da = -sigmoid(a).
    out[t] = grad.d_log_p1[t] * Sigmoid(-logits[t]) -
             grad.d_log_p0[t] * Sigmoid(logits[t]);
  }
  return out;
}

}  // namespace collarscd
