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

#include "collarscd/train.hpp"

#include <cmath>
#include <numeric>

#include "collarscd/error.hpp"
#include "collarscd/logmath.hpp"
#include "collarscd/rng.hpp"

namespace collarscd {

const char* ObjectiveName(Objective objective) {
  switch (objective) {
    case Objective::kStandardNeighborhood: return "standard_neighborhood";
    case Objective::kCollarAware: return "collar_aware";
  }
  return "unknown";
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorKind::kInvalidConfig, "learning rate must be positive");
  }
  if (epochs < 1 || batch_size < 1) {
    throw Error(ErrorKind::kInvalidConfig, "epochs and batch size must be >= 1");
  }
  if (!(max_grad_norm >= 0.0)) {
    throw Error(ErrorKind::kInvalidConfig, "max_grad_norm must be >= 0");
  }
  if (!(neighborhood_radius_seconds >= 0.0)) {
    throw Error(ErrorKind::kInvalidConfig, "neighborhood radius must be >= 0");
  }
  if (objective == Objective::kCollarAware) collar.Validate();
}

LossResult SequenceLoss(const TinyModel& model, const SynthSequence& seq,
                        double frame_shift, const TrainConfig& cfg,
                        std::vector<double>* logit_grad,
                        std::vector<double>* hidden) {
  const auto logits = model.Forward(seq, hidden);
  const auto scores = FrameScoreSequence::FromLogits(logits, frame_shift);
  const auto want = logit_grad ? WithGradient::kYes : WithGradient::kNo;
  LossResult loss;
  if (cfg.objective == Objective::kCollarAware) {
    loss = CollarLossEfficient(scores, seq.annotated, cfg.collar, want);
  } else {
    const auto labels =
        ExpandNeighborhood(seq.annotated, cfg.neighborhood_radius_seconds,
                           frame_shift, seq.num_frames);
    loss = BceDense(scores, labels, want);
  }
  if (!std::isfinite(loss.value)) {
    throw Error(ErrorKind::kNumeric, "training loss diverged");
  }
  if (logit_grad) *logit_grad = GradientWrtLogits(*loss.grad, logits);
  return loss;
}

double MeanLoss(const TinyModel& model, std::span<const SynthSequence> split,
                double frame_shift, const TrainConfig& cfg) {
  KahanSum total;
  for (const auto& seq : split) {
    total.Add(SequenceLoss(model, seq, frame_shift, cfg, nullptr).value);
  }
  return split.empty() ? 0.0 : total.value() / static_cast<double>(split.size());
}

std::vector<double> ParameterGradient(const TinyModel& model,
                                      std::span<const SynthSequence> items,
                                      double frame_shift,
                                      const TrainConfig& cfg,
                                      double* mean_loss) {
  std::vector<double> grad(model.parameters().size(), 0.0);
  std::vector<double> logit_grad;
  std::vector<double> hidden;
  KahanSum loss;
  for (const auto& seq : items) {
    loss.Add(SequenceLoss(model, seq, frame_shift, cfg, &logit_grad, &hidden)
                 .value);
    model.Backward(seq, logit_grad, grad, hidden);
  }
  const double scale = items.empty() ? 0.0 : 1.0 / static_cast<double>(items.size());
  for (double& g : grad) g *= scale;
  if (mean_loss) *mean_loss = loss.value() * scale;
  return grad;
}

TrainResult Train(TinyModel model, std::span<const SynthSequence> train,
                  double frame_shift, const TrainConfig& cfg) {
  cfg.Validate();
  if (train.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "training set is empty");
  }
  if (cfg.objective == Objective::kCollarAware) {
    for (const auto& seq : train) {
      CollarWindows(seq.annotated, cfg.collar, seq.num_frames);
    }
  }
  Rng rng(cfg.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> loss_trace;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(
          rng.UniformInt(0, static_cast<std::int64_t>(i) - 1));
      std::swap(order[i - 1], order[j]);
    }
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      std::vector<double> grad(model.parameters().size(), 0.0);
      std::vector<double> logit_grad;
      std::vector<double> hidden;
      for (std::size_t k = start; k < stop; ++k) {
        const auto& seq = train[order[k]];
        SequenceLoss(model, seq, frame_shift, cfg, &logit_grad, &hidden);
        model.Backward(seq, logit_grad, grad, hidden);
      }
      double step = cfg.learning_rate / static_cast<double>(stop - start);
      if (cfg.max_grad_norm > 0.0) {
        double sq = 0.0;
        for (double g : grad) sq += g * g;
        const double norm = std::sqrt(sq) / static_cast<double>(stop - start);
        if (norm > cfg.max_grad_norm) step *= cfg.max_grad_norm / norm;
      }
      auto params = model.mutable_parameters();
      for (std::size_t p = 0; p < params.size(); ++p) params[p] -= step * grad[p];
    }
    loss_trace.push_back(MeanLoss(model, train, frame_shift, cfg));
  }
  return TrainResult{std::move(model), std::move(loss_trace)};
}

}  // namespace collarscd
