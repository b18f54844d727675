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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "collarscd/losses.hpp"
#include "collarscd/model.hpp"
#include "collarscd/synth.hpp"

namespace collarscd {

enum class Objective {
  // BCE against labels expanded to every frame within neighborhood_radius of
  // an annotated boundary. Radius 0 is plain BCE on the annotations.
  kStandardNeighborhood,
  // Marginalizes over exactly one boundary per collar window.
  kCollarAware,
};

const char* ObjectiveName(Objective objective);

struct TrainConfig {
  Objective objective = Objective::kCollarAware;
  CollarConfig collar;
  double neighborhood_radius_seconds = 0.05;
  double learning_rate = 0.01;
  std::size_t batch_size = 8;
  std::size_t epochs = 10;
  // Rescales a batch gradient whose L2 norm exceeds this; 0 disables.
  double max_grad_norm = 0.0;
  std::uint64_t seed = 1;

  void Validate() const;
};

struct TrainResult {
  TinyModel model;
  // Mean per-sequence training loss on the parameters at the end of each
  // epoch.
  std::vector<double> loss_trace;
};

// Per-sequence loss and, when logit_grad is given, its gradient with respect
// to the model logits. `hidden` optionally captures activations for Backward.
LossResult SequenceLoss(const TinyModel& model, const SynthSequence& seq,
                        double frame_shift, const TrainConfig& cfg,
                        std::vector<double>* logit_grad,
                        std::vector<double>* hidden = nullptr);

// Mean per-sequence loss over a split, no gradients.
double MeanLoss(const TinyModel& model, std::span<const SynthSequence> split,
                double frame_shift, const TrainConfig& cfg);

// Full gradient of the mean per-sequence loss with respect to the model
// parameters over `items`.
std::vector<double> ParameterGradient(const TinyModel& model,
                                      std::span<const SynthSequence> items,
                                      double frame_shift,
                                      const TrainConfig& cfg,
                                      double* mean_loss = nullptr);

// Minibatch SGD with a fixed step. Each batch item is one sequence; the batch
// gradient is the mean of the per-sequence gradients. Throws kNumeric if the
// loss becomes non-finite.
TrainResult Train(TinyModel model, std::span<const SynthSequence> train,
                  double frame_shift, const TrainConfig& cfg);

}  // namespace collarscd
