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
#include <vector>

#include "collarscd/synth.hpp"

namespace collarscd {

struct ModelConfig {
  std::size_t feature_dim = 8;
  std::size_t past_frames = 4;    // window radius into the past
  std::size_t future_frames = 4;  // lookahead; the streaming label delay
  std::size_t hidden = 32;

  void Validate() const;
  std::size_t window_frames() const { return past_frames + 1 + future_frames; }
  std::size_t input_dim() const { return window_frames() * feature_dim; }
  std::size_t num_parameters() const;
};

inline constexpr std::size_t kMaxModelParameters = 100'000;

// Windowed feed-forward frame scorer:
//   logit_t = w2 . tanh(W1 x[t-past .. t+future] + b1) + b2
// Frames outside the sequence repeat the nearest edge frame.
class TinyModel {
 public:
  // Uniform Glorot-style init; the output bias starts at logit(prior).
  TinyModel(const ModelConfig& cfg, std::uint64_t seed,
            double boundary_prior = 0.01);

  const ModelConfig& config() const { return cfg_; }
  std::span<const double> parameters() const { return params_; }
  std::span<double> mutable_parameters() { return params_; }

  // Logits per frame. When `hidden` is given it receives the tanh
  // activations (num_frames x hidden) for a following Backward call.
  std::vector<double> Forward(const SynthSequence& seq,
                              std::vector<double>* hidden = nullptr) const;

  // Adds d(loss)/d(params) to param_grad given d(loss)/d(logit_t) per frame.
  // `hidden` must come from Forward on the same sequence and parameters;
  // when empty the activations are recomputed.
  void Backward(const SynthSequence& seq, std::span<const double> logit_grad,
                std::span<double> param_grad,
                std::span<const double> hidden = {}) const;

 private:
  void GatherInput(const SynthSequence& seq, std::size_t t,
                   std::span<double> input) const;
  void HiddenActivations(std::span<const double> input,
                         std::span<double> act) const;
  // Parameter layout: W1 (input x hidden), b1, w2, b2.
  std::size_t w1_offset() const { return 0; }
  std::size_t b1_offset() const { return cfg_.hidden * cfg_.input_dim(); }
  std::size_t w2_offset() const { return b1_offset() + cfg_.hidden; }
  std::size_t b2_offset() const { return w2_offset() + cfg_.hidden; }

  ModelConfig cfg_;
  std::vector<double> params_;
};

}  // namespace collarscd
