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

#include "collarscd/model.hpp"

#include <algorithm>
#include <cmath>

#include "collarscd/error.hpp"
#include "collarscd/rng.hpp"

namespace collarscd {

void ModelConfig::Validate() const {
  if (feature_dim == 0 || hidden == 0) {
    throw Error(ErrorKind::kInvalidConfig,
                "feature_dim and hidden must be positive");
  }
  if (num_parameters() > kMaxModelParameters) {
    throw Error(ErrorKind::kInvalidConfig, "model has too many parameters");
  }
}

std::size_t ModelConfig::num_parameters() const {
  return hidden * input_dim() + hidden + hidden + 1;
}

TinyModel::TinyModel(const ModelConfig& cfg, std::uint64_t seed,
                     double boundary_prior)
    : cfg_(cfg) {
  cfg_.Validate();
  if (!(boundary_prior > 0.0 && boundary_prior < 1.0)) {
    throw Error(ErrorKind::kInvalidConfig, "boundary prior must be in (0, 1)");
  }
  params_.assign(cfg_.num_parameters(), 0.0);
  Rng rng(seed);
  const double r1 = std::sqrt(6.0 / static_cast<double>(cfg_.input_dim() +
                                                        cfg_.hidden));
  for (std::size_t i = 0; i < b1_offset(); ++i) {
    params_[w1_offset() + i] = rng.Uniform(-r1, r1);
  }
  const double r2 = std::sqrt(6.0 / static_cast<double>(cfg_.hidden + 1));
  for (std::size_t i = 0; i < cfg_.hidden; ++i) {
    params_[w2_offset() + i] = rng.Uniform(-r2, r2);
  }
  params_[b2_offset()] = std::log(boundary_prior / (1.0 - boundary_prior));
}

void TinyModel::GatherInput(const SynthSequence& seq, std::size_t t,
                            std::span<double> input) const {
  const auto n = static_cast<std::ptrdiff_t>(seq.num_frames);
  const auto d = cfg_.feature_dim;
  std::size_t k = 0;
  for (std::ptrdiff_t off = -static_cast<std::ptrdiff_t>(cfg_.past_frames);
       off <= static_cast<std::ptrdiff_t>(cfg_.future_frames); ++off) {
    const auto src = std::clamp<std::ptrdiff_t>(
        static_cast<std::ptrdiff_t>(t) + off, 0, n - 1);
    const auto f = seq.frame(static_cast<std::size_t>(src));
    std::copy(f.begin(), f.end(), input.begin() + static_cast<std::ptrdiff_t>(k * d));
    ++k;
  }
}

void TinyModel::HiddenActivations(std::span<const double> input,
                                  std::span<double> act) const {
  const std::size_t h = cfg_.hidden;
  const double* w1 = params_.data() + w1_offset();
  const double* b1 = params_.data() + b1_offset();
  std::copy(b1, b1 + h, act.begin());
  for (std::size_t i = 0; i < input.size(); ++i) {
    const double x = input[i];
    const double* row = w1 + i * h;
    for (std::size_t j = 0; j < h; ++j) act[j] += row[j] * x;
  }
  for (std::size_t j = 0; j < h; ++j) act[j] = std::tanh(act[j]);
}

std::vector<double> TinyModel::Forward(const SynthSequence& seq,
                                       std::vector<double>* hidden) const {
  if (seq.feature_dim != cfg_.feature_dim) {
    throw Error(ErrorKind::kLengthMismatch, "feature dimension mismatch");
  }
  const std::size_t h = cfg_.hidden;
  const double* w2 = params_.data() + w2_offset();
  const double b2 = params_[b2_offset()];

  std::vector<double> input(cfg_.input_dim());
  std::vector<double> local(h);
  if (hidden) hidden->assign(seq.num_frames * h, 0.0);
  std::vector<double> logits(seq.num_frames);
  for (std::size_t t = 0; t < seq.num_frames; ++t) {
    GatherInput(seq, t, input);
    std::span<double> act =
        hidden ? std::span<double>(*hidden).subspan(t * h, h) : local;
    HiddenActivations(input, act);
    double out = b2;
    for (std::size_t j = 0; j < h; ++j) out += w2[j] * act[j];
    logits[t] = out;
  }
  return logits;
}

void TinyModel::Backward(const SynthSequence& seq,
                         std::span<const double> logit_grad,
                         std::span<double> param_grad,
                         std::span<const double> hidden) const {
  const std::size_t h = cfg_.hidden;
  if (logit_grad.size() != seq.num_frames ||
      param_grad.size() != params_.size() ||
      (!hidden.empty() && hidden.size() != seq.num_frames * h)) {
    throw Error(ErrorKind::kLengthMismatch, "gradient buffer size mismatch");
  }
  const std::size_t in_dim = cfg_.input_dim();
  const double* w2 = params_.data() + w2_offset();
  double* g_w1 = param_grad.data() + w1_offset();
  double* g_b1 = param_grad.data() + b1_offset();
  double* g_w2 = param_grad.data() + w2_offset();
  double& g_b2 = param_grad[b2_offset()];

  std::vector<double> input(in_dim);
  std::vector<double> local(h);
  std::vector<double> ga(h);
  for (std::size_t t = 0; t < seq.num_frames; ++t) {
    const double g = logit_grad[t];
    if (g == 0.0) continue;
    GatherInput(seq, t, input);
    std::span<const double> act;
    if (hidden.empty()) {
      HiddenActivations(input, local);
      act = local;
    } else {
      act = hidden.subspan(t * h, h);
    }
    g_b2 += g;
    for (std::size_t j = 0; j < h; ++j) {
      g_w2[j] += g * act[j];
      ga[j] = g * w2[j] * (1.0 - act[j] * act[j]);
      g_b1[j] += ga[j];
    }
    for (std::size_t i = 0; i < in_dim; ++i) {
      const double x = input[i];
      double* grow = g_w1 + i * h;
      for (std::size_t j = 0; j < h; ++j) grow[j] += ga[j] * x;
    }
  }
}

}  // namespace collarscd
