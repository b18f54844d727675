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

#include "collarscd/synth.hpp"

#include <algorithm>
#include <cmath>

#include "collarscd/error.hpp"
#include "collarscd/rng.hpp"

namespace collarscd {

void SynthConfig::Validate() const {
  if (!(boundary_rate > 0.0 && boundary_rate <= 0.01)) {
    throw Error(ErrorKind::kInvalidConfig, "boundary_rate must be in (0, 0.01]");
  }
  if (annotation_jitter_frames < 0) {
    throw Error(ErrorKind::kInvalidConfig, "annotation jitter must be >= 0");
  }
  if (min_boundary_spacing <= 2 * static_cast<std::size_t>(
                                      annotation_jitter_frames)) {
    throw Error(ErrorKind::kInvalidConfig,
                "boundary spacing must exceed twice the annotation jitter");
  }
  if (!(frame_shift > 0.0) || !(min_seconds > 0.0) ||
      !(max_seconds >= min_seconds)) {
    throw Error(ErrorKind::kInvalidConfig, "bad frame shift or duration range");
  }
  if (feature_dim == 0) {
    throw Error(ErrorKind::kInvalidConfig, "feature_dim must be positive");
  }
  if (!(speaker_signature_strength >= 0.0) || !(noise_level >= 0.0)) {
    throw Error(ErrorKind::kInvalidConfig, "strength and noise must be >= 0");
  }
}

std::size_t SynthConfig::min_frames() const {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(min_seconds / frame_shift)));
}

std::size_t SynthConfig::max_frames() const {
  return std::max(min_frames(), static_cast<std::size_t>(std::llround(
                                    max_seconds / frame_shift)));
}

namespace {

std::vector<std::size_t> PlaceChanges(std::size_t n, std::size_t count,
                                      std::size_t spacing, Rng& rng) {
  const std::size_t margin = (spacing + 1) / 2;
  if (n < 2 * margin + 1) return {};
  const std::size_t usable = n - 1 - 2 * margin;  // positions margin..n-1-margin
  count = std::min(count, usable / spacing + 1);
  if (count == 0) return {};
  // Stars and bars: sorted offsets in [0, free] spread by `spacing`.
  const std::size_t free = usable - (count - 1) * spacing;
  std::vector<std::size_t> offsets(count);
  for (auto& o : offsets) {
    o = static_cast<std::size_t>(rng.UniformInt(0, static_cast<std::int64_t>(free)));
  }
  std::sort(offsets.begin(), offsets.end());
  for (std::size_t k = 0; k < count; ++k) offsets[k] += margin + k * spacing;
  return offsets;
}

SynthSequence GenerateSequence(const SynthConfig& cfg, Rng& rng) {
  SynthSequence seq;
  seq.feature_dim = cfg.feature_dim;
  seq.num_frames = static_cast<std::size_t>(
      rng.UniformInt(static_cast<std::int64_t>(cfg.min_frames()),
                     static_cast<std::int64_t>(cfg.max_frames())));
  const auto expected = cfg.boundary_rate * static_cast<double>(seq.num_frames);
  const auto count = static_cast<std::size_t>(rng.Poisson(expected));
  const auto changes =
      PlaceChanges(seq.num_frames, count, cfg.min_boundary_spacing, rng);

  std::vector<std::size_t> annotated;
  annotated.reserve(changes.size());
  for (std::size_t z : changes) {
    const auto shift = rng.UniformInt(-cfg.annotation_jitter_frames,
                                      cfg.annotation_jitter_frames);
    const auto pos = std::clamp<std::int64_t>(
        static_cast<std::int64_t>(z) + shift, 0,
        static_cast<std::int64_t>(seq.num_frames) - 1);
    annotated.push_back(static_cast<std::size_t>(pos));
  }

  const std::size_t d = cfg.feature_dim;
  std::vector<double> signature(d);
  auto new_speaker = [&] {
    for (auto& s : signature) s = cfg.speaker_signature_strength * rng.Normal();
  };
  new_speaker();
  seq.features.resize(seq.num_frames * d);
  std::size_t next_change = 0;
  for (std::size_t t = 0; t < seq.num_frames; ++t) {
    if (next_change < changes.size() && changes[next_change] == t) {
      new_speaker();
      ++next_change;
    }
    for (std::size_t k = 0; k < d; ++k) {
      seq.features[t * d + k] = signature[k] + cfg.noise_level * rng.Normal();
    }
  }
  seq.true_changes = ChangePointSet(changes);
  seq.annotated = ChangePointSet(std::move(annotated));
  return seq;
}

std::vector<SynthSequence> GenerateSplit(const SynthConfig& cfg,
                                         std::size_t count,
                                         std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SynthSequence> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(GenerateSequence(cfg, rng));
  }
  return out;
}

}  // namespace

SynthCorpus GenerateCorpus(const SynthConfig& cfg) {
  cfg.Validate();
  Rng seeder(cfg.seed);
  const auto train_seed = seeder.NextSeed();
  const auto dev_seed = seeder.NextSeed();
  const auto test_seed = seeder.NextSeed();
  SynthCorpus corpus;
  corpus.config = cfg;
  corpus.train = GenerateSplit(cfg, cfg.num_train, train_seed);
  corpus.dev = GenerateSplit(cfg, cfg.num_dev, dev_seed);
  corpus.test = GenerateSplit(cfg, cfg.num_test, test_seed);
  return corpus;
}

std::size_t CountAnnotatedBoundaries(std::span<const SynthSequence> split) {
  std::size_t n = 0;
  for (const auto& s : split) n += s.annotated.size();
  return n;
}

std::size_t CountFrames(std::span<const SynthSequence> split) {
  std::size_t n = 0;
  for (const auto& s : split) n += s.num_frames;
  return n;
}

}  // namespace collarscd
