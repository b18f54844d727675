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

#include "collarscd/types.hpp"

namespace collarscd {

struct SynthConfig {
  std::size_t num_train = 200;
  std::size_t num_dev = 40;
  std::size_t num_test = 40;
  double frame_shift = 0.08;
  // Sequence lengths are uniform in [min_seconds, max_seconds].
  double min_seconds = 10.0;
  double max_seconds = 30.0;
  // Expected fraction of frames that are boundaries.
  double boundary_rate = 0.0004;
  // Annotated boundaries are the true acoustic changes shifted uniformly by
  // up to this many frames in either direction.
  int annotation_jitter_frames = 0;
  // True changes are at least this many frames apart and at least half of it
  // away from the sequence edges.
  std::size_t min_boundary_spacing = 16;
  std::size_t feature_dim = 8;
  double speaker_signature_strength = 1.0;
  double noise_level = 1.0;
  std::uint64_t seed = 1;

  void Validate() const;
  std::size_t min_frames() const;
  std::size_t max_frames() const;
};

struct SynthSequence {
  std::size_t num_frames = 0;
  std::size_t feature_dim = 0;
  std::vector<double> features;  // row-major, num_frames x feature_dim
  ChangePointSet true_changes;   // first frame of each new speaker
  ChangePointSet annotated;      // jittered copy of true_changes

  std::span<const double> frame(std::size_t t) const {
    return std::span<const double>(features).subspan(t * feature_dim,
                                                     feature_dim);
  }
};

struct SynthCorpus {
  SynthConfig config;
  std::vector<SynthSequence> train;
  std::vector<SynthSequence> dev;
  std::vector<SynthSequence> test;
};

// Piecewise-constant Gaussian speaker signatures plus white noise. The
// number of changes per sequence is Poisson(boundary_rate * frames), capped
// by what the spacing constraint admits. Fully determined by config.seed.
SynthCorpus GenerateCorpus(const SynthConfig& cfg);

std::size_t CountAnnotatedBoundaries(std::span<const SynthSequence> split);
std::size_t CountFrames(std::span<const SynthSequence> split);

}  // namespace collarscd
