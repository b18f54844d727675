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

namespace collarscd {

// Per-frame natural-log likelihoods of the no-boundary (p0) and boundary (p1)
// events, plus the time between consecutive frames.
class FrameScoreSequence {
 public:
  enum class Normalization {
    kRequire,    // exp(log_p0) + exp(log_p1) must be within 1e-6 of 1
    kUnchecked,  // only finiteness and log <= 0 are enforced
  };

  FrameScoreSequence(std::vector<double> log_p0, std::vector<double> log_p1,
                     double frame_shift,
                     Normalization normalization = Normalization::kRequire);

  // Builds a normalized sequence from boundary probabilities. Exact 0 and 1
  // are clamped to 1e-12 probability mass so that both logs stay finite.
  static FrameScoreSequence FromBoundaryProbabilities(
      std::span<const double> p1, double frame_shift);

  // log_p1 = log sigmoid(a), log_p0 = log sigmoid(-a).
  static FrameScoreSequence FromLogits(std::span<const double> logits,
                                       double frame_shift);

  std::size_t size() const { return log_p0_.size(); }
  double frame_shift() const { return frame_shift_; }
  std::span<const double> log_p0() const { return log_p0_; }
  std::span<const double> log_p1() const { return log_p1_; }

  double boundary_probability(std::size_t t) const;
  std::vector<double> boundary_probabilities() const;

 private:
  std::vector<double> log_p0_;
  std::vector<double> log_p1_;
  double frame_shift_;
};

class LabelSequence {
 public:
  explicit LabelSequence(std::vector<std::uint8_t> labels);

  std::size_t size() const { return labels_.size(); }
  std::uint8_t operator[](std::size_t i) const { return labels_[i]; }
  std::span<const std::uint8_t> values() const { return labels_; }

 private:
  std::vector<std::uint8_t> labels_;
};

// Sparse boundary annotation: the strictly increasing frame indices z with
// y_z = 1. Range against a sequence length is checked by the consumers.
class ChangePointSet {
 public:
  ChangePointSet() = default;
  explicit ChangePointSet(std::vector<std::size_t> positions);

  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }
  std::span<const std::size_t> positions() const { return positions_; }
  std::size_t operator[](std::size_t i) const { return positions_[i]; }

  // Throws kOutOfBounds unless every position is < num_frames.
  void CheckRange(std::size_t num_frames) const;

  bool operator==(const ChangePointSet&) const = default;

 private:
  std::vector<std::size_t> positions_;
};

// Boundary timestamps in seconds, strictly increasing and non-negative.
class ChangePointTimes {
 public:
  ChangePointTimes() = default;
  explicit ChangePointTimes(std::vector<double> times);

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  std::span<const double> times() const { return times_; }
  double operator[](std::size_t i) const { return times_[i]; }

  bool operator==(const ChangePointTimes&) const = default;

 private:
  std::vector<double> times_;
};

enum class CollarSemantics {
  kInclusive,  // [z - c, z + c], 2c + 1 frames
  kStrict,     // z - c < x < z + c, 2c - 1 frames, needs c >= 1
};

enum class EdgePolicy { kClamp, kReject };

struct CollarConfig {
  int collar_frames = 0;
  CollarSemantics semantics = CollarSemantics::kInclusive;
  EdgePolicy edge_policy = EdgePolicy::kClamp;

  // Throws kInvalidConfig for c < 0 or strict semantics with c == 0.
  void Validate() const;
  // Half-width actually covered on each side of z before clamping.
  int reach() const;
};

// Closed frame interval [first, last].
struct IndexRange {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const { return last - first + 1; }
  bool contains(std::size_t i) const { return i >= first && i <= last; }
  bool operator==(const IndexRange&) const = default;
};

IndexRange CollarWindow(std::size_t z, const CollarConfig& cfg,
                        std::size_t num_frames);

ChangePointSet LabelsToChangePoints(const LabelSequence& labels);
LabelSequence ChangePointsToLabels(const ChangePointSet& points,
                                   std::size_t num_frames);

// time = index * frame_shift; index = round(time / frame_shift), halves up.
double FrameToTime(std::size_t index, double frame_shift);
std::size_t TimeToFrame(double time, double frame_shift);

ChangePointTimes ToTimes(const ChangePointSet& points, double frame_shift);
// Throws kInvalidArgument when two times round onto the same frame.
ChangePointSet ToFrames(const ChangePointTimes& times, double frame_shift);

}  // namespace collarscd
