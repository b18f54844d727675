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

#include "collarscd/types.hpp"

#include <cmath>
#include <string>

#include "collarscd/error.hpp"
#include "collarscd/logmath.hpp"

namespace collarscd {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kLengthMismatch: return "length-mismatch";
    case ErrorKind::kOutOfBounds: return "out-of-bounds";
    case ErrorKind::kInvalidConfig: return "invalid-config";
    case ErrorKind::kOverlap: return "overlap";
    case ErrorKind::kTooLarge: return "too-large";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kProtocol: return "protocol";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kInternal: return "internal";
  }
  return "unknown";
}

namespace {

constexpr double kNormalizationTolerance = 1e-6;
constexpr double kProbabilityFloor = 1e-12;

}  // namespace

FrameScoreSequence::FrameScoreSequence(std::vector<double> log_p0,
                                       std::vector<double> log_p1,
                                       double frame_shift,
                                       Normalization normalization)
    : log_p0_(std::move(log_p0)),
      log_p1_(std::move(log_p1)),
      frame_shift_(frame_shift) {
  if (log_p0_.size() != log_p1_.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                "log_p0 and log_p1 differ in length");
  }
  if (log_p0_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "frame sequence is empty");
  }
  if (!(frame_shift_ > 0.0) || !std::isfinite(frame_shift_)) {
    throw Error(ErrorKind::kInvalidArgument, "frame_shift must be positive");
  }
  for (std::size_t t = 0; t < log_p0_.size(); ++t) {
    const double a = log_p0_[t];
    const double b = log_p1_[t];
    if (!std::isfinite(a) || !std::isfinite(b) || a > 0.0 || b > 0.0) {
      throw Error(ErrorKind::kInvalidArgument,
                  "frame " + std::to_string(t) +
                      ": log-likelihoods must be finite and <= 0");
    }
    if (normalization == Normalization::kRequire) {
      const double mass = std::exp(a) + std::exp(b);
      if (std::abs(mass - 1.0) > kNormalizationTolerance) {
        throw Error(ErrorKind::kInvalidArgument,
                    "frame " + std::to_string(t) +
                        ": probabilities do not sum to one");
      }
    }
  }
}

FrameScoreSequence FrameScoreSequence::FromBoundaryProbabilities(
    std::span<const double> p1, double frame_shift) {
  std::vector<double> lp0(p1.size());
  std::vector<double> lp1(p1.size());
  for (std::size_t t = 0; t < p1.size(); ++t) {
    double p = p1[t];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorKind::kOutOfBounds,
                  "frame " + std::to_string(t) +
                      ": boundary probability outside [0, 1]");
    }
    p = std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor);
    lp1[t] = std::log(p);
    lp0[t] = std::log1p(-p);
  }
  return FrameScoreSequence(std::move(lp0), std::move(lp1), frame_shift);
}

FrameScoreSequence FrameScoreSequence::FromLogits(
    std::span<const double> logits, double frame_shift) {
  std::vector<double> lp0(logits.size());
  std::vector<double> lp1(logits.size());
  for (std::size_t t = 0; t < logits.size(); ++t) {
    if (!std::isfinite(logits[t])) {
      throw Error(ErrorKind::kNumeric,
                  "frame " + std::to_string(t) + ": non-finite logit");
    }
    lp1[t] = LogSigmoid(logits[t]);
    lp0[t] = LogSigmoid(-logits[t]);
  }
  return FrameScoreSequence(std::move(lp0), std::move(lp1), frame_shift,
                            Normalization::kUnchecked);
}

double FrameScoreSequence::boundary_probability(std::size_t t) const {
  return std::exp(log_p1_[t]);
}

std::vector<double> FrameScoreSequence::boundary_probabilities() const {
  std::vector<double> out(log_p1_.size());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = std::exp(log_p1_[t]);
  return out;
}

LabelSequence::LabelSequence(std::vector<std::uint8_t> labels)
    : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] > 1) {
      throw Error(ErrorKind::kInvalidArgument,
                  "label " + std::to_string(i) + " is not 0 or 1");
    }
  }
}

ChangePointSet::ChangePointSet(std::vector<std::size_t> positions)
    : positions_(std::move(positions)) {
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    if (positions_[i] <= positions_[i - 1]) {
      throw Error(ErrorKind::kInvalidArgument,
                  "change points must be strictly increasing");
    }
  }
}

void ChangePointSet::CheckRange(std::size_t num_frames) const {
  if (!positions_.empty() && positions_.back() >= num_frames) {
    throw Error(ErrorKind::kOutOfBounds,
                "change point " + std::to_string(positions_.back()) +
                    " outside sequence of " + std::to_string(num_frames) +
                    " frames");
  }
}

ChangePointTimes::ChangePointTimes(std::vector<double> times)
    : times_(std::move(times)) {
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || times_[i] < 0.0) {
      throw Error(ErrorKind::kInvalidArgument,
                  "change point times must be finite and non-negative");
    }
    if (i > 0 && times_[i] <= times_[i - 1]) {
      throw Error(ErrorKind::kInvalidArgument,
                  "change point times must be strictly increasing");
    }
  }
}

void CollarConfig::Validate() const {
  if (collar_frames < 0) {
    throw Error(ErrorKind::kInvalidConfig, "collar must be non-negative");
  }
  if (semantics == CollarSemantics::kStrict && collar_frames == 0) {
    throw Error(ErrorKind::kInvalidConfig,
                "strict collar semantics needs a collar of at least 1");
  }
}

int CollarConfig::reach() const {
  return semantics == CollarSemantics::kInclusive ? collar_frames
                                                  : collar_frames - 1;
}

IndexRange CollarWindow(std::size_t z, const CollarConfig& cfg,
                        std::size_t num_frames) {
  cfg.Validate();
  if (z >= num_frames) {
    throw Error(ErrorKind::kOutOfBounds,
                "change point " + std::to_string(z) + " outside sequence");
  }
  const auto reach = static_cast<std::ptrdiff_t>(cfg.reach());
  const auto center = static_cast<std::ptrdiff_t>(z);
  const auto last_frame = static_cast<std::ptrdiff_t>(num_frames) - 1;
  std::ptrdiff_t lo = center - reach;
  std::ptrdiff_t hi = center + reach;
  if (lo < 0 || hi > last_frame) {
    if (cfg.edge_policy == EdgePolicy::kReject) {
      throw Error(ErrorKind::kOutOfBounds,
                  "collar around frame " + std::to_string(z) +
                      " exceeds the sequence");
    }
    lo = std::max<std::ptrdiff_t>(lo, 0);
    hi = std::min(hi, last_frame);
  }
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

ChangePointSet LabelsToChangePoints(const LabelSequence& labels) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) out.push_back(i);
  }
  return ChangePointSet(std::move(out));
}

LabelSequence ChangePointsToLabels(const ChangePointSet& points,
                                   std::size_t num_frames) {
  points.CheckRange(num_frames);
  std::vector<std::uint8_t> labels(num_frames, 0);
  for (std::size_t z : points.positions()) labels[z] = 1;
  return LabelSequence(std::move(labels));
}

double FrameToTime(std::size_t index, double frame_shift) {
  return static_cast<double>(index) * frame_shift;
}

std::size_t TimeToFrame(double time, double frame_shift) {
  if (!(frame_shift > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "frame_shift must be positive");
  }
  if (!std::isfinite(time) || time < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "time must be non-negative");
  }
  return static_cast<std::size_t>(std::floor(time / frame_shift + 0.5));
}

ChangePointTimes ToTimes(const ChangePointSet& points, double frame_shift) {
  std::vector<double> times;
  times.reserve(points.size());
  for (std::size_t z : points.positions()) {
    times.push_back(FrameToTime(z, frame_shift));
  }
  return ChangePointTimes(std::move(times));
}

ChangePointSet ToFrames(const ChangePointTimes& times, double frame_shift) {
  std::vector<std::size_t> frames;
  frames.reserve(times.size());
  for (double t : times.times()) {
    const std::size_t f = TimeToFrame(t, frame_shift);
    if (!frames.empty() && frames.back() == f) {
      throw Error(ErrorKind::kInvalidArgument,
                  "two change points fall on frame " + std::to_string(f));
    }
    frames.push_back(f);
  }
  return ChangePointSet(std::move(frames));
}

}  // namespace collarscd
