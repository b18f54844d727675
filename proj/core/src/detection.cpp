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

#include "collarscd/detection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "collarscd/error.hpp"

namespace collarscd {

void DetectorConfig::Validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::kInvalidConfig, "threshold must be in [0, 1]");
  }
  if (!(min_separation >= 0.0) || !std::isfinite(min_separation)) {
    throw Error(ErrorKind::kInvalidConfig,
                "min_separation must be non-negative");
  }
}

std::size_t DetectorConfig::MergeRadiusFrames(double frame_shift) const {
  if (min_separation <= 0.0) return 0;
  const double steps = std::ceil(min_separation / frame_shift - 1e-9);
  return steps >= 1.0 ? static_cast<std::size_t>(steps) - 1 : 0;
}

namespace {

std::vector<std::size_t> DetectRuns(std::span<const double> p1,
                                    double threshold) {
  std::vector<std::size_t> out;
  std::size_t t = 0;
  while (t < p1.size()) {
    if (!(p1[t] > threshold)) {
      ++t;
      continue;
    }
    std::size_t best = t;
    for (; t < p1.size() && p1[t] > threshold; ++t) {
      if (p1[t] > p1[best]) best = t;
    }
    out.push_back(best);
  }
  return out;
}

std::vector<std::size_t> DetectLocalMaxima(std::span<const double> p1,
                                           double threshold,
                                           std::size_t radius) {
  const std::size_t n = p1.size();
  std::vector<std::size_t> peaks;
  for (std::size_t t = 0; t < n; ++t) {
    if (!(p1[t] > threshold)) continue;
    if (t > 0 && !(p1[t - 1] < p1[t])) continue;
    if (t + 1 < n && !(p1[t + 1] < p1[t])) continue;
    peaks.push_back(t);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    const std::size_t t = peaks[i];
    bool suppressed = false;
    for (std::size_t j = i; j-- > 0 && t - peaks[j] <= radius;) {
      if (p1[peaks[j]] >= p1[t]) suppressed = true;
    }
    for (std::size_t j = i + 1; j < peaks.size() && peaks[j] - t <= radius;
         ++j) {
      if (p1[peaks[j]] > p1[t]) suppressed = true;
    }
    if (!suppressed) out.push_back(t);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> DetectFrames(std::span<const double> p1,
                                      const DetectorConfig& cfg,
                                      double frame_shift) {
  cfg.Validate();
  if (cfg.mode == DetectorMode::kThresholdOnly) {
    return DetectRuns(p1, cfg.threshold);
  }
  return DetectLocalMaxima(p1, cfg.threshold,
                           cfg.MergeRadiusFrames(frame_shift));
}

ChangePointTimes DetectBatch(const FrameScoreSequence& scores,
                             const DetectorConfig& cfg) {
  const auto p1 = scores.boundary_probabilities();
  std::vector<double> times;
  for (std::size_t t : DetectFrames(p1, cfg, scores.frame_shift())) {
    times.push_back(FrameToTime(t, scores.frame_shift()));
  }
  return ChangePointTimes(std::move(times));
}

StreamingDetector::StreamingDetector(const DetectorConfig& cfg,
                                     double frame_shift,
                                     std::size_t lookahead_frames)
    : cfg_(cfg), frame_shift_(frame_shift), lookahead_(lookahead_frames) {
  cfg_.Validate();
  if (!(frame_shift_ > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "frame_shift must be positive");
  }
  merge_radius_ = cfg_.MergeRadiusFrames(frame_shift_);
}

std::optional<double> StreamingDetector::Push(std::size_t frame_index,
                                              double log_p0, double log_p1) {
  if (finished_) {
    throw Error(ErrorKind::kProtocol, "frame pushed after end of stream");
  }
  if (frame_index != consumed_) {
    throw Error(ErrorKind::kProtocol,
                "expected frame " + std::to_string(consumed_) + ", got " +
                    std::to_string(frame_index));
  }
  if (!std::isfinite(log_p0) || !std::isfinite(log_p1) || log_p0 > 0.0 ||
      log_p1 > 0.0) {
    throw Error(ErrorKind::kInvalidArgument,
                "frame " + std::to_string(frame_index) +
                    ": log-likelihoods must be finite and <= 0");
  }
  buffer_.push_back(std::exp(log_p1));
  ++consumed_;
  std::optional<double> out;
  if (consumed_ > lookahead_) {
    const std::size_t t = decided_;
    if (Decide(t)) out = FrameToTime(t, frame_shift_);
    Trim();
  }
  return out;
}

std::vector<double> StreamingDetector::Finish() {
  if (finished_) {
    throw Error(ErrorKind::kProtocol, "stream already finished");
  }
  finished_ = true;
  std::vector<double> out;
  while (decided_ < consumed_) {
    const std::size_t t = decided_;
    if (Decide(t)) out.push_back(FrameToTime(t, frame_shift_));
  }
  buffer_.clear();
  base_ = consumed_;
  return out;
}

bool StreamingDetector::Visible(std::size_t i) const {
  return i >= base_ && i < consumed_;
}

double StreamingDetector::At(std::size_t i) const { return buffer_[i - base_]; }

// Frames that have not arrived yet are treated like frames past the end of
// the sequence.
bool StreamingDetector::IsPeak(std::size_t i) const {
  const double v = At(i);
  if (!(v > cfg_.threshold)) return false;
  if (i > 0 && Visible(i - 1) && !(At(i - 1) < v)) return false;
  if (Visible(i + 1) && !(At(i + 1) < v)) return false;
  return true;
}

bool StreamingDetector::Decide(std::size_t t) {
  ++decided_;
  const double v = At(t);
  if (cfg_.mode == DetectorMode::kThresholdOnly) {
    if (!(v > cfg_.threshold)) {
      run_max_ = -1.0;
      return false;
    }
    const bool first_max_so_far = v > run_max_;
    run_max_ = std::max(run_max_, v);
    if (!first_max_so_far) return false;
    for (std::size_t u = t + 1; Visible(u) && At(u) > cfg_.threshold; ++u) {
      if (At(u) > v) return false;
    }
    return true;
  }

  if (!IsPeak(t)) return false;
  const std::size_t lo = t >= merge_radius_ ? t - merge_radius_ : 0;
  for (std::size_t m = lo; m <= t + merge_radius_ && Visible(m); ++m) {
    if (m == t || !IsPeak(m)) continue;
    const double w = At(m);
    if (w > v || (w == v && m < t)) return false;
  }
  return true;
}

void StreamingDetector::Trim() {
  // Keep merge_radius + 1 frames of history before the next frame to decide.
  const std::size_t keep_from =
      decided_ > merge_radius_ + 1 ? decided_ - merge_radius_ - 1 : 0;
  while (base_ < keep_from) {
    buffer_.pop_front();
    ++base_;
  }
}

std::size_t PeakinessReport::boundaries_with_activity() const {
  std::size_t n = 0;
  for (const auto& [len, count] : run_length_histogram) n += count;
  return n;
}

double PeakinessReport::mean_active_frames_per_detection() const {
  std::size_t n = 0;
  std::size_t total = 0;
  for (const auto& [len, count] : run_length_histogram) {
    n += count;
    total += len * count;
  }
  return n == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(n);
}

void PeakinessReport::Merge(const PeakinessReport& other) {
  for (const auto& [len, count] : other.run_length_histogram) {
    run_length_histogram[len] += count;
  }
  boundaries_analyzed += other.boundaries_analyzed;
}

PeakinessReport Peakiness(const FrameScoreSequence& scores,
                          const ChangePointSet& refs,
                          const DetectorConfig& cfg, std::size_t window) {
  cfg.Validate();
  if (window < 1) {
    throw Error(ErrorKind::kInvalidArgument, "peakiness window must be >= 1");
  }
  refs.CheckRange(scores.size());
  const auto p1 = scores.boundary_probabilities();
  PeakinessReport report;
  for (std::size_t z : refs.positions()) {
    ++report.boundaries_analyzed;
    const std::size_t lo = z >= window ? z - window : 0;
    const std::size_t hi = std::min(scores.size() - 1, z + window);
    std::size_t longest = 0;
    std::size_t current = 0;
    for (std::size_t t = lo; t <= hi; ++t) {
      current = p1[t] > cfg.threshold ? current + 1 : 0;
      longest = std::max(longest, current);
    }
    if (longest > 0) ++report.run_length_histogram[longest];
  }
  return report;
}

}  // namespace collarscd
