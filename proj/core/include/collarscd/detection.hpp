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
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "collarscd/types.hpp"

namespace collarscd {

enum class DetectorMode {
  // Every contiguous run of frames with p1 > threshold yields one detection at
  // the run's (first) maximum.
  kThresholdOnly,
  // Strict local maxima of p1 above threshold; a maximum is dropped when a
  // higher one (ties: the earlier one) lies less than min_separation away.
  kLocalMaxima,
};

struct DetectorConfig {
  double threshold = 0.5;
  DetectorMode mode = DetectorMode::kLocalMaxima;
  double min_separation = 0.0;  // seconds

  void Validate() const;
  // Largest frame distance d with d * frame_shift < min_separation.
  std::size_t MergeRadiusFrames(double frame_shift) const;
};

// Detected frame indices, ascending.
std::vector<std::size_t> DetectFrames(std::span<const double> p1,
                                      const DetectorConfig& cfg,
                                      double frame_shift);

ChangePointTimes DetectBatch(const FrameScoreSequence& scores,
                             const DetectorConfig& cfg);

// Incremental detector with a fixed label delay. The decision for frame t is
// made when frame t + lookahead arrives (or at Finish) and is never revised.
// The output equals DetectBatch whenever every above-threshold run, and for
// local-maxima mode the merge radius plus one frame, fits in the lookahead.
//
// Not thread-safe; one producer feeds it in frame order.
class StreamingDetector {
 public:
  StreamingDetector(const DetectorConfig& cfg, double frame_shift,
                    std::size_t lookahead_frames);

  // Feeds frame `frame_index`, which must equal the number of frames fed so
  // far. Returns the detection time finalized by this frame, if any.
  std::optional<double> Push(std::size_t frame_index, double log_p0,
                             double log_p1);
  // Declares end of stream and flushes every pending decision.
  std::vector<double> Finish();

  std::size_t frames_consumed() const { return consumed_; }
  std::size_t frames_decided() const { return decided_; }

 private:
  bool Decide(std::size_t t);
  bool Visible(std::size_t i) const;
  double At(std::size_t i) const;
  bool IsPeak(std::size_t i) const;
  void Trim();

  DetectorConfig cfg_;
  double frame_shift_;
  std::size_t lookahead_;
  std::size_t merge_radius_;
  std::deque<double> buffer_;  // p1 for frames [base_, consumed_)
  std::size_t base_ = 0;
  std::size_t consumed_ = 0;
  std::size_t decided_ = 0;
  double run_max_ = -1.0;  // max p1 of the current run before frame decided_
  bool finished_ = false;
};

struct PeakinessReport {
  // Longest contiguous above-threshold run near a boundary -> count.
  std::map<std::size_t, std::size_t> run_length_histogram;
  std::size_t boundaries_analyzed = 0;

  std::size_t boundaries_with_activity() const;
  // Mean run length over boundaries with at least one active frame; 0 when
  // there are none.
  double mean_active_frames_per_detection() const;
  void Merge(const PeakinessReport& other);
};

// For each reference boundary, the longest run of frames with p1 > threshold
// inside [z - window, z + window].
PeakinessReport Peakiness(const FrameScoreSequence& scores,
                          const ChangePointSet& refs,
                          const DetectorConfig& cfg, std::size_t window);

}  // namespace collarscd
