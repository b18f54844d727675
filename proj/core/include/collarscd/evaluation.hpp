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
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "collarscd/detection.hpp"
#include "collarscd/types.hpp"

namespace collarscd {

struct MatchResult {
  std::vector<std::pair<double, double>> pairs;  // (ref, hyp), by ref time
  std::vector<double> unmatched_refs;
  std::vector<double> unmatched_hyps;
};

struct MatchCounts {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;

  MatchCounts& operator+=(const MatchCounts& o) {
    true_positives += o.true_positives;
    false_positives += o.false_positives;
    false_negatives += o.false_negatives;
    return *this;
  }
  bool operator==(const MatchCounts&) const = default;
};

struct PRPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Distances within this much of the forgiveness collar still match, so that
// millisecond-rounded timestamps exactly one collar apart are accepted.
inline constexpr double kMatchTolerance = 1e-9;

// Greedy closest-first matching: repeatedly pairs the globally closest
// unmatched (ref, hyp) with distance <= forgiveness. Equal distances go to the
// earlier reference, then the earlier hypothesis.
MatchResult MatchChangePoints(const ChangePointTimes& refs,
                              const ChangePointTimes& hyps,
                              double forgiveness);

MatchCounts CountMatches(const MatchResult& m);

// Precision and recall with the convention that a side with nothing to get
// wrong scores 1: no hypotheses -> P = 1, no references -> R = 1.
PRPoint PrecisionRecallF1(const MatchCounts& counts, double threshold = 0.0);
PRPoint PrecisionRecallF1(const MatchResult& m);

// A scored recording with its reference boundaries.
struct ScoredSequence {
  FrameScoreSequence scores;
  ChangePointTimes refs;
};

// Thresholds separating every pair of adjacent distinct boundary
// probabilities in the set, plus one below the smallest and one above the
// largest. Ascending.
std::vector<double> CandidateThresholds(std::span<const ScoredSequence> set);

// Pooled counts over the set at cfg.threshold.
MatchCounts EvaluateCounts(std::span<const ScoredSequence> set,
                           const DetectorConfig& cfg, double forgiveness);
PRPoint Evaluate(std::span<const ScoredSequence> set,
                 const DetectorConfig& cfg, double forgiveness);

// Candidate threshold with the best pooled F1 (ties: the higher threshold).
// cfg.threshold is ignored. Throws kInvalidArgument on an empty set.
double TuneThreshold(std::span<const ScoredSequence> dev,
                     const DetectorConfig& cfg, double forgiveness);

// One point per candidate threshold, thresholds descending.
std::vector<PRPoint> PrCurve(std::span<const ScoredSequence> test,
                             const DetectorConfig& cfg, double forgiveness);

// threshold,precision,recall,f1 with a header row.
void WritePrCurveCsv(std::ostream& os, std::span<const PRPoint> curve);

}  // namespace collarscd
