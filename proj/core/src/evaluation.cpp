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

#include "collarscd/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <tuple>

#include "collarscd/error.hpp"

namespace collarscd {

MatchResult MatchChangePoints(const ChangePointTimes& refs,
                              const ChangePointTimes& hyps,
                              double forgiveness) {
  if (!(forgiveness >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "forgiveness must be >= 0");
  }
  const auto r = refs.times();
  const auto h = hyps.times();
  const double reach = forgiveness + kMatchTolerance;

  struct Candidate {
    double distance;
    std::size_t ref;
    std::size_t hyp;
  };
  std::vector<Candidate> candidates;
  std::size_t first_hyp = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    while (first_hyp < h.size() && h[first_hyp] < r[i] - reach) ++first_hyp;
    for (std::size_t j = first_hyp; j < h.size() && h[j] <= r[i] + reach;
         ++j) {
      const double d = std::abs(r[i] - h[j]);
      if (d <= reach) candidates.push_back({d, i, j});
    }
  }
  // Both time lists are sorted, so index order is time order.
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              return std::tie(a.distance, a.ref, a.hyp) <
                     std::tie(b.distance, b.ref, b.hyp);
            });

  std::vector<std::ptrdiff_t> ref_to_hyp(r.size(), -1);
  std::vector<bool> hyp_used(h.size(), false);
  for (const auto& c : candidates) {
    if (ref_to_hyp[c.ref] >= 0 || hyp_used[c.hyp]) continue;
    ref_to_hyp[c.ref] = static_cast<std::ptrdiff_t>(c.hyp);
    hyp_used[c.hyp] = true;
  }

  MatchResult out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (ref_to_hyp[i] >= 0) {
      out.pairs.emplace_back(r[i], h[static_cast<std::size_t>(ref_to_hyp[i])]);
    } else {
      out.unmatched_refs.push_back(r[i]);
    }
  }
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (!hyp_used[j]) out.unmatched_hyps.push_back(h[j]);
  }
  return out;
}

MatchCounts CountMatches(const MatchResult& m) {
  return {m.pairs.size(), m.unmatched_hyps.size(), m.unmatched_refs.size()};
}

PRPoint PrecisionRecallF1(const MatchCounts& counts, double threshold) {
  const auto tp = static_cast<double>(counts.true_positives);
  const auto num_hyps = tp + static_cast<double>(counts.false_positives);
  const auto num_refs = tp + static_cast<double>(counts.false_negatives);
  PRPoint p;
  p.threshold = threshold;
  p.precision = num_hyps > 0.0 ? tp / num_hyps : 1.0;
  p.recall = num_refs > 0.0 ? tp / num_refs : 1.0;
  const double denom = p.precision + p.recall;
  p.f1 = denom > 0.0 ? 2.0 * p.precision * p.recall / denom : 0.0;
  return p;
}

PRPoint PrecisionRecallF1(const MatchResult& m) {
  return PrecisionRecallF1(CountMatches(m));
}

std::vector<double> CandidateThresholds(std::span<const ScoredSequence> set) {
  std::vector<double> values;
  for (const auto& item : set) {
    const auto p = item.scores.boundary_probabilities();
    values.insert(values.end(), p.begin(), p.end());
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<double> out;
  if (values.empty()) return out;
  out.reserve(values.size() + 1);
  out.push_back(values.front() / 2.0);
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    out.push_back(values[i] + (values[i + 1] - values[i]) / 2.0);
  }
  out.push_back(values.back() + (1.0 - values.back()) / 2.0);
  return out;
}

namespace {

// Per-sequence probabilities, plus for local-maxima mode the maxima that
// survive merging. Survival does not depend on the threshold (a suppressing
// maximum is higher, so it clears any threshold the suppressed one clears),
// hence detection at threshold t is the survivors with p1 > t.
class PreparedSet {
 public:
  PreparedSet(std::span<const ScoredSequence> set, const DetectorConfig& cfg)
      : set_(set), cfg_(cfg) {
    cfg_.Validate();
    probs_.reserve(set.size());
    for (const auto& item : set) {
      probs_.push_back(item.scores.boundary_probabilities());
    }
    if (cfg_.mode == DetectorMode::kLocalMaxima) {
      DetectorConfig all = cfg_;
      all.threshold = 0.0;
      for (std::size_t i = 0; i < set.size(); ++i) {
        auto frames = DetectFrames(probs_[i], all, set[i].scores.frame_shift());
        survivors_.push_back(std::move(frames));
      }
    }
  }

  MatchCounts Counts(double threshold, double forgiveness) const {
    MatchCounts total;
    DetectorConfig probe = cfg_;
    probe.threshold = threshold;
    std::vector<double> times;
    for (std::size_t i = 0; i < set_.size(); ++i) {
      const double shift = set_[i].scores.frame_shift();
      times.clear();
      if (cfg_.mode == DetectorMode::kLocalMaxima) {
        for (std::size_t t : survivors_[i]) {
          if (probs_[i][t] > threshold) times.push_back(FrameToTime(t, shift));
        }
      } else {
        for (std::size_t t : DetectFrames(probs_[i], probe, shift)) {
          times.push_back(FrameToTime(t, shift));
        }
      }
      const ChangePointTimes hyps(times);
      total += CountMatches(MatchChangePoints(set_[i].refs, hyps, forgiveness));
    }
    return total;
  }

 private:
  std::span<const ScoredSequence> set_;
  DetectorConfig cfg_;
  std::vector<std::vector<double>> probs_;
  std::vector<std::vector<std::size_t>> survivors_;
};

}  // namespace

MatchCounts EvaluateCounts(std::span<const ScoredSequence> set,
                           const DetectorConfig& cfg, double forgiveness) {
  MatchCounts total;
  for (const auto& item : set) {
    const auto hyps = DetectBatch(item.scores, cfg);
    total += CountMatches(MatchChangePoints(item.refs, hyps, forgiveness));
  }
  return total;
}

PRPoint Evaluate(std::span<const ScoredSequence> set,
                 const DetectorConfig& cfg, double forgiveness) {
  return PrecisionRecallF1(EvaluateCounts(set, cfg, forgiveness),
                           cfg.threshold);
}

double TuneThreshold(std::span<const ScoredSequence> dev,
                     const DetectorConfig& cfg, double forgiveness) {
  if (dev.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "development set is empty");
  }
  const PreparedSet prepared(dev, cfg);
  double best_threshold = 0.0;
  double best_f1 = -1.0;
  for (double t : CandidateThresholds(dev)) {
    const double f1 = PrecisionRecallF1(prepared.Counts(t, forgiveness)).f1;
    if (f1 >= best_f1) {  // ascending sweep: ties move to the higher threshold
      best_f1 = f1;
      best_threshold = t;
    }
  }
  return best_threshold;
}

std::vector<PRPoint> PrCurve(std::span<const ScoredSequence> test,
                             const DetectorConfig& cfg, double forgiveness) {
  if (test.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "test set is empty");
  }
  const PreparedSet prepared(test, cfg);
  auto thresholds = CandidateThresholds(test);
  std::reverse(thresholds.begin(), thresholds.end());
  std::vector<PRPoint> curve;
  curve.reserve(thresholds.size());
  for (double t : thresholds) {
    curve.push_back(PrecisionRecallF1(prepared.Counts(t, forgiveness), t));
  }
  return curve;
}

void WritePrCurveCsv(std::ostream& os, std::span<const PRPoint> curve) {
  os << "threshold,precision,recall,f1\n";
  const auto old_precision = os.precision(10);
  for (const auto& p : curve) {
    os << p.threshold << ',' << p.precision << ',' << p.recall << ',' << p.f1
       << '\n';
  }
  os.precision(old_precision);
}

}  // namespace collarscd
