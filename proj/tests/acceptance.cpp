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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "collarscd/detection.hpp"
#include "collarscd/error.hpp"
#include "collarscd/evaluation.hpp"
#include "collarscd/experiment.hpp"
#include "collarscd/io.hpp"
#include "collarscd/losses.hpp"
#include "collarscd/model.hpp"
#include "collarscd/rng.hpp"
#include "collarscd/train.hpp"
#include "oracles.hpp"

namespace {

using namespace collarscd;
using Clock = std::chrono::steady_clock;

int g_failures = 0;

void Report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string Fmt(const char* fmt, double a = 0, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
  return buf;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

FrameScoreSequence Unchecked(const std::vector<double>& lp0,
                             const std::vector<double>& lp1) {
  return FrameScoreSequence(lp0, lp1, 0.08,
                            FrameScoreSequence::Normalization::kUnchecked);
}

struct OracleInstance {
  testing::RandomScores s;
  std::vector<std::size_t> z;
  CollarConfig cfg;
};

std::vector<OracleInstance> OracleInstances(std::size_t count) {
  Rng rng(101);
  std::vector<OracleInstance> out;
  for (std::size_t i = 0; i < count; ++i) {
    const bool strict = i % 2 == 1;
    const int c = static_cast<int>(rng.UniformInt(strict ? 1 : 0, 3));
    const auto n = static_cast<std::size_t>(rng.UniformInt(1, 20));
    OracleInstance inst;
    inst.s = testing::MakeRandomScores(rng, n, 4.0);
    inst.z = testing::MakeDisjointBoundaries(rng, n, 3, c);
    inst.cfg = {c, strict ? CollarSemantics::kStrict : CollarSemantics::kInclusive,
                EdgePolicy::kClamp};
    out.push_back(std::move(inst));
  }
  return out;
}

void OracleEquivalenceAndBound() {
  const auto instances = OracleInstances(2000);
  double worst_lib = 0.0;
  double worst_oracle = 0.0;
  double bound_violation = 0.0;
  double softmax_dev = 0.0;
  std::size_t strict = 0;
  const auto start = Clock::now();
  for (const auto& inst : instances) {
    const auto seq = Unchecked(inst.s.lp0, inst.s.lp1);
    const ChangePointSet z(inst.z);
    const double eff = CollarLossEfficient(seq, z, inst.cfg, WithGradient::kNo).value;
    const double brute = CollarLossBruteForce(seq, z, inst.cfg, WithGradient::kNo).value;
    worst_lib = std::max(worst_lib, std::abs(eff - brute) / std::max(1.0, std::abs(brute)));
    strict += inst.cfg.semantics == CollarSemantics::kStrict;
  }
  const double elapsed = Seconds(start);
  for (const auto& inst : instances) {
    const auto seq = Unchecked(inst.s.lp0, inst.s.lp1);
    const ChangePointSet z(inst.z);
    const double eff = CollarLossEfficient(seq, z, inst.cfg, WithGradient::kNo).value;
    const auto oracle = testing::EnumerateCollar(
        inst.s.lp0, inst.s.lp1, inst.z, inst.cfg.collar_frames,
        inst.cfg.semantics == CollarSemantics::kStrict);
    worst_oracle = std::max(
        worst_oracle, std::abs(eff - oracle.value) / std::max(1.0, std::abs(oracle.value)));
    bound_violation = std::max(bound_violation, eff - oracle.min_config_loss);
    for (const auto& w : CollarPosteriors(seq, z, inst.cfg)) {
      double sum = 0.0;
      for (double a : w) sum += a;
      softmax_dev = std::max(softmax_dev, std::abs(sum - 1.0));
    }
  }
  Report(worst_lib <= 1e-9 && worst_oracle <= 1e-9 && elapsed < 10.0,
         "oracle equivalence",
         Fmt("%.0f instances (%.0f strict), max rel diff vs brute force %.2e, "
             "vs independent enumeration %.2e",
             static_cast<double>(instances.size()), static_cast<double>(strict),
             std::max(worst_lib, 0.0), worst_oracle) +
             Fmt(" (limit 1e-9, < 10 s; measured %.2f s)", elapsed));
  Report(bound_violation <= 1e-12 && softmax_dev <= 1e-12, "bound and softmax",
         Fmt("max(L_collar - min_Z' L) = %.2e, max |sum alpha - 1| = %.2e",
             bound_violation, softmax_dev));
}

void ReductionIdentity() {
  Rng rng(102);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto n = static_cast<std::size_t>(rng.UniformInt(1, 20));
    const auto s = testing::MakeRandomScores(rng, n, 4.0);
    const ChangePointSet z(testing::MakeDisjointBoundaries(rng, n, 3, 0));
    const auto seq = Unchecked(s.lp0, s.lp1);
    const CollarConfig c0{0, CollarSemantics::kInclusive, EdgePolicy::kClamp};
    const double collar = CollarLossEfficient(seq, z, c0, WithGradient::kNo).value;
    const double brute = CollarLossBruteForce(seq, z, c0, WithGradient::kNo).value;
    const double sparse = BceSparse(seq, z, WithGradient::kNo).value;
    const double dense = BceDense(seq, ChangePointsToLabels(z, n), WithGradient::kNo).value;
    const double scale = std::max(1.0, std::abs(dense));
    for (double v : {collar, brute, sparse}) {
      worst = std::max(worst, std::abs(v - dense) / scale);
    }
  }
  Report(worst <= 1e-12, "reduction identity",
         Fmt("1000 instances, c=0 collar/brute/sparse vs dense max rel diff %.2e (limit 1e-12)",
             worst));
}

// Max error of the analytic gradient over all 2N log entries.
double GradientError(const std::vector<double>& lp0, const std::vector<double>& lp1,
                     const std::function<LossResult(const FrameScoreSequence&)>& loss) {
  const std::size_t n = lp0.size();
  std::vector<double> x(lp0);
  x.insert(x.end(), lp1.begin(), lp1.end());
  auto f = [&](std::vector<double>& v) {
    return loss(Unchecked(std::vector<double>(v.begin(), v.begin() + n),
                          std::vector<double>(v.begin() + n, v.end())))
        .value;
  };
  const auto g = loss(Unchecked(lp0, lp1)).grad.value();
  double worst = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const double an = i < n ? g.d_log_p0[i] : g.d_log_p1[i - n];
    worst = std::max(worst, testing::RelativeError(an, testing::CentralDifference(f, x, i)));
  }
  return worst;
}

void GradientChecks() {
  Rng rng(103);
  double bce = 0.0, neighborhood = 0.0, collar = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto n = static_cast<std::size_t>(rng.UniformInt(2, 20));
    // Log-probabilities kept below -1e-5 so the +-h probes stay <= 0.
    const auto s = testing::MakeRandomScores(rng, n, 2.0);
    const int c = static_cast<int>(rng.UniformInt(1, 3));
    const ChangePointSet z(testing::MakeDisjointBoundaries(rng, n, 3, c));
    const auto labels = ExpandNeighborhood(z, 0.1, 0.05, n);
    const CollarConfig cfg{c, i % 2 ? CollarSemantics::kStrict : CollarSemantics::kInclusive,
                           EdgePolicy::kClamp};
    bce = std::max(bce, GradientError(s.lp0, s.lp1, [&](const FrameScoreSequence& q) {
                     return BceSparse(q, z);
                   }));
    neighborhood = std::max(neighborhood, GradientError(s.lp0, s.lp1, [&](const FrameScoreSequence& q) {
                              return BceDense(q, labels);
                            }));
    collar = std::max(collar, GradientError(s.lp0, s.lp1, [&](const FrameScoreSequence& q) {
                        return CollarLossEfficient(q, z, cfg);
                      }));
  }
  const double worst = std::max({bce, neighborhood, collar});
  Report(worst <= 1e-6, "loss gradients",
         Fmt("100 instances, h=1e-6, max rel err bce %.2e, neighborhood %.2e, collar %.2e "
             "(limit 1e-6)",
             bce, neighborhood, collar));

  // Full chain through the model parameters.
  SynthConfig scfg;
  scfg.num_train = 3;
  scfg.num_dev = scfg.num_test = 1;
  scfg.min_seconds = 4;
  scfg.max_seconds = 6;
  scfg.boundary_rate = 0.01;
  scfg.min_boundary_spacing = 12;
  scfg.annotation_jitter_frames = 1;
  scfg.feature_dim = 3;
  scfg.seed = 104;
  const auto corpus = GenerateCorpus(scfg);
  ModelConfig mcfg;
  mcfg.feature_dim = 3;
  mcfg.past_frames = 2;
  mcfg.future_frames = 1;
  mcfg.hidden = 5;
  TinyModel model(mcfg, 105, 0.1);
  double chain = 0.0;
  for (auto objective : {Objective::kCollarAware, Objective::kStandardNeighborhood}) {
    TrainConfig tcfg;
    tcfg.objective = objective;
    tcfg.collar = {2, CollarSemantics::kInclusive, EdgePolicy::kClamp};
    tcfg.neighborhood_radius_seconds = 0.2;
    const std::span<const SynthSequence> items(corpus.train);
    const auto grad = ParameterGradient(model, items, scfg.frame_shift, tcfg);
    std::vector<double> x(model.parameters().begin(), model.parameters().end());
    auto f = [&](std::vector<double>& p) {
      TinyModel probe = model;
      std::copy(p.begin(), p.end(), probe.mutable_parameters().begin());
      return MeanLoss(probe, items, scfg.frame_shift, tcfg);
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
      chain = std::max(chain, testing::RelativeError(
                                  grad[i], testing::CentralDifference(f, x, i, 1e-5)));
    }
  }
  Report(chain <= 1e-4, "model chain gradients",
         Fmt("%.0f parameters x 2 objectives, max rel err %.2e (limit 1e-4)",
             static_cast<double>(model.parameters().size()), chain));
}

void WorkedValues() {
  const double h = std::log(0.5);
  const auto uniform = FrameScoreSequence(std::vector<double>(5, h),
                                          std::vector<double>(5, h), 0.08);
  const CollarConfig c1{1, CollarSemantics::kInclusive, EdgePolicy::kClamp};
  const double eff = CollarLossEfficient(uniform, ChangePointSet({2}), c1).value;
  const double brute = CollarLossBruteForce(uniform, ChangePointSet({2}), c1).value;
  const double expect = std::log(32.0 / 3.0);
  char printed[32];
  std::snprintf(printed, sizeof printed, "%.6f", eff);
  Report(std::abs(eff - expect) <= 1e-12 && std::abs(brute - expect) <= 1e-12 &&
             std::string(printed) == "2.367124",
         "uniform fixture", std::string("efficient ") + printed +
                                Fmt(", brute force %.6f, ln(32/3) = %.6f", brute, expect));

  const auto e = testing::EnumerateCollar(std::vector<double>(5, h), std::vector<double>(5, h),
                                          {2}, 2, true);
  const std::vector<std::vector<int>> want{{0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}};
  const CollarConfig strict{2, CollarSemantics::kStrict, EdgePolicy::kClamp};
  const auto window = CollarWindow(2, strict, 5);
  Report(e.configurations == 3 && e.label_sets == want && window.size() == 3 &&
             window.first == 1,
         "strict enumeration",
         Fmt("reference [0 0 1 0 0], c=2 strict: %.0f configurations, window [%.0f, %.0f]",
             static_cast<double>(e.configurations), static_cast<double>(window.first),
             static_cast<double>(window.last)));
}

void MatchingAndTuning() {
  Rng rng(106);
  std::size_t violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto r = testing::RandomTimes(rng, 8, 6.0);
    const auto h = testing::RandomTimes(rng, 8, 6.0);
    const double f = rng.Uniform(0.0, 1.0);
    const auto m = MatchChangePoints(ChangePointTimes(r), ChangePointTimes(h), f);
    std::vector<double> rs, hs;
    for (const auto& [a, b] : m.pairs) {
      if (std::abs(a - b) > f + kMatchTolerance) ++violations;
      rs.push_back(a);
      hs.push_back(b);
    }
    rs.insert(rs.end(), m.unmatched_refs.begin(), m.unmatched_refs.end());
    hs.insert(hs.end(), m.unmatched_hyps.begin(), m.unmatched_hyps.end());
    std::sort(rs.begin(), rs.end());
    std::sort(hs.begin(), hs.end());
    if (rs != r || hs != h) ++violations;
    const auto p = PrecisionRecallF1(m);
    const auto q = PrecisionRecallF1(
        MatchChangePoints(ChangePointTimes(h), ChangePointTimes(r), f));
    if (p.precision != q.recall || p.recall != q.precision) ++violations;
    if (MatchChangePoints(ChangePointTimes(r), ChangePointTimes(h), f + 0.25).pairs.size() <
        m.pairs.size()) {
      ++violations;
    }
    if (m.pairs.size() > testing::OptimalMatchCount(r, h, f)) ++violations;
  }
  Report(violations == 0, "matching invariants",
         Fmt("1000 instances: uniqueness, distance bound, P/R symmetry, forgiveness "
             "monotonicity, greedy <= optimal; %.0f violations",
             static_cast<double>(violations)));

  // Scores sit half-way between grid points so every distinct detection set
  // is reachable from the 1000-point grid.
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ScoredSequence> dev;
    for (int k = 0; k < 3; ++k) {
      const auto n = static_cast<std::size_t>(rng.UniformInt(10, 60));
      std::vector<double> p(n);
      for (auto& v : p) v = (static_cast<double>(rng.UniformInt(0, 998)) + 0.5) / 1000.0;
      std::vector<double> refs;
      for (std::size_t t = 2; t < n; t += static_cast<std::size_t>(rng.UniformInt(4, 15))) {
        refs.push_back(FrameToTime(t, 0.1));
      }
      dev.push_back({FrameScoreSequence::FromBoundaryProbabilities(p, 0.1),
                     ChangePointTimes(refs)});
    }
    DetectorConfig cfg;
    cfg.mode = trial % 2 ? DetectorMode::kLocalMaxima : DetectorMode::kThresholdOnly;
    cfg.min_separation = 0.25;
    const double tuned = TuneThreshold(dev, cfg, 0.25);
    DetectorConfig at = cfg;
    at.threshold = tuned;
    const double tuned_f1 = Evaluate(dev, at, 0.25).f1;
    double grid_best = -1.0;
    for (int g = 0; g < 1000; ++g) {
      at.threshold = g / 1000.0;
      grid_best = std::max(grid_best, Evaluate(dev, at, 0.25).f1);
    }
    // The grid point nearest the tuned threshold reproduces its detections.
    at.threshold = std::round(tuned * 1000.0) / 1000.0;
    const double near_f1 = Evaluate(dev, at, 0.25).f1;
    if (tuned_f1 != grid_best || near_f1 != tuned_f1) ++mismatches;
  }
  Report(mismatches == 0, "threshold tuning vs grid",
         Fmt("20 dev sets, tuned F1 equals 1000-point grid optimum and its nearest "
             "grid point; %.0f mismatches",
             static_cast<double>(mismatches)));
}

void StreamingEquivalence() {
  Rng rng(107);
  std::size_t mismatches = 0;
  std::size_t late = 0;
  std::size_t detections = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(rng.UniformInt(1, 150));
    const double shift = 0.08;
    DetectorConfig cfg;
    std::size_t lookahead;
    std::vector<double> p(n);
    if (trial % 2 == 0) {
      cfg.mode = DetectorMode::kLocalMaxima;
      cfg.threshold = rng.Uniform(0.0, 0.8);
      cfg.min_separation = 0.08 * static_cast<double>(rng.UniformInt(0, 5)) + 0.01;
      for (auto& v : p) v = std::round(rng.Uniform() * 50.0) / 50.0;
      lookahead = cfg.MergeRadiusFrames(shift) + 1 + static_cast<std::size_t>(rng.UniformInt(0, 3));
    } else {
      cfg.mode = DetectorMode::kThresholdOnly;
      cfg.threshold = 0.5;
      for (std::size_t t = 0; t < n;) {
        const auto gap = static_cast<std::size_t>(rng.UniformInt(1, 6));
        for (std::size_t k = 0; k < gap && t < n; ++k) p[t++] = rng.Uniform(0.0, 0.5);
        const auto burst = static_cast<std::size_t>(rng.UniformInt(0, 4));
        for (std::size_t k = 0; k < burst && t < n; ++k) {
          p[t++] = std::round(rng.Uniform(0.51, 1.0) * 20.0) / 20.0;
        }
      }
      lookahead = 3 + static_cast<std::size_t>(rng.UniformInt(0, 3));
    }
    const auto seq = FrameScoreSequence::FromBoundaryProbabilities(p, shift);
    const auto batch = DetectBatch(seq, cfg);
    StreamingDetector det(cfg, shift, lookahead);
    std::vector<double> got;
    for (std::size_t t = 0; t < n; ++t) {
      if (auto d = det.Push(t, seq.log_p0()[t], seq.log_p1()[t])) {
        got.push_back(*d);
        // Returned by Push(t) must be the decision for frame t - L.
        if (t < lookahead || TimeToFrame(*d, shift) != t - lookahead) ++late;
      }
    }
    for (double d : det.Finish()) {
      got.push_back(d);
      if (TimeToFrame(d, shift) + lookahead < n) ++late;
    }
    detections += got.size();
    if (got != std::vector<double>(batch.times().begin(), batch.times().end())) ++mismatches;
  }
  Report(mismatches == 0 && late == 0, "streaming equals batch",
         Fmt("200 sequences, %.0f detections, %.0f mismatching sequences, %.0f decisions "
             "off the L-frame delay",
             static_cast<double>(detections), static_cast<double>(mismatches),
             static_cast<double>(late)));
}

void ConversionExamples() {
  const auto a = DiarizationToChangePoints({{0, 5, "A"}, {5.5, 9, "B"}});
  const auto b = DiarizationToChangePoints({{0, 5, "A"}, {8, 9, "B"}});
  const auto c = DiarizationToChangePoints({{0, 5, "A"}, {5.5, 9, "A"}});
  const bool ok = a.size() == 1 && a[0] == 5.5 && b.empty() && c.empty();
  Report(ok, "diarization conversion",
         std::string("gap 0.5 s -> ") + (a.size() == 1 ? FormatTime(a[0]) : "?") +
             ", gap 3 s -> " + std::to_string(b.size()) + " points, same speaker -> " +
             std::to_string(c.size()) + " points");
}

void QualitativeClaims() {
  const ExperimentConfig cfg;
  const auto start = Clock::now();
  const auto report = RunExperiment(cfg);
  const std::vector<CollarConfig> collars{
      {1, CollarSemantics::kInclusive, EdgePolicy::kClamp},
      {2, CollarSemantics::kInclusive, EdgePolicy::kClamp},
      {3, CollarSemantics::kInclusive, EdgePolicy::kClamp},
      {6, CollarSemantics::kInclusive, EdgePolicy::kClamp}};
  const auto sweep = CollarSweep(collars, cfg);
  const double elapsed = Seconds(start);

  const auto& nb = report.row("neighborhood");
  const auto& std_row = report.row("standard");
  const auto& col = report.row("collar");
  Report(col.test[0].f1 >= nb.test[0].f1, "claim (a) collar F1 >= neighborhood F1",
         Fmt("forgiveness 0.25 s: collar %.3f, neighborhood %.3f", col.test[0].f1,
             nb.test[0].f1));
  const double pc = col.peakiness.mean_active_frames_per_detection();
  const double pn = nb.peakiness.mean_active_frames_per_detection();
  Report(pc < pn && col.peakiness.boundaries_with_activity() > 0,
         "claim (b) collar peakiness < neighborhood",
         Fmt("mean active frames per detection: collar %.3f, neighborhood %.3f", pc, pn));
  bool all = true;
  std::string detail = Fmt("neighborhood %.3f;", sweep.neighborhood.test.f1);
  for (const auto& row : sweep.collars) {
    all &= row.test.f1 > sweep.neighborhood.test.f1;
    detail += Fmt(" c=%.0f %.3f", row.collar_frames, row.test.f1);
  }
  Report(all, "claim (c) every collar in {1,2,3,6} beats neighborhood", detail);
  Report(cfg.synth.annotation_jitter_frames > 0 &&
             cfg.collar.collar_frames >= cfg.synth.annotation_jitter_frames &&
             col.test[0].f1 > std_row.test[0].f1,
         "claim (d) collar beats jitter-blind standard training",
         Fmt("jitter +-%.0f frames, collar %.0f: collar %.3f, standard %.3f",
             cfg.synth.annotation_jitter_frames, cfg.collar.collar_frames,
             col.test[0].f1, std_row.test[0].f1));
  Report(elapsed < 300.0, "claims runtime",
         Fmt("experiment plus 4-collar sweep in %.1f s (limit 300 s)", elapsed));
}

}  // namespace

int main() {
  try {
    WorkedValues();
    OracleEquivalenceAndBound();
    ReductionIdentity();
    GradientChecks();
    MatchingAndTuning();
    StreamingEquivalence();
    ConversionExamples();
    QualitativeClaims();
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance harness: %s\n", e.what());
    return 1;
  }
  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
