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

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "collarscd/detection.hpp"
#include "collarscd/evaluation.hpp"
#include "collarscd/losses.hpp"
#include "collarscd/rng.hpp"

namespace {

using namespace collarscd;

// n frames of random scores with a boundary every `spacing` frames.
struct Fixture {
  FrameScoreSequence scores;
  ChangePointSet boundaries;
};

Fixture MakeFixture(std::size_t n, std::size_t spacing) {
  Rng rng(1);
  std::vector<double> logits(n);
  for (auto& a : logits) a = 3.0 * rng.Normal() - 4.0;
  std::vector<std::size_t> z;
  for (std::size_t t = spacing / 2; t < n; t += spacing) z.push_back(t);
  return {FrameScoreSequence::FromLogits(logits, 0.08), ChangePointSet(z)};
}

void BM_CollarLossEfficient(benchmark::State& state) {
  const auto f = MakeFixture(static_cast<std::size_t>(state.range(0)), 20);
  const CollarConfig cfg{static_cast<int>(state.range(1)), CollarSemantics::kInclusive,
                         EdgePolicy::kClamp};
  for (auto _ : state) {
    benchmark::DoNotOptimize(CollarLossEfficient(f.scores, f.boundaries, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CollarLossEfficient)->Args({375, 3})->Args({3750, 3})->Args({37500, 3})->Args({3750, 9});

void BM_CollarLossBruteForce(benchmark::State& state) {
  // Three boundaries, so 7^3 configurations at c = 3.
  const auto f = MakeFixture(60, 20);
  const CollarConfig cfg{static_cast<int>(state.range(0)), CollarSemantics::kInclusive,
                         EdgePolicy::kClamp};
  for (auto _ : state) {
    benchmark::DoNotOptimize(CollarLossBruteForce(f.scores, f.boundaries, cfg));
  }
}
BENCHMARK(BM_CollarLossBruteForce)->Arg(1)->Arg(3);

void BM_BceSparse(benchmark::State& state) {
  const auto f = MakeFixture(static_cast<std::size_t>(state.range(0)), 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(BceSparse(f.scores, f.boundaries));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BceSparse)->Arg(3750);

void BM_MatchChangePoints(benchmark::State& state) {
  Rng rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> refs, hyps;
  for (std::size_t i = 0; i < n; ++i) {
    refs.push_back(2.0 * static_cast<double>(i) + rng.Uniform(0.0, 0.5));
    hyps.push_back(2.0 * static_cast<double>(i) + rng.Uniform(0.0, 0.5));
  }
  const ChangePointTimes r(refs), h(hyps);
  for (auto _ : state) {
    benchmark::DoNotOptimize(MatchChangePoints(r, h, 0.25));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MatchChangePoints)->Arg(100)->Arg(10000);

void BM_StreamingDetector(benchmark::State& state) {
  const auto f = MakeFixture(3750, 20);
  DetectorConfig cfg;
  cfg.threshold = 0.3;
  cfg.min_separation = 0.25;
  for (auto _ : state) {
    StreamingDetector det(cfg, 0.08, 12);
    for (std::size_t t = 0; t < f.scores.size(); ++t) {
      benchmark::DoNotOptimize(det.Push(t, f.scores.log_p0()[t], f.scores.log_p1()[t]));
    }
    benchmark::DoNotOptimize(det.Finish());
  }
  state.SetItemsProcessed(state.iterations() * 3750);
}
BENCHMARK(BM_StreamingDetector);

void BM_TuneThreshold(benchmark::State& state) {
  std::vector<ScoredSequence> dev;
  for (int k = 0; k < 20; ++k) {
    const auto f = MakeFixture(250, 25);
    dev.push_back({f.scores, ToTimes(f.boundaries, 0.08)});
  }
  DetectorConfig cfg;
  cfg.min_separation = 0.25;
  for (auto _ : state) {
    benchmark::DoNotOptimize(TuneThreshold(dev, cfg, 0.25));
  }
}
BENCHMARK(BM_TuneThreshold);

}  // namespace

BENCHMARK_MAIN();
