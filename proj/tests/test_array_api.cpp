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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "collarscd/array_api.hpp"
#include "collarscd/error.hpp"
#include "collarscd/evaluation.hpp"
#include "collarscd/losses.hpp"
#include "collarscd/rng.hpp"
#include "oracles.hpp"

namespace collarscd {
namespace {

namespace api = array_api;

TEST(ArrayApi, UniformFixture) {
  const std::vector<double> h(5, std::log(0.5));
  const std::vector<std::int64_t> z{2};
  const auto out = api::CollarLossForwardBackward(h, h, z, 1, CollarSemantics::kInclusive);
  EXPECT_NEAR(out.value, 2.367124, 5e-7);
  EXPECT_EQ(out.grad_log_p0.size(), 5u);
  EXPECT_NEAR(out.grad_log_p1[2], -1.0 / 3.0, 1e-12);
}

TEST(ArrayApi, MatchesLibraryBitForBit) {
  Rng rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(rng.UniformInt(1, 30));
    const auto s = testing::MakeRandomScores(rng, n);
    const int c = static_cast<int>(rng.UniformInt(0, 3));
    const auto zv = testing::MakeDisjointBoundaries(rng, n, 3, c);
    std::vector<std::int64_t> zi(zv.begin(), zv.end());
    const auto out = api::CollarLossForwardBackward(s.lp0, s.lp1, zi, c,
                                                    CollarSemantics::kInclusive);
    const FrameScoreSequence seq(s.lp0, s.lp1, 1.0,
                                 FrameScoreSequence::Normalization::kUnchecked);
    const auto ref = CollarLossEfficient(
        seq, ChangePointSet(zv),
        {c, CollarSemantics::kInclusive, EdgePolicy::kClamp});
    EXPECT_EQ(out.value, ref.value);
    EXPECT_EQ(out.grad_log_p0, ref.grad->d_log_p0);
    EXPECT_EQ(out.grad_log_p1, ref.grad->d_log_p1);
    if (c == 0) {
      EXPECT_NEAR(out.value, BceSparse(seq, ChangePointSet(zv)).value,
                  1e-12 * std::max(1.0, out.value));
    }
  }
}

TEST(ArrayApi, ErrorKindsPassThrough) {
  const std::vector<double> h(20, std::log(0.5));
  auto kind = [&](std::vector<std::int64_t> z, int c, CollarSemantics sem,
                  std::size_t n1 = 20) {
    try {
      api::CollarLossForwardBackward(h, std::vector<double>(n1, std::log(0.5)), z, c, sem);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kInternal;
  };
  EXPECT_EQ(kind({5, 7}, 2, CollarSemantics::kInclusive), ErrorKind::kOverlap);
  EXPECT_EQ(kind({-1}, 1, CollarSemantics::kInclusive), ErrorKind::kOutOfBounds);
  EXPECT_EQ(kind({20}, 1, CollarSemantics::kInclusive), ErrorKind::kOutOfBounds);
  EXPECT_EQ(kind({5}, 0, CollarSemantics::kStrict), ErrorKind::kInvalidConfig);
  EXPECT_EQ(kind({5}, 1, CollarSemantics::kInclusive, 19), ErrorKind::kLengthMismatch);
  EXPECT_EQ(kind({7, 5}, 1, CollarSemantics::kInclusive), ErrorKind::kInvalidArgument);
}

TEST(ArrayApi, ScoreExamples) {
  auto s = api::Score(std::vector<double>{1.0}, std::vector<double>{0.9, 1.1}, 0.25);
  EXPECT_DOUBLE_EQ(s.precision, 0.5);
  EXPECT_DOUBLE_EQ(s.recall, 1.0);
  s = api::Score(std::vector<double>{}, std::vector<double>{}, 0.25);
  EXPECT_EQ(s.f1, 1.0);
  s = api::Score(std::vector<double>{1.0, 5.0}, std::vector<double>{1.1, 2.0}, 0.25);
  EXPECT_DOUBLE_EQ(s.precision, 0.5);
  EXPECT_DOUBLE_EQ(s.recall, 0.5);
  EXPECT_DOUBLE_EQ(s.f1, 0.5);
  EXPECT_THROW(api::Score(std::vector<double>{2.0, 1.0}, std::vector<double>{}, 0.25), Error);
}

TEST(ArrayApi, ScoreMatchesLibrary) {
  Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto r = testing::RandomTimes(rng, 8, 10.0);
    const auto h = testing::RandomTimes(rng, 8, 10.0);
    const double f = rng.Uniform(0.0, 1.0);
    const auto a = api::Score(r, h, f);
    const auto b = PrecisionRecallF1(
        MatchChangePoints(ChangePointTimes(r), ChangePointTimes(h), f));
    EXPECT_EQ(a.precision, b.precision);
    EXPECT_EQ(a.recall, b.recall);
    EXPECT_EQ(a.f1, b.f1);
  }
}

}  // namespace
}  // namespace collarscd
