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
#include <functional>
#include <vector>

#include "collarscd/error.hpp"
#include "collarscd/rng.hpp"
#include "collarscd/types.hpp"

namespace collarscd {
namespace {

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no collarscd::Error thrown";
  return ErrorKind::kInternal;
}

TEST(FrameScoreSequence, ValidatesShapeAndRange) {
  const double h = std::log(0.5);
  EXPECT_NO_THROW(FrameScoreSequence({h, h}, {h, h}, 0.08));
  EXPECT_EQ(KindOf([] { FrameScoreSequence({}, {}, 0.08); }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(KindOf([&] { FrameScoreSequence({h}, {h, h}, 0.08); }),
            ErrorKind::kLengthMismatch);
  EXPECT_EQ(KindOf([&] { FrameScoreSequence({h}, {h}, 0.0); }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(KindOf([&] { FrameScoreSequence({0.1}, {h}, 0.08); }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(KindOf([&] { FrameScoreSequence({NAN}, {h}, 0.08); }),
            ErrorKind::kInvalidArgument);
  // exp(-1) + exp(-1) is not 1.
  EXPECT_EQ(KindOf([] { FrameScoreSequence({-1.0}, {-1.0}, 0.08); }),
            ErrorKind::kInvalidArgument);
  EXPECT_NO_THROW(FrameScoreSequence(
      {-1.0}, {-1.0}, 0.08, FrameScoreSequence::Normalization::kUnchecked));
}

TEST(FrameScoreSequence, ProbabilityRoundTrip) {
  const std::vector<double> p{0.0, 0.5, 0.9, 1.0};
  const auto s = FrameScoreSequence::FromBoundaryProbabilities(p, 0.01);
  EXPECT_DOUBLE_EQ(s.boundary_probability(1), 0.5);
  EXPECT_NEAR(s.boundary_probability(2), 0.9, 1e-15);
  EXPECT_TRUE(std::isfinite(s.log_p1()[0]));
  EXPECT_TRUE(std::isfinite(s.log_p0()[3]));
  EXPECT_NEAR(s.boundary_probability(0), 1e-12, 1e-20);
}

TEST(FrameScoreSequence, FromLogitsIsNormalized) {
  const std::vector<double> a{-40.0, -2.0, 0.0, 3.0, 40.0};
  const auto s = FrameScoreSequence::FromLogits(a, 0.08);
  for (std::size_t t = 0; t < a.size(); ++t) {
    EXPECT_NEAR(std::exp(s.log_p0()[t]) + std::exp(s.log_p1()[t]), 1.0, 1e-12);
  }
  EXPECT_NEAR(s.log_p1()[2], std::log(0.5), 1e-15);
}

TEST(LabelsToChangePoints, Examples) {
  EXPECT_EQ(LabelsToChangePoints(LabelSequence({0, 0, 1, 0, 0})),
            ChangePointSet({2}));
  EXPECT_EQ(LabelsToChangePoints(LabelSequence({0, 0, 0})), ChangePointSet());
  EXPECT_EQ(LabelsToChangePoints(LabelSequence({1, 0, 1})),
            ChangePointSet({0, 2}));
  EXPECT_THROW(LabelSequence({0, 2}), Error);
}

TEST(LabelsToChangePoints, InverseOfChangePointsToLabels) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(rng.UniformInt(1, 40));
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.Uniform() < 0.2) pos.push_back(i);
    }
    const ChangePointSet z(pos);
    const auto labels = ChangePointsToLabels(z, n);
    ASSERT_EQ(labels.size(), n);
    EXPECT_EQ(LabelsToChangePoints(labels), z);
  }
}

TEST(ChangePointSet, RejectsUnorderedAndOutOfRange) {
  EXPECT_EQ(KindOf([] { ChangePointSet({3, 3}); }), ErrorKind::kInvalidArgument);
  EXPECT_EQ(KindOf([] { ChangePointSet({4, 1}); }), ErrorKind::kInvalidArgument);
  EXPECT_EQ(KindOf([] { ChangePointSet({4}).CheckRange(4); }),
            ErrorKind::kOutOfBounds);
  EXPECT_EQ(KindOf([] { ChangePointsToLabels(ChangePointSet({5}), 5); }),
            ErrorKind::kOutOfBounds);
}

TEST(ChangePointTimes, RejectsUnorderedAndNegative) {
  EXPECT_THROW(ChangePointTimes({1.0, 0.5}), Error);
  EXPECT_THROW(ChangePointTimes({-0.1}), Error);
  EXPECT_THROW(ChangePointTimes({1.0, 1.0}), Error);
}

TEST(CollarWindow, Examples) {
  const CollarConfig strict{2, CollarSemantics::kStrict, EdgePolicy::kClamp};
  EXPECT_EQ(CollarWindow(2, strict, 5), (IndexRange{1, 3}));
  const CollarConfig zero{0, CollarSemantics::kInclusive, EdgePolicy::kClamp};
  EXPECT_EQ(CollarWindow(2, zero, 5), (IndexRange{2, 2}));
  const CollarConfig clamp{2, CollarSemantics::kInclusive, EdgePolicy::kClamp};
  EXPECT_EQ(CollarWindow(1, clamp, 5), (IndexRange{0, 3}));
}

TEST(CollarWindow, Errors) {
  const CollarConfig reject{2, CollarSemantics::kInclusive, EdgePolicy::kReject};
  EXPECT_EQ(KindOf([&] { CollarWindow(1, reject, 5); }), ErrorKind::kOutOfBounds);
  EXPECT_EQ(KindOf([&] { CollarWindow(3, reject, 5); }), ErrorKind::kOutOfBounds);
  EXPECT_EQ(CollarWindow(2, reject, 5), (IndexRange{0, 4}));
  const CollarConfig bad{0, CollarSemantics::kStrict, EdgePolicy::kClamp};
  EXPECT_EQ(KindOf([&] { CollarWindow(2, bad, 5); }), ErrorKind::kInvalidConfig);
  const CollarConfig neg{-1, CollarSemantics::kInclusive, EdgePolicy::kClamp};
  EXPECT_EQ(KindOf([&] { CollarWindow(2, neg, 5); }), ErrorKind::kInvalidConfig);
  const CollarConfig ok{1, CollarSemantics::kInclusive, EdgePolicy::kClamp};
  EXPECT_EQ(KindOf([&] { CollarWindow(5, ok, 5); }), ErrorKind::kOutOfBounds);
}

TEST(CollarWindow, SizeAndSymmetryWithoutClamping) {
  for (int c = 0; c <= 6; ++c) {
    for (auto sem : {CollarSemantics::kInclusive, CollarSemantics::kStrict}) {
      if (sem == CollarSemantics::kStrict && c == 0) continue;
      const CollarConfig cfg{c, sem, EdgePolicy::kClamp};
      const std::size_t z = 20;
      const auto w = CollarWindow(z, cfg, 41);
      const std::size_t expect =
          sem == CollarSemantics::kInclusive ? 2 * c + 1 : 2 * c - 1;
      EXPECT_EQ(w.size(), expect);
      EXPECT_EQ(z - w.first, w.last - z);
    }
  }
}

TEST(FrameTime, ConversionRoundsHalfUp) {
  EXPECT_DOUBLE_EQ(FrameToTime(3, 0.08), 0.24);
  EXPECT_EQ(TimeToFrame(0.24, 0.08), 3u);
  EXPECT_EQ(TimeToFrame(0.05, 0.1), 1u);
  EXPECT_EQ(TimeToFrame(0.049, 0.1), 0u);
  for (std::size_t i = 0; i < 5000; i += 7) {
    EXPECT_EQ(TimeToFrame(FrameToTime(i, 0.01), 0.01), i);
  }
  EXPECT_THROW(ToFrames(ChangePointTimes({0.10, 0.11}), 0.08), Error);
  EXPECT_EQ(ToFrames(ToTimes(ChangePointSet({1, 4, 9}), 0.08), 0.08),
            ChangePointSet({1, 4, 9}));
}

}  // namespace
}  // namespace collarscd
