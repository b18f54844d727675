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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "collarscd/types.hpp"

namespace collarscd {

struct SpeakerSegment {
  double start = 0.0;  // seconds
  double end = 0.0;
  std::string speaker_id;

  bool operator==(const SpeakerSegment&) const = default;
};

// Recording id -> SPEAKER segments in file order. Other record types are
// skipped. Readers throw kParse with a 1-based line number on malformed input.
using RttmRecordings = std::map<std::string, std::vector<SpeakerSegment>>;

RttmRecordings ReadRttm(std::istream& is);
RttmRecordings ReadRttm(const std::filesystem::path& path);

inline constexpr double kDefaultMaxGap = 2.0;

// A boundary at the start of the second segment of every consecutive pair
// with different speakers separated by less than max_gap seconds. Segments
// must be sorted by start and must not overlap (kInvalidArgument otherwise).
ChangePointTimes DiarizationToChangePoints(
    const std::vector<SpeakerSegment>& segments,
    double max_gap = kDefaultMaxGap);

// One timestamp per line in seconds; blank lines are ignored on read.
ChangePointTimes ReadChangePoints(std::istream& is);
ChangePointTimes ReadChangePoints(const std::filesystem::path& path);
void WriteChangePoints(std::ostream& os, const ChangePointTimes& times);
void WriteChangePoints(const std::filesystem::path& path,
                       const ChangePointTimes& times);
// Millisecond formatting used by WriteChangePoints and the CLI.
std::string FormatTime(double seconds);

// `frame_shift=<seconds>` header, then one boundary probability per line.
FrameScoreSequence ReadFrameScores(std::istream& is);
FrameScoreSequence ReadFrameScores(const std::filesystem::path& path);
void WriteFrameScores(std::ostream& os, const FrameScoreSequence& scores);
void WriteFrameScores(const std::filesystem::path& path,
                      const FrameScoreSequence& scores);

// Incremental reader for the frame-score format, used by streaming detection.
class FrameScoreReader {
 public:
  // Consumes the header line.
  explicit FrameScoreReader(std::istream& is);

  double frame_shift() const { return frame_shift_; }
  // Next boundary probability; false at end of input.
  bool Next(double* probability);

 private:
  std::istream& is_;
  double frame_shift_ = 0.0;
  std::size_t line_no_ = 0;
};

// Parses a full-string double; throws kParse naming `what` and `line_no`.
double ParseDouble(const std::string& text, std::size_t line_no,
                   const char* what);

}  // namespace collarscd
