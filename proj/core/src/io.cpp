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

#include "collarscd/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "collarscd/error.hpp"

namespace collarscd {

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void ParseFail(std::size_t line_no, const std::string& msg) {
  throw Error(ErrorKind::kParse,
              "line " + std::to_string(line_no) + ": " + msg);
}

std::ifstream OpenIn(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return in;
}

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  return out;
}

}  // namespace

double ParseDouble(const std::string& text, std::size_t line_no,
                   const char* what) {
  const std::string s = Trim(text);
  if (s.empty()) ParseFail(line_no, std::string("empty ") + what);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    ParseFail(line_no, std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

RttmRecordings ReadRttm(std::istream& is) {
  RttmRecordings out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string f; fields >> f;) tok.push_back(f);
    if (tok.empty() || tok[0] != "SPEAKER") continue;
    // SPEAKER file chan onset dur ortho stype name conf [slat]
    if (tok.size() < 8) ParseFail(line_no, "SPEAKER record needs 8+ fields");
    const double onset = ParseDouble(tok[3], line_no, "onset");
    const double duration = ParseDouble(tok[4], line_no, "duration");
    if (onset < 0.0) ParseFail(line_no, "negative onset");
    if (duration <= 0.0) ParseFail(line_no, "duration must be positive");
    out[tok[1]].push_back({onset, onset + duration, tok[7]});
  }
  return out;
}

RttmRecordings ReadRttm(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadRttm(in);
}

ChangePointTimes DiarizationToChangePoints(
    const std::vector<SpeakerSegment>& segments, double max_gap) {
  if (!(max_gap >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "max_gap must be >= 0");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (!(s.start >= 0.0 && s.start < s.end)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "segment " + std::to_string(i) + " has start >= end");
    }
    if (i == 0) continue;
    const auto& prev = segments[i - 1];
    if (s.start < prev.start) {
      throw Error(ErrorKind::kInvalidArgument,
                  "segments are not sorted by start time");
    }
    if (s.start < prev.end) {
      throw Error(ErrorKind::kInvalidArgument,
                  "segments " + std::to_string(i - 1) + " and " +
                      std::to_string(i) + " overlap");
    }
    if (s.speaker_id != prev.speaker_id && s.start - prev.end < max_gap) {
      out.push_back(s.start);
    }
  }
  return ChangePointTimes(std::move(out));
}

ChangePointTimes ReadChangePoints(std::istream& is) {
  std::vector<double> times;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const double t = ParseDouble(line, line_no, "timestamp");
    if (t < 0.0) ParseFail(line_no, "negative timestamp");
    if (!times.empty() && t <= times.back()) {
      ParseFail(line_no, "timestamps must be strictly increasing");
    }
    times.push_back(t);
  }
  return ChangePointTimes(std::move(times));
}

ChangePointTimes ReadChangePoints(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadChangePoints(in);
}

std::string FormatTime(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", seconds);
  return buf;
}

void WriteChangePoints(std::ostream& os, const ChangePointTimes& times) {
  for (double t : times.times()) os << FormatTime(t) << '\n';
}

void WriteChangePoints(const std::filesystem::path& path,
                       const ChangePointTimes& times) {
  auto out = OpenOut(path);
  WriteChangePoints(out, times);
}

FrameScoreReader::FrameScoreReader(std::istream& is) : is_(is) {
  std::string line;
  while (std::getline(is_, line)) {
    ++line_no_;
    if (!Trim(line).empty()) break;
  }
  const std::string header = Trim(line);
  const std::string key = "frame_shift=";
  if (header.rfind(key, 0) != 0) {
    ParseFail(line_no_ == 0 ? 1 : line_no_,
              "missing 'frame_shift=<seconds>' header");
  }
  frame_shift_ = ParseDouble(header.substr(key.size()), line_no_,
                             "frame_shift");
  if (!(frame_shift_ > 0.0)) ParseFail(line_no_, "frame_shift must be > 0");
}

bool FrameScoreReader::Next(double* probability) {
  std::string line;
  while (std::getline(is_, line)) {
    ++line_no_;
    if (Trim(line).empty()) continue;
    const double p = ParseDouble(line, line_no_, "probability");
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorKind::kOutOfBounds,
                  "line " + std::to_string(line_no_) +
                      ": probability outside [0, 1]");
    }
    *probability = p;
    return true;
  }
  return false;
}

FrameScoreSequence ReadFrameScores(std::istream& is) {
  FrameScoreReader reader(is);
  std::vector<double> p1;
  for (double p = 0.0; reader.Next(&p);) p1.push_back(p);
  if (p1.empty()) {
    throw Error(ErrorKind::kParse, "frame score file has no frames");
  }
  return FrameScoreSequence::FromBoundaryProbabilities(p1,
                                                       reader.frame_shift());
}

FrameScoreSequence ReadFrameScores(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadFrameScores(in);
}

void WriteFrameScores(std::ostream& os, const FrameScoreSequence& scores) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "frame_shift=" << scores.frame_shift() << '\n';
  for (std::size_t t = 0; t < scores.size(); ++t) {
    os << scores.boundary_probability(t) << '\n';
  }
  os.precision(old);
}

void WriteFrameScores(const std::filesystem::path& path,
                      const FrameScoreSequence& scores) {
  auto out = OpenOut(path);
  WriteFrameScores(out, scores);
}

}  // namespace collarscd
