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

// scd: command-line front end for the collarscd library.
//
//   scd loss --scores S --refs R [--objective collar] [--collar-frames K]
//   scd score --refs R --hyps H [--forgiveness 0.25]
//   scd detect --scores S|- [--threshold T] [--mode M] [--stream --lookahead L]
//   scd convert-rttm --rttm F [--max-gap 2.0]
//   scd experiment --config F [--out DIR]
//   scd sweep --config F --collars 1,2,3,6 [--out DIR]
//
// Exit codes: 0 success, 1 numeric or internal error, 2 usage or input error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "collarscd/detection.hpp"
#include "collarscd/error.hpp"
#include "collarscd/evaluation.hpp"
#include "collarscd/experiment.hpp"
#include "collarscd/io.hpp"
#include "collarscd/losses.hpp"

namespace {

using namespace collarscd;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

struct LossArgs {
  std::string scores;
  std::string refs;
  std::string objective = "collar";
  int collar_frames = 0;
  std::string semantics = "inclusive";
  std::string edge_policy = "clamp";
  bool grad = false;
};

struct ScoreArgs {
  std::string refs;
  std::string hyps;
  double forgiveness = 0.25;
};

struct DetectArgs {
  std::string scores;
  double threshold = 0.5;
  std::string mode = "local_maxima";
  double min_separation = 0.0;
  bool stream = false;
  std::size_t lookahead = 0;
};

struct ConvertArgs {
  std::string rttm;
  double max_gap = kDefaultMaxGap;
  std::string recording;
  std::string out;
};

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::vector<int> collars;
};

const std::map<std::string, CollarSemantics> kSemantics = {
    {"inclusive", CollarSemantics::kInclusive},
    {"strict", CollarSemantics::kStrict}};
const std::map<std::string, EdgePolicy> kEdgePolicies = {
    {"clamp", EdgePolicy::kClamp}, {"reject", EdgePolicy::kReject}};
const std::map<std::string, DetectorMode> kModes = {
    {"local_maxima", DetectorMode::kLocalMaxima},
    {"threshold_only", DetectorMode::kThresholdOnly}};

int RunLoss(const LossArgs& a) {
  const auto scores = ReadFrameScores(std::filesystem::path(a.scores));
  const auto refs = ToFrames(ReadChangePoints(std::filesystem::path(a.refs)),
                             scores.frame_shift());
  refs.CheckRange(scores.size());
  LossResult loss;
  if (a.objective == "bce") {
    loss = BceSparse(scores, refs);
  } else {
    const CollarConfig cfg{a.collar_frames, kSemantics.at(a.semantics),
                           kEdgePolicies.at(a.edge_policy)};
    loss = CollarLossEfficient(scores, refs, cfg);
  }
  std::printf("%.6f\n", loss.value);
  if (a.grad) {
    double sq = 0.0;
    for (double g : loss.grad->d_log_p0) sq += g * g;
    for (double g : loss.grad->d_log_p1) sq += g * g;
    std::printf("grad_norm=%.6f\n", std::sqrt(sq));
  }
  return kExitOk;
}

int RunScore(const ScoreArgs& a) {
  const auto refs = ReadChangePoints(std::filesystem::path(a.refs));
  const auto hyps = ReadChangePoints(std::filesystem::path(a.hyps));
  const auto m = MatchChangePoints(refs, hyps, a.forgiveness);
  const auto c = CountMatches(m);
  const auto p = PrecisionRecallF1(c);
  std::printf("P=%.6f R=%.6f F1=%.6f TP=%zu FP=%zu FN=%zu\n", p.precision,
              p.recall, p.f1, c.true_positives, c.false_positives,
              c.false_negatives);
  return kExitOk;
}

int RunDetect(const DetectArgs& a) {
  const DetectorConfig cfg{a.threshold, kModes.at(a.mode), a.min_separation};
  cfg.Validate();
  std::ifstream file;
  std::istream* in = &std::cin;
  if (a.scores != "-") {
    file.open(a.scores);
    if (!file) throw Error(ErrorKind::kIo, "cannot open " + a.scores);
    in = &file;
  }
  if (!a.stream) {
    WriteChangePoints(std::cout, DetectBatch(ReadFrameScores(*in), cfg));
    return kExitOk;
  }
  FrameScoreReader reader(*in);
  StreamingDetector detector(cfg, reader.frame_shift(), a.lookahead);
  std::size_t t = 0;
  for (double p = 0.0; reader.Next(&p); ++t) {
    p = std::clamp(p, 1e-12, 1.0 - 1e-12);
    if (auto hit = detector.Push(t, std::log1p(-p), std::log(p))) {
      std::cout << FormatTime(*hit) << std::endl;
    }
  }
  for (double hit : detector.Finish()) std::cout << FormatTime(hit) << '\n';
  std::cout.flush();
  return kExitOk;
}

int RunConvert(const ConvertArgs& a) {
  auto recordings = ReadRttm(std::filesystem::path(a.rttm));
  auto convert = [&](std::vector<SpeakerSegment> segs) {
    std::stable_sort(segs.begin(), segs.end(),
                     [](const SpeakerSegment& x, const SpeakerSegment& y) {
                       return x.start < y.start;
                     });
    return DiarizationToChangePoints(segs, a.max_gap);
  };
  if (!a.recording.empty()) {
    const auto it = recordings.find(a.recording);
    if (it == recordings.end()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "recording '" + a.recording + "' not in " + a.rttm);
    }
    recordings = {*it};
  }
  if (!a.out.empty()) {
    std::filesystem::create_directories(a.out);
    for (const auto& [id, segs] : recordings) {
      WriteChangePoints(std::filesystem::path(a.out) / (id + ".txt"),
                        convert(segs));
    }
    return kExitOk;
  }
  if (recordings.size() > 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "RTTM holds several recordings; pass --recording or --out");
  }
  if (!recordings.empty()) {
    WriteChangePoints(std::cout, convert(recordings.begin()->second));
  }
  return kExitOk;
}

int RunExperimentCmd(const ExperimentArgs& a) {
  const auto cfg = ReadExperimentConfig(std::filesystem::path(a.config));
  const auto report = RunExperiment(cfg);
  PrintExperimentTable(std::cout, report);
  if (!a.out.empty()) WriteExperimentReport(report, a.out);
  return kExitOk;
}

int RunSweepCmd(const ExperimentArgs& a) {
  const auto cfg = ReadExperimentConfig(std::filesystem::path(a.config));
  std::vector<CollarConfig> collars;
  for (int c : a.collars) {
    collars.push_back({c, cfg.collar.semantics, cfg.collar.edge_policy});
  }
  const auto report = CollarSweep(collars, cfg);
  PrintSweepTable(std::cout, report);
  if (!a.out.empty()) WriteSweepReport(report, a.out);
  return kExitOk;
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNumeric:
    case ErrorKind::kInternal:
      return kExitInternal;
    default:
      return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speaker change detection with collar-aware training"};
  app.require_subcommand(1);

  LossArgs loss;
  auto* loss_cmd = app.add_subcommand("loss", "Evaluate a training loss on a frame-score file");
  loss_cmd->add_option("--scores", loss.scores, "Frame-score file")->required()->check(CLI::ExistingFile);
  loss_cmd->add_option("--refs", loss.refs, "Reference change points (seconds)")->required()->check(CLI::ExistingFile);
  loss_cmd->add_option("--objective", loss.objective, "bce or collar")
      ->check(CLI::IsMember({"bce", "collar"}))->capture_default_str();
  loss_cmd->add_option("--collar-frames", loss.collar_frames, "Collar half-width in frames")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  loss_cmd->add_option("--semantics", loss.semantics, "inclusive or strict")
      ->check(CLI::IsMember({"inclusive", "strict"}))->capture_default_str();
  loss_cmd->add_option("--edge-policy", loss.edge_policy, "clamp or reject")
      ->check(CLI::IsMember({"clamp", "reject"}))->capture_default_str();
  loss_cmd->add_flag("--grad", loss.grad, "Also print the gradient L2 norm");

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Collar-matched precision, recall and F1");
  score_cmd->add_option("--refs", score.refs, "Reference change points")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--hyps", score.hyps, "Hypothesis change points")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--forgiveness", score.forgiveness, "Forgiveness collar in seconds")
      ->check(CLI::NonNegativeNumber)->capture_default_str();

  DetectArgs detect;
  auto* detect_cmd = app.add_subcommand("detect", "Turn frame scores into change points");
  detect_cmd->add_option("--scores", detect.scores, "Frame-score file, or - for stdin")->required();
  detect_cmd->add_option("--threshold", detect.threshold, "Boundary probability threshold")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  detect_cmd->add_option("--mode", detect.mode, "local_maxima or threshold_only")
      ->check(CLI::IsMember({"local_maxima", "threshold_only"}))->capture_default_str();
  detect_cmd->add_option("--min-separation", detect.min_separation, "Merge distance for local maxima (seconds)")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  detect_cmd->add_flag("--stream", detect.stream, "Emit decisions incrementally");
  detect_cmd->add_option("--lookahead", detect.lookahead, "Label delay in frames (streaming)")
      ->capture_default_str();

  ConvertArgs convert;
  auto* convert_cmd = app.add_subcommand("convert-rttm", "Diarization output to change points");
  convert_cmd->add_option("--rttm", convert.rttm, "RTTM file")->required()->check(CLI::ExistingFile);
  convert_cmd->add_option("--max-gap", convert.max_gap, "Largest gap between segments that still counts (seconds)")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  convert_cmd->add_option("--recording", convert.recording, "Only this recording id");
  convert_cmd->add_option("--out", convert.out, "Write <recording>.txt files here");

  ExperimentArgs experiment;
  auto* experiment_cmd = app.add_subcommand("experiment", "Train and compare objectives on synthetic data");
  experiment_cmd->add_option("--config", experiment.config, "key=value config file")->required()->check(CLI::ExistingFile);
  experiment_cmd->add_option("--out", experiment.out, "Report directory");

  ExperimentArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Train one collar-aware model per collar size");
  sweep_cmd->add_option("--config", sweep.config, "key=value config file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--collars", sweep.collars, "Collar sizes in frames")
      ->required()->delimiter(',')->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--out", sweep.out, "Report directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*loss_cmd) return RunLoss(loss);
    if (*score_cmd) return RunScore(score);
    if (*detect_cmd) return RunDetect(detect);
    if (*convert_cmd) return RunConvert(convert);
    if (*experiment_cmd) return RunExperimentCmd(experiment);
    if (*sweep_cmd) return RunSweepCmd(sweep);
  } catch (const Error& e) {
    std::cerr << "scd: " << ErrorKindName(e.kind()) << " error: " << e.what()
              << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "scd: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
