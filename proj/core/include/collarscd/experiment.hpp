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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "collarscd/detection.hpp"
#include "collarscd/evaluation.hpp"
#include "collarscd/model.hpp"
#include "collarscd/synth.hpp"
#include "collarscd/train.hpp"

namespace collarscd {

// Everything a seeded end-to-end run needs. Defaults are the reference
// desk-scale setup: 80 ms frames, boundaries annotated with +-3 frames of
// jitter, a 3-frame training collar.
struct ExperimentConfig {
  SynthConfig synth;
  ModelConfig model;
  std::uint64_t model_seed = 7;
  std::uint64_t train_seed = 11;
  double learning_rate = 0.05;
  std::size_t batch_size = 8;
  std::size_t epochs = 20;
  double max_grad_norm = 5.0;
  CollarConfig collar{3, CollarSemantics::kInclusive, EdgePolicy::kClamp};
  double neighborhood_radius_seconds = 0.05;
  DetectorMode detector_mode = DetectorMode::kLocalMaxima;
  double min_separation = 0.25;
  std::vector<double> forgiveness{0.25, 0.5};
  std::size_t peakiness_window = 4;
  bool include_standard = true;  // also train plain BCE with no expansion

  ExperimentConfig();
  void Validate() const;
  DetectorConfig detector() const;
};

// key=value lines; '#' starts a comment. Unknown keys and bad values throw
// kParse with the line number.
ExperimentConfig ParseExperimentConfig(std::istream& is);
ExperimentConfig ReadExperimentConfig(const std::filesystem::path& path);
void WriteExperimentConfig(std::ostream& os, const ExperimentConfig& cfg);

struct ModelEvaluation {
  std::string name;
  Objective objective = Objective::kCollarAware;
  int collar_frames = 0;
  std::vector<double> forgiveness;
  std::vector<double> thresholds;  // dev-tuned, one per forgiveness
  std::vector<PRPoint> test;       // one per forgiveness
  PeakinessReport peakiness;       // at the first forgiveness' threshold
  std::vector<PRPoint> pr_curve;   // test set, first forgiveness
  std::vector<double> loss_trace;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::size_t train_boundaries = 0;
  std::size_t train_frames = 0;
  std::size_t test_boundaries = 0;
  std::vector<ModelEvaluation> rows;

  const ModelEvaluation& row(const std::string& name) const;
};

// Runs the frame scorer over a split; references are the annotated times.
std::vector<ScoredSequence> ScoreSplit(const TinyModel& model,
                                       std::span<const SynthSequence> split,
                                       double frame_shift);

TrainConfig MakeTrainConfig(const ExperimentConfig& cfg, Objective objective,
                            const CollarConfig& collar, double radius_seconds);

// Trains one model and scores it: dev-tuned thresholds, test P/R/F1 at every
// forgiveness, peakiness around test annotations and the PR curve.
ModelEvaluation TrainAndEvaluate(const SynthCorpus& corpus,
                                 const ExperimentConfig& cfg,
                                 const std::string& name,
                                 const TrainConfig& train_cfg);

// Trains the neighborhood baseline, plain BCE (optional) and the collar-aware
// model on one generated corpus.
ExperimentReport RunExperiment(const ExperimentConfig& cfg);

// Writes report.txt, report.csv, config.txt, pr_<row>.csv, loss_<row>.csv and
// peakiness_<row>.csv into dir (created if missing).
void WriteExperimentReport(const ExperimentReport& report,
                           const std::filesystem::path& dir);
void PrintExperimentTable(std::ostream& os, const ExperimentReport& report);

struct SweepRow {
  std::string name;
  int collar_frames = -1;  // -1 for the neighborhood baseline
  double collar_seconds = 0.0;
  PRPoint test;            // at the first forgiveness
};

struct SweepReport {
  ExperimentConfig config;
  SweepRow neighborhood;
  std::vector<SweepRow> collars;
};

// One collar-aware model per collar (same corpus, same seeds) plus the
// neighborhood baseline.
SweepReport CollarSweep(const std::vector<CollarConfig>& collars,
                        const ExperimentConfig& cfg);

void PrintSweepTable(std::ostream& os, const SweepReport& report);
// sweep.txt and sweep.csv (name,collar_frames,collar_seconds,precision,
// recall,f1).
void WriteSweepReport(const SweepReport& report,
                      const std::filesystem::path& dir);

}  // namespace collarscd
