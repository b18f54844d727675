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

#include "collarscd/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "collarscd/error.hpp"
#include "collarscd/io.hpp"

namespace collarscd {

ExperimentConfig::ExperimentConfig() {
  synth.num_train = 400;
  synth.num_dev = 100;
  synth.num_test = 200;
  synth.frame_shift = 0.08;
  synth.boundary_rate = 0.01;
  synth.annotation_jitter_frames = 3;
  synth.min_boundary_spacing = 20;
  synth.feature_dim = 4;
  synth.speaker_signature_strength = 2.5;
  synth.noise_level = 0.5;
  synth.seed = 2022;
  model.feature_dim = synth.feature_dim;
}

void ExperimentConfig::Validate() const {
  synth.Validate();
  model.Validate();
  if (model.feature_dim != synth.feature_dim) {
    throw Error(ErrorKind::kInvalidConfig,
                "model and corpus feature dimensions differ");
  }
  collar.Validate();
  detector().Validate();
  if (forgiveness.empty()) {
    throw Error(ErrorKind::kInvalidConfig, "need at least one forgiveness");
  }
  for (double f : forgiveness) {
    if (!(f >= 0.0)) {
      throw Error(ErrorKind::kInvalidConfig, "forgiveness must be >= 0");
    }
  }
  if (peakiness_window < 1) {
    throw Error(ErrorKind::kInvalidConfig, "peakiness window must be >= 1");
  }
  TrainConfig probe = MakeTrainConfig(*this, Objective::kCollarAware, collar,
                                      neighborhood_radius_seconds);
  probe.Validate();
}

DetectorConfig ExperimentConfig::detector() const {
  return DetectorConfig{0.5, detector_mode, min_separation};
}

namespace {

std::string Lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string TrimCopy(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void BadValue(std::size_t line_no, const std::string& key,
                           const std::string& value) {
  throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) +
                                     ": bad value '" + value + "' for " + key);
}

std::uint64_t ParseUnsigned(const std::string& v, std::size_t line_no,
                            const std::string& key) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    BadValue(line_no, key, v);
  }
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    BadValue(line_no, key, v);
  }
}

int ParseInt(const std::string& v, std::size_t line_no, const std::string& key) {
  const bool neg = !v.empty() && v[0] == '-';
  const auto mag = ParseUnsigned(neg ? v.substr(1) : v, line_no, key);
  if (mag > 1'000'000) BadValue(line_no, key, v);
  return neg ? -static_cast<int>(mag) : static_cast<int>(mag);
}

bool ParseBool(const std::string& v, std::size_t line_no,
               const std::string& key) {
  const auto s = Lower(v);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  BadValue(line_no, key, v);
}

using Setter = std::function<void(ExperimentConfig&, const std::string&,
                                  std::size_t, const std::string&)>;

const std::map<std::string, Setter>& Setters() {
  auto dbl = [](double ExperimentConfig::*field) -> Setter {
    return [field](ExperimentConfig& c, const std::string& v, std::size_t l,
                   const std::string&) { c.*field = ParseDouble(v, l, "value"); };
  };
  auto sz = [](std::size_t ExperimentConfig::*field) -> Setter {
    return [field](ExperimentConfig& c, const std::string& v, std::size_t l,
                   const std::string& k) { c.*field = ParseUnsigned(v, l, k); };
  };
  static const std::map<std::string, Setter> setters = {
      {"seed", [](auto& c, auto& v, auto l, auto& k) { c.synth.seed = ParseUnsigned(v, l, k); }},
      {"model_seed", [](auto& c, auto& v, auto l, auto& k) { c.model_seed = ParseUnsigned(v, l, k); }},
      {"train_seed", [](auto& c, auto& v, auto l, auto& k) { c.train_seed = ParseUnsigned(v, l, k); }},
      {"num_train", [](auto& c, auto& v, auto l, auto& k) { c.synth.num_train = ParseUnsigned(v, l, k); }},
      {"num_dev", [](auto& c, auto& v, auto l, auto& k) { c.synth.num_dev = ParseUnsigned(v, l, k); }},
      {"num_test", [](auto& c, auto& v, auto l, auto& k) { c.synth.num_test = ParseUnsigned(v, l, k); }},
      {"frame_shift", [](auto& c, auto& v, auto l, auto&) { c.synth.frame_shift = ParseDouble(v, l, "frame_shift"); }},
      {"min_seconds", [](auto& c, auto& v, auto l, auto&) { c.synth.min_seconds = ParseDouble(v, l, "min_seconds"); }},
      {"max_seconds", [](auto& c, auto& v, auto l, auto&) { c.synth.max_seconds = ParseDouble(v, l, "max_seconds"); }},
      {"boundary_rate", [](auto& c, auto& v, auto l, auto&) { c.synth.boundary_rate = ParseDouble(v, l, "boundary_rate"); }},
      {"annotation_jitter_frames", [](auto& c, auto& v, auto l, auto& k) { c.synth.annotation_jitter_frames = ParseInt(v, l, k); }},
      {"min_boundary_spacing", [](auto& c, auto& v, auto l, auto& k) { c.synth.min_boundary_spacing = ParseUnsigned(v, l, k); }},
      {"feature_dim", [](auto& c, auto& v, auto l, auto& k) {
         c.synth.feature_dim = ParseUnsigned(v, l, k);
         c.model.feature_dim = c.synth.feature_dim;
       }},
      {"speaker_signature_strength", [](auto& c, auto& v, auto l, auto&) { c.synth.speaker_signature_strength = ParseDouble(v, l, "strength"); }},
      {"noise_level", [](auto& c, auto& v, auto l, auto&) { c.synth.noise_level = ParseDouble(v, l, "noise_level"); }},
      {"past_frames", [](auto& c, auto& v, auto l, auto& k) { c.model.past_frames = ParseUnsigned(v, l, k); }},
      {"future_frames", [](auto& c, auto& v, auto l, auto& k) { c.model.future_frames = ParseUnsigned(v, l, k); }},
      {"hidden", [](auto& c, auto& v, auto l, auto& k) { c.model.hidden = ParseUnsigned(v, l, k); }},
      {"learning_rate", dbl(&ExperimentConfig::learning_rate)},
      {"batch_size", sz(&ExperimentConfig::batch_size)},
      {"epochs", sz(&ExperimentConfig::epochs)},
      {"max_grad_norm", dbl(&ExperimentConfig::max_grad_norm)},
      {"collar_frames", [](auto& c, auto& v, auto l, auto& k) { c.collar.collar_frames = ParseInt(v, l, k); }},
      {"collar_semantics", [](auto& c, auto& v, auto l, auto& k) {
         const auto s = Lower(v);
         if (s == "inclusive") c.collar.semantics = CollarSemantics::kInclusive;
         else if (s == "strict") c.collar.semantics = CollarSemantics::kStrict;
         else BadValue(l, k, v);
       }},
      {"edge_policy", [](auto& c, auto& v, auto l, auto& k) {
         const auto s = Lower(v);
         if (s == "clamp") c.collar.edge_policy = EdgePolicy::kClamp;
         else if (s == "reject") c.collar.edge_policy = EdgePolicy::kReject;
         else BadValue(l, k, v);
       }},
      {"neighborhood_radius", dbl(&ExperimentConfig::neighborhood_radius_seconds)},
      {"detector_mode", [](auto& c, auto& v, auto l, auto& k) {
         const auto s = Lower(v);
         if (s == "local_maxima") c.detector_mode = DetectorMode::kLocalMaxima;
         else if (s == "threshold_only") c.detector_mode = DetectorMode::kThresholdOnly;
         else BadValue(l, k, v);
       }},
      {"min_separation", dbl(&ExperimentConfig::min_separation)},
      {"forgiveness", [](auto& c, auto& v, auto l, auto&) {
         std::vector<double> values;
         std::stringstream ss(v);
         for (std::string item; std::getline(ss, item, ',');) {
           values.push_back(ParseDouble(item, l, "forgiveness"));
         }
         c.forgiveness = std::move(values);
       }},
      {"peakiness_window", sz(&ExperimentConfig::peakiness_window)},
      {"include_standard", [](auto& c, auto& v, auto l, auto& k) { c.include_standard = ParseBool(v, l, k); }},
  };
  return setters;
}

const char* ModeName(DetectorMode m) {
  return m == DetectorMode::kLocalMaxima ? "local_maxima" : "threshold_only";
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::ofstream OpenReportFile(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  return out;
}

}  // namespace

ExperimentConfig ParseExperimentConfig(std::istream& is) {
  ExperimentConfig cfg;
  const auto& setters = Setters();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = TrimCopy(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kParse,
                  "line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = TrimCopy(line.substr(0, eq));
    const auto value = TrimCopy(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) +
                                         ": unknown key '" + key + "'");
    }
    it->second(cfg, value, line_no, key);
  }
  cfg.Validate();
  return cfg;
}

ExperimentConfig ReadExperimentConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return ParseExperimentConfig(in);
}

void WriteExperimentConfig(std::ostream& os, const ExperimentConfig& c) {
  os << "seed=" << c.synth.seed << '\n'
     << "model_seed=" << c.model_seed << '\n'
     << "train_seed=" << c.train_seed << '\n'
     << "num_train=" << c.synth.num_train << '\n'
     << "num_dev=" << c.synth.num_dev << '\n'
     << "num_test=" << c.synth.num_test << '\n'
     << "frame_shift=" << c.synth.frame_shift << '\n'
     << "min_seconds=" << c.synth.min_seconds << '\n'
     << "max_seconds=" << c.synth.max_seconds << '\n'
     << "boundary_rate=" << c.synth.boundary_rate << '\n'
     << "annotation_jitter_frames=" << c.synth.annotation_jitter_frames << '\n'
     << "min_boundary_spacing=" << c.synth.min_boundary_spacing << '\n'
     << "feature_dim=" << c.synth.feature_dim << '\n'
     << "speaker_signature_strength=" << c.synth.speaker_signature_strength
     << '\n'
     << "noise_level=" << c.synth.noise_level << '\n'
     << "past_frames=" << c.model.past_frames << '\n'
     << "future_frames=" << c.model.future_frames << '\n'
     << "hidden=" << c.model.hidden << '\n'
     << "learning_rate=" << c.learning_rate << '\n'
     << "batch_size=" << c.batch_size << '\n'
     << "epochs=" << c.epochs << '\n'
     << "max_grad_norm=" << c.max_grad_norm << '\n'
     << "collar_frames=" << c.collar.collar_frames << '\n'
     << "collar_semantics="
     << (c.collar.semantics == CollarSemantics::kInclusive ? "inclusive"
                                                           : "strict")
     << '\n'
     << "edge_policy="
     << (c.collar.edge_policy == EdgePolicy::kClamp ? "clamp" : "reject")
     << '\n'
     << "neighborhood_radius=" << c.neighborhood_radius_seconds << '\n'
     << "detector_mode=" << ModeName(c.detector_mode) << '\n'
     << "min_separation=" << c.min_separation << '\n'
     << "forgiveness=";
  for (std::size_t i = 0; i < c.forgiveness.size(); ++i) {
    os << (i ? "," : "") << c.forgiveness[i];
  }
  os << '\n'
     << "peakiness_window=" << c.peakiness_window << '\n'
     << "include_standard=" << (c.include_standard ? "true" : "false") << '\n';
}

const ModelEvaluation& ExperimentReport::row(const std::string& name) const {
  for (const auto& r : rows) {
    if (r.name == name) return r;
  }
  throw Error(ErrorKind::kInvalidArgument, "no report row '" + name + "'");
}

std::vector<ScoredSequence> ScoreSplit(const TinyModel& model,
                                       std::span<const SynthSequence> split,
                                       double frame_shift) {
  std::vector<ScoredSequence> out;
  out.reserve(split.size());
  for (const auto& seq : split) {
    out.push_back({FrameScoreSequence::FromLogits(model.Forward(seq), frame_shift),
                   ToTimes(seq.annotated, frame_shift)});
  }
  return out;
}

TrainConfig MakeTrainConfig(const ExperimentConfig& cfg, Objective objective,
                            const CollarConfig& collar, double radius_seconds) {
  TrainConfig t;
  t.objective = objective;
  t.collar = collar;
  t.neighborhood_radius_seconds = radius_seconds;
  t.learning_rate = cfg.learning_rate;
  t.batch_size = cfg.batch_size;
  t.epochs = cfg.epochs;
  t.max_grad_norm = cfg.max_grad_norm;
  t.seed = cfg.train_seed;
  return t;
}

ModelEvaluation TrainAndEvaluate(const SynthCorpus& corpus,
                                 const ExperimentConfig& cfg,
                                 const std::string& name,
                                 const TrainConfig& train_cfg) {
  const double shift = corpus.config.frame_shift;
  const double prior = std::min(0.5, corpus.config.boundary_rate);
  auto trained = Train(TinyModel(cfg.model, cfg.model_seed, prior),
                       corpus.train, shift, train_cfg);

  ModelEvaluation eval;
  eval.name = name;
  eval.objective = train_cfg.objective;
  eval.collar_frames = train_cfg.objective == Objective::kCollarAware
                           ? train_cfg.collar.collar_frames
                           : 0;
  eval.forgiveness = cfg.forgiveness;
  eval.loss_trace = std::move(trained.loss_trace);

  const auto dev = ScoreSplit(trained.model, corpus.dev, shift);
  const auto test = ScoreSplit(trained.model, corpus.test, shift);
  DetectorConfig det = cfg.detector();
  for (double f : cfg.forgiveness) {
    det.threshold = corpus.dev.empty() ? 0.5 : TuneThreshold(dev, det, f);
    eval.thresholds.push_back(det.threshold);
    eval.test.push_back(Evaluate(test, det, f));
  }
  det.threshold = eval.thresholds.front();
  for (std::size_t i = 0; i < test.size(); ++i) {
    eval.peakiness.Merge(Peakiness(test[i].scores, corpus.test[i].annotated,
                                   det, cfg.peakiness_window));
  }
  if (!test.empty()) {
    eval.pr_curve = PrCurve(test, det, cfg.forgiveness.front());
  }
  return eval;
}

ExperimentReport RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  const auto corpus = GenerateCorpus(cfg.synth);
  ExperimentReport report;
  report.config = cfg;
  report.train_boundaries = CountAnnotatedBoundaries(corpus.train);
  report.train_frames = CountFrames(corpus.train);
  report.test_boundaries = CountAnnotatedBoundaries(corpus.test);

  report.rows.push_back(TrainAndEvaluate(
      corpus, cfg, "neighborhood",
      MakeTrainConfig(cfg, Objective::kStandardNeighborhood, cfg.collar,
                      cfg.neighborhood_radius_seconds)));
  if (cfg.include_standard) {
    report.rows.push_back(TrainAndEvaluate(
        corpus, cfg, "standard",
        MakeTrainConfig(cfg, Objective::kStandardNeighborhood, cfg.collar,
                        0.0)));
  }
  report.rows.push_back(TrainAndEvaluate(
      corpus, cfg, "collar",
      MakeTrainConfig(cfg, Objective::kCollarAware, cfg.collar,
                      cfg.neighborhood_radius_seconds)));
  return report;
}

void PrintExperimentTable(std::ostream& os, const ExperimentReport& report) {
  const auto& fg = report.config.forgiveness;
  os << "train: " << report.train_frames << " frames, "
     << report.train_boundaries << " boundaries; test: "
     << report.test_boundaries << " boundaries\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-14s", "model");
  os << buf;
  for (double f : fg) {
    std::snprintf(buf, sizeof buf, " | %-28s", ("collar=" + Fixed(f, 2) + "s  P / R / F1").c_str());
    os << buf;
  }
  os << " | peak  | loss\n";
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%-14s", r.name.c_str());
    os << buf;
    for (std::size_t i = 0; i < r.test.size(); ++i) {
      std::snprintf(buf, sizeof buf, " | %.3f / %.3f / %.3f (t=%.3f)",
                    r.test[i].precision, r.test[i].recall, r.test[i].f1,
                    r.thresholds[i]);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, " | %5.2f | %.4f\n",
                  r.peakiness.mean_active_frames_per_detection(),
                  r.loss_trace.empty() ? 0.0 : r.loss_trace.back());
    os << buf;
  }
}

void WriteExperimentReport(const ExperimentReport& report,
                           const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = OpenReportFile(dir / "report.txt");
    PrintExperimentTable(out, report);
  }
  {
    auto out = OpenReportFile(dir / "config.txt");
    WriteExperimentConfig(out, report.config);
  }
  auto csv = OpenReportFile(dir / "report.csv");
  csv << "model,objective,collar_frames,forgiveness,threshold,precision,"
         "recall,f1,peakiness_mean,final_loss\n";
  csv.precision(10);
  for (const auto& r : report.rows) {
    for (std::size_t i = 0; i < r.test.size(); ++i) {
      csv << r.name << ',' << ObjectiveName(r.objective) << ','
          << r.collar_frames << ',' << r.forgiveness[i] << ','
          << r.thresholds[i] << ',' << r.test[i].precision << ','
          << r.test[i].recall << ',' << r.test[i].f1 << ','
          << r.peakiness.mean_active_frames_per_detection() << ','
          << (r.loss_trace.empty() ? 0.0 : r.loss_trace.back()) << '\n';
    }
    {
      auto pr = OpenReportFile(dir / ("pr_" + r.name + ".csv"));
      WritePrCurveCsv(pr, r.pr_curve);
    }
    {
      auto loss = OpenReportFile(dir / ("loss_" + r.name + ".csv"));
      loss << "epoch,loss\n";
      loss.precision(12);
      for (std::size_t e = 0; e < r.loss_trace.size(); ++e) {
        loss << e + 1 << ',' << r.loss_trace[e] << '\n';
      }
    }
    auto peak = OpenReportFile(dir / ("peakiness_" + r.name + ".csv"));
    peak << "run_length,count\n";
    for (const auto& [len, count] : r.peakiness.run_length_histogram) {
      peak << len << ',' << count << '\n';
    }
  }
}

SweepReport CollarSweep(const std::vector<CollarConfig>& collars,
                        const ExperimentConfig& cfg) {
  cfg.Validate();
  for (const auto& c : collars) c.Validate();
  const auto corpus = GenerateCorpus(cfg.synth);
  const double shift = cfg.synth.frame_shift;
  SweepReport report;
  report.config = cfg;

  const auto base = TrainAndEvaluate(
      corpus, cfg, "neighborhood",
      MakeTrainConfig(cfg, Objective::kStandardNeighborhood, cfg.collar,
                      cfg.neighborhood_radius_seconds));
  report.neighborhood = {base.name, -1, 0.0, base.test.front()};
  for (const auto& c : collars) {
    const auto name = "collar_" + std::to_string(c.collar_frames);
    const auto eval = TrainAndEvaluate(
        corpus, cfg, name,
        MakeTrainConfig(cfg, Objective::kCollarAware, c,
                        cfg.neighborhood_radius_seconds));
    report.collars.push_back(
        {name, c.collar_frames, c.collar_frames * shift, eval.test.front()});
  }
  return report;
}

void PrintSweepTable(std::ostream& os, const SweepReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-14s %8s %9s %7s %7s %7s\n", "model",
                "frames", "seconds", "P", "R", "F1");
  os << buf;
  auto line = [&](const SweepRow& r) {
    std::snprintf(buf, sizeof buf, "%-14s %8s %9s %7.3f %7.3f %7.3f\n",
                  r.name.c_str(),
                  r.collar_frames < 0 ? "-" : std::to_string(r.collar_frames).c_str(),
                  r.collar_frames < 0 ? "-" : Fixed(r.collar_seconds, 3).c_str(),
                  r.test.precision, r.test.recall, r.test.f1);
    os << buf;
  };
  line(report.neighborhood);
  for (const auto& r : report.collars) line(r);
}

void WriteSweepReport(const SweepReport& report,
                      const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = OpenReportFile(dir / "sweep.txt");
    PrintSweepTable(out, report);
  }
  {
    auto out = OpenReportFile(dir / "config.txt");
    WriteExperimentConfig(out, report.config);
  }
  auto csv = OpenReportFile(dir / "sweep.csv");
  csv << "name,collar_frames,collar_seconds,precision,recall,f1\n";
  csv.precision(10);
  auto line = [&](const SweepRow& r) {
    csv << r.name << ',' << r.collar_frames << ',' << r.collar_seconds << ','
        << r.test.precision << ',' << r.test.recall << ',' << r.test.f1
        << '\n';
  };
  line(report.neighborhood);
  for (const auto& r : report.collars) line(r);
}

}  // namespace collarscd
