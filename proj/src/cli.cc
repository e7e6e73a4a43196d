// src/cli.cc

// Copyright 2026 The spkid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "spkid/cli.h"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "spkid/engine.h"
#include "spkid/features.h"
#include "spkid/synth.h"

namespace spkid {

int ExitCodeFor(ErrorCode code) { return kExitErrorBase + static_cast<int>(code); }

namespace {

enum class OutputFormat { kText, kRows };

struct PipelineOverrides {
  std::optional<double> frame_ms;
  std::optional<double> shift_ms;
  std::optional<int> mel_bins;
  std::optional<int> cepstra;
  std::optional<double> radius;
  std::optional<double> lambda;
  bool no_rbf = false;

  bool any() const {
    return frame_ms || shift_ms || mel_bins || cepstra || radius || lambda || no_rbf;
  }

  PipelineConfig Apply(int sample_rate) const {
    PipelineConfig c = PipelineConfig::ForSampleRate(sample_rate, frame_ms.value_or(25.0), shift_ms.value_or(10.0));
    if (mel_bins) c.mel_bins = *mel_bins;
    if (cepstra) c.cepstral_count = *cepstra;
    c.dct_norm_len = c.mel_bins;
    if (radius) c.cluster_radius = *radius;
    if (lambda) c.ridge_lambda = *lambda;
    c.train_rbf = !no_rbf;
    c.Validate();
    return c;
  }
};

struct Options {
  // enroll
  std::string speaker_id;
  std::vector<std::string> wavs;
  PipelineOverrides overrides;
  // identify / features
  std::string wav;
  std::string out_path;
  // shared
  std::string db_path;
  std::string mode = "distortion";
  OutputFormat format = OutputFormat::kText;
  // evaluate
  std::string manifest;
  // synth
  CorpusSpec corpus;
  std::string out_dir;
};

void PrintRanked(std::ostream &out, const IdentificationResult &r, OutputFormat format) {
  const auto ranked = r.Ranked();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  if (format == OutputFormat::kRows) {
    for (std::size_t i = 0; i < ranked.size(); ++i)
      out << ranked[i].speaker_id << '\t' << ranked[i].score << '\t' << (i + 1) << '\n';
    return;
  }
  out << "best: " << r.best_speaker << '\n'
      << "mode: " << DecisionModeName(r.mode) << '\n'
      << "margin: " << r.margin << '\n'
      << "rank\tspeaker\tscore\n";
  for (std::size_t i = 0; i < ranked.size(); ++i)
    out << (i + 1) << '\t' << ranked[i].speaker_id << '\t' << ranked[i].score << '\n';
}

int CmdEnroll(const Options &o, std::ostream &out) {
  // Read every recording before the database is touched.
  std::vector<AudioSignal> signals;
  for (const auto &p : o.wavs) signals.push_back(LoadWav(p));

  SpeakerDatabase db;
  if (std::filesystem::exists(o.db_path)) {
    if (o.overrides.any())
      throw Error(ErrorCode::kInvalidConfig,
                  "pipeline overrides only apply when creating a database; " + o.db_path + " exists");
    db = LoadDatabase(o.db_path);
  } else {
    db.config = o.overrides.Apply(signals.front().sample_rate);
  }
  db = Enroll(db, o.speaker_id, signals);
  SaveDatabase(db, o.db_path);

  const SpeakerModel &m = db.models.at(o.speaker_id);
  out << "enrolled " << o.speaker_id << ": " << m.centers.rows() << " centers from " << m.frame_count()
      << " frames (" << signals.size() << " recordings); database has " << db.size() << " speakers\n";
  return kExitOk;
}

int CmdIdentify(const Options &o, std::ostream &out) {
  const SpeakerDatabase db = LoadDatabase(o.db_path);
  if (db.empty()) throw Error(ErrorCode::kEmptyDatabase, o.db_path + " has no enrolled speakers");
  const IdentificationResult r = Identify(LoadWav(o.wav), db, ParseDecisionMode(o.mode));
  PrintRanked(out, r, o.format);
  return kExitOk;
}

int CmdList(const Options &o, std::ostream &out) {
  const SpeakerDatabase db = LoadDatabase(o.db_path);
  const PipelineConfig &c = db.config;
  out << "speakers: " << db.size() << '\n'
      << "sample_rate: " << c.sample_rate << " frame_len: " << c.frame_len << " frame_shift: " << c.frame_shift
      << " fft_size: " << c.fft_size << " mel_bins: " << c.mel_bins << " cepstra: " << c.cepstral_count
      << " radius: " << c.cluster_radius << " lambda: " << c.ridge_lambda
      << " rbf: " << (db.shared_rbf ? "yes" : "no") << '\n';
  for (const auto &[id, m] : db.models)
    out << id << '\t' << m.centers.rows() << " centers\t" << m.frame_count() << " frames\n";
  return kExitOk;
}

struct EvalOutcome {
  std::optional<IdentificationResult> result;
  std::string error;
};

int CmdEvaluate(const Options &o, std::ostream &out, std::ostream &err) {
  const auto entries = ReadManifest(o.manifest);
  const SpeakerDatabase db = LoadDatabase(o.db_path);
  if (db.empty()) throw Error(ErrorCode::kEmptyDatabase, o.db_path + " has no enrolled speakers");
  const DecisionMode mode = ParseDecisionMode(o.mode);

  std::vector<EvalOutcome> outcomes(entries.size());
  const auto n = static_cast<long>(entries.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      outcomes[i].result = Identify(LoadWav(entries[i].path), db, mode);
    } catch (const std::exception &e) {
      outcomes[i].error = e.what();
    }
  }

  std::size_t correct = 0, failed = 0, scored = 0;
  double margin_sum = 0.0;
  std::set<std::string> labels;
  for (const auto &[id, m] : db.models) labels.insert(id);
  std::map<std::string, std::map<std::string, int>> confusion;
  out << std::setprecision(6);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto &e = entries[i];
    labels.insert(e.speaker_id);
    if (!outcomes[i].result) {
      ++failed;
      err << "failed: " << e.path.string() << ": " << outcomes[i].error << '\n';
      if (o.format == OutputFormat::kRows) out << e.path.string() << '\t' << e.speaker_id << "\t-\t-\tfailed\n";
      continue;
    }
    const auto &r = *outcomes[i].result;
    ++scored;
    margin_sum += r.margin;
    ++confusion[e.speaker_id][r.best_speaker];
    const bool ok = r.best_speaker == e.speaker_id;
    correct += ok;
    if (o.format == OutputFormat::kRows)
      out << e.path.string() << '\t' << e.speaker_id << '\t' << r.best_speaker << '\t' << r.margin << '\t'
          << (ok ? "correct" : "wrong") << '\n';
  }
  const double accuracy = static_cast<double>(correct) / static_cast<double>(entries.size());
  const double mean_margin = scored ? margin_sum / static_cast<double>(scored) : 0.0;
  if (o.format == OutputFormat::kRows) {
    out << "#accuracy\t" << accuracy << '\n' << "#mean_margin\t" << mean_margin << '\n';
    return kExitOk;
  }
  out << "mode: " << DecisionModeName(mode) << '\n'
      << "entries: " << entries.size() << " correct: " << correct << " failed: " << failed << '\n'
      << "accuracy: " << accuracy << '\n'
      << "mean_margin: " << mean_margin << '\n'
      << "confusion (rows: true, columns: predicted)\n";
  for (const auto &l : labels) out << '\t' << l;
  out << '\n';
  for (const auto &t : labels) {
    out << t;
    for (const auto &p : labels) {
      int count = 0;
      if (auto row = confusion.find(t); row != confusion.end())
        if (auto cell = row->second.find(p); cell != row->second.end()) count = cell->second;
      out << '\t' << count;
    }
    out << '\n';
  }
  return kExitOk;
}

int CmdSynth(const Options &o, std::ostream &out) {
  const auto entries = WriteCorpus(o.corpus, o.out_dir);
  std::size_t enroll = 0;
  for (const auto &e : entries) enroll += e.enroll;
  out << "wrote " << entries.size() << " recordings for " << o.corpus.speakers << " speakers to " << o.out_dir
      << " (" << enroll << " enroll, " << entries.size() - enroll << " test)\n";
  return kExitOk;
}

int CmdFeatures(const Options &o, std::ostream &out) {
  const AudioSignal signal = LoadWav(o.wav);
  const PipelineConfig config =
      o.db_path.empty() ? o.overrides.Apply(signal.sample_rate) : LoadDatabase(o.db_path).config;
  const FeatureSequence features = ExtractFeatures(signal, config);
  if (o.out_path.empty()) {
    WriteFeatureDump(out, features);
    return kExitOk;
  }
  std::ofstream file(o.out_path, std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIoFailure, "cannot write " + o.out_path);
  WriteFeatureDump(file, features);
  if (!file.flush()) throw Error(ErrorCode::kIoFailure, "short write to " + o.out_path);
  return kExitOk;
}

void AddOverrides(CLI::App *cmd, PipelineOverrides &ov) {
  cmd->add_option("--frame-ms", ov.frame_ms, "Frame length in milliseconds (default 25)")->check(CLI::PositiveNumber);
  cmd->add_option("--shift-ms", ov.shift_ms, "Frame shift in milliseconds (default 10)")->check(CLI::PositiveNumber);
  cmd->add_option("--mel-bins", ov.mel_bins, "Number of mel filters (default 26)")->check(CLI::PositiveNumber);
  cmd->add_option("--cepstra", ov.cepstra, "Cepstral coefficients per frame (default 12)")->check(CLI::PositiveNumber);
  cmd->add_option("--radius", ov.radius, "Subtractive clustering radius (default 0.5)")->check(CLI::PositiveNumber);
  cmd->add_option("--lambda", ov.lambda, "Ridge penalty of the RBF output layer (default 1e-6)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--no-rbf", ov.no_rbf, "Skip training the RBF output layer");
}

void AddFormat(CLI::App *cmd, OutputFormat &format) {
  const std::map<std::string, OutputFormat> formats{{"text", OutputFormat::kText}, {"rows", OutputFormat::kRows}};
  cmd->add_option("--format", format, "Output format: text or rows")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Closed-set speaker identification with subtractive-clustering RBF models", "spkid"};
  app.require_subcommand(1, 1);
  Options o;

  auto *enroll = app.add_subcommand("enroll", "Enroll a speaker from one or more WAV recordings");
  enroll->add_option("speaker_id", o.speaker_id, "Speaker identifier")->required();
  enroll->add_option("wavs", o.wavs, "Enrollment recordings")->required();
  enroll->add_option("--db", o.db_path, "Database file (created if absent)")->required();
  AddOverrides(enroll, o.overrides);

  auto *identify = app.add_subcommand("identify", "Identify the speaker of a recording");
  identify->add_option("wav", o.wav, "Recording to identify")->required();
  identify->add_option("--db", o.db_path, "Database file")->required();
  identify->add_option("--mode", o.mode, "Decision rule")->check(CLI::IsMember({"distortion", "rbf-score"}));
  AddFormat(identify, o.format);

  auto *list = app.add_subcommand("list", "List enrolled speakers");
  list->add_option("--db", o.db_path, "Database file")->required();

  auto *evaluate = app.add_subcommand("evaluate", "Closed-set accuracy over a manifest of labelled recordings");
  evaluate->add_option("--manifest", o.manifest, "path<TAB>speaker_id per line")->required();
  evaluate->add_option("--db", o.db_path, "Database file")->required();
  evaluate->add_option("--mode", o.mode, "Decision rule")->check(CLI::IsMember({"distortion", "rbf-score"}));
  AddFormat(evaluate, o.format);

  auto *synth = app.add_subcommand("synth", "Generate a seeded synthetic corpus with enroll/test manifests");
  synth->add_option("--speakers", o.corpus.speakers, "Number of speakers")->check(CLI::PositiveNumber);
  synth->add_option("--utterances", o.corpus.utterances, "Utterances per speaker")->check(CLI::PositiveNumber);
  synth->add_option("--enroll", o.corpus.enroll_per_speaker, "Enrollment utterances per speaker")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", o.corpus.seed, "Generator seed");
  synth->add_option("--duration", o.corpus.synth.duration_s, "Utterance length in seconds")->check(CLI::Range(0.5, 60.0));
  synth->add_option("--out", o.out_dir, "Output directory")->required();

  auto *features = app.add_subcommand("features", "Dump MFCC features of a recording as CSV rows");
  features->add_option("wav", o.wav, "Recording")->required();
  features->add_option("--db", o.db_path, "Take the pipeline configuration from this database");
  features->add_option("--out", o.out_path, "Output file (default stdout)");
  AddOverrides(features, o.overrides);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int status = app.exit(e, out, err);
    return status == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*enroll) return CmdEnroll(o, out);
    if (*identify) return CmdIdentify(o, out);
    if (*list) return CmdList(o, out);
    if (*evaluate) return CmdEvaluate(o, out, err);
    if (*synth) return CmdSynth(o, out);
    if (*features) return CmdFeatures(o, out);
  } catch (const Error &e) {
    err << "spkid: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception &e) {
    err << "spkid: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace spkid
