// tests/engine_test.cc

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

#include <cstring>
#include <fstream>
#include <random>

#include "doctest.h"
#include "spkid/engine.h"
#include "spkid/error.h"
#include "spkid/synth.h"
#include "test_util.h"

namespace spkid {
namespace {

template <typename F>
ErrorCode CodeOf(F &&f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidConfig;
}

// Small corpus shared by several cases; built once.
const SynthCorpus &SmallCorpus() {
  static const SynthCorpus corpus = [] {
    CorpusSpec spec;
    spec.speakers = 3;
    spec.utterances = 3;
    spec.seed = 99;
    spec.synth.duration_s = 1.2;
    return GenerateCorpus(spec);
  }();
  return corpus;
}

SpeakerDatabase EnrollSmallCorpus(PipelineConfig config = {}) {
  const auto &corpus = SmallCorpus();
  SpeakerDatabase db;
  db.config = config;
  std::map<std::string, std::vector<AudioSignal>> by_speaker;
  for (std::size_t i = 0; i < corpus.entries.size(); ++i)
    if (corpus.entries[i].enroll) by_speaker[corpus.entries[i].speaker_id].push_back(corpus.signals[i]);
  for (const auto &[id, signals] : by_speaker) db = Enroll(db, id, signals);
  return db;
}

FeatureSequence Features(Matrix m) { return FeatureSequence{std::move(m), 0}; }

TEST_CASE("enrollment cardinality and duplicates") {
  const auto &corpus = SmallCorpus();
  SpeakerDatabase db;
  db = Enroll(db, "alice", std::span(&corpus.signals[0], 1));
  CHECK(db.size() == 1);
  REQUIRE(db.shared_rbf);
  CHECK(db.shared_rbf->num_outputs() == 1);
  CHECK(db.rbf_speaker_order == std::vector<std::string>{"alice"});
  const SpeakerModel &m = db.models.at("alice");
  CHECK(m.centers.rows() >= 1);
  CHECK(m.widths.size() == static_cast<std::size_t>(m.centers.rows()));
  CHECK(m.frame_count() > 0);

  CHECK(CodeOf([&] { Enroll(db, "alice", std::span(&corpus.signals[1], 1)); }) == ErrorCode::kDuplicateSpeaker);
  CHECK(CodeOf([&] { Enroll(db, "bob", {}); }) == ErrorCode::kEmptyData);
  AudioSignal slow = corpus.signals[1];
  slow.sample_rate = 8000;
  CHECK(CodeOf([&] { Enroll(db, "bob", std::span(&slow, 1)); }) == ErrorCode::kSampleRateMismatch);
  AudioSignal silent{std::vector<double>(16000, 0.0), 16000};
  CHECK(CodeOf([&] { Enroll(db, "bob", std::span(&silent, 1)); }) == ErrorCode::kAllSilent);
  // The failed calls left the input untouched.
  CHECK(db.size() == 1);
}

TEST_CASE("centers stay inside their own speaker's feature box") {
  std::mt19937_64 rng(51);
  SpeakerDatabase db;
  db.config.cepstral_count = 4;
  std::vector<EnrollmentRequest> reqs;
  reqs.push_back({"low", Features(testing::RandomMatrix(rng, 80, 4, -5.0, -3.0))});
  reqs.push_back({"high", Features(testing::RandomMatrix(rng, 80, 4, 3.0, 5.0))});
  db = EnrollFeatures(db, std::move(reqs));
  for (const auto &[id, m] : db.models) {
    const Matrix x = db.normalization.Apply(m.training_features);
    const Eigen::RowVectorXd lo = x.colwise().minCoeff(), hi = x.colwise().maxCoeff();
    for (Eigen::Index c = 0; c < m.centers.rows(); ++c) {
      CHECK((m.centers.row(c).array() >= lo.array()).all());
      CHECK((m.centers.row(c).array() <= hi.array()).all());
    }
  }
  const Matrix probe = testing::RandomMatrix(rng, 10, 4, 3.2, 4.8);
  CHECK(IdentifyFeatures(Features(probe), db).best_speaker == "high");
  CHECK(IdentifyFeatures(Features(probe), db, DecisionMode::kRbfScore).best_speaker == "high");
}

TEST_CASE("EnrollFeatures validation") {
  SpeakerDatabase db;
  db.config.cepstral_count = 3;
  std::vector<EnrollmentRequest> reqs;
  reqs.push_back({"a", Features(Matrix::Ones(4, 2))});
  CHECK(CodeOf([&] { EnrollFeatures(db, reqs); }) == ErrorCode::kDimensionMismatch);
  reqs = {{"a", Features(Matrix(0, 3))}};
  CHECK(CodeOf([&] { EnrollFeatures(db, reqs); }) == ErrorCode::kEmptyFeatures);
  reqs = {{"a", Features(Matrix::Ones(4, 3))}, {"a", Features(Matrix::Ones(4, 3))}};
  CHECK(CodeOf([&] { EnrollFeatures(db, reqs); }) == ErrorCode::kDuplicateSpeaker);
  reqs = {{"a", FeatureSequence{Matrix::Ones(4, 3), 12345}}};
  CHECK(CodeOf([&] { EnrollFeatures(db, reqs); }) == ErrorCode::kInvalidConfig);
}

TEST_CASE("DistortionDistance") {
  SpeakerModel model;
  model.centers = Matrix::Zero(1, 2);
  Matrix x(1, 2);
  x << 3.0, 4.0;
  CHECK(DistortionDistance(x, model) == 5.0);

  std::mt19937_64 rng(52);
  model.centers = testing::RandomMatrix(rng, 6, 3);
  Matrix on_centers(10, 3);
  for (Eigen::Index t = 0; t < 10; ++t) on_centers.row(t) = model.centers.row(t % 6);
  CHECK(DistortionDistance(on_centers, model) == 0.0);

  for (int trial = 0; trial < 50; ++trial) {
    model.centers = testing::RandomMatrix(rng, 1 + trial % 9, 3);
    const Matrix f = testing::RandomMatrix(rng, 1 + trial % 13, 3);
    double total = 0.0;
    for (Eigen::Index t = 0; t < f.rows(); ++t) {
      double best = 1e300;
      for (Eigen::Index i = 0; i < model.centers.rows(); ++i) {
        double s = 0.0;
        for (int d = 0; d < 3; ++d) s += (f(t, d) - model.centers(i, d)) * (f(t, d) - model.centers(i, d));
        best = std::min(best, std::sqrt(s));
      }
      total += best;
    }
    const double got = DistortionDistance(f, model);
    CHECK(got == doctest::Approx(total / f.rows()).epsilon(1e-12));
    // Zero only when every row sits on a center.
    CHECK(got > 1e-9);
  }

  CHECK(CodeOf([&] { DistortionDistance(Matrix(0, 3), model); }) == ErrorCode::kEmptyFeatures);
  CHECK(CodeOf([&] { DistortionDistance(Matrix::Zero(2, 2), model); }) == ErrorCode::kDimensionMismatch);
}

TEST_CASE("Decide") {
  std::vector<SpeakerScore> scores{{"a", 2.0}, {"b", 1.0}, {"c", 3.0}};
  auto r = Decide(scores, DecisionMode::kDistortion);
  CHECK(r.best_speaker == "b");
  CHECK(r.margin == 1.0);
  r = Decide(scores, DecisionMode::kRbfScore);
  CHECK(r.best_speaker == "c");
  CHECK(r.margin == 1.0);
  const auto ranked = r.Ranked();
  CHECK(ranked[0].speaker_id == "c");
  CHECK(ranked[2].speaker_id == "b");

  r = Decide({{"zed", 1.0}, {"amy", 1.0}}, DecisionMode::kDistortion);
  CHECK(r.best_speaker == "amy");
  CHECK(r.margin == 0.0);
  CHECK(Decide({{"solo", 7.0}}, DecisionMode::kRbfScore).margin == 0.0);
  CHECK(CodeOf([] { Decide({}, DecisionMode::kDistortion); }) == ErrorCode::kEmptyDatabase);

  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 10.0), scale(0.1, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SpeakerScore> s;
    for (int k = 0; k < 6; ++k) s.push_back({"s" + std::to_string(k), u(rng)});
    const std::string best = Decide(s, DecisionMode::kDistortion).best_speaker;
    const double shift = u(rng), a = scale(rng);
    for (auto &x : s) x.score = a * (x.score + shift);
    CHECK(Decide(s, DecisionMode::kDistortion).best_speaker == best);
  }
}

TEST_CASE("identification on a small synthetic corpus") {
  const SpeakerDatabase db = EnrollSmallCorpus();
  const auto &corpus = SmallCorpus();
  for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
    if (!corpus.entries[i].enroll) continue;
    const auto r = Identify(corpus.signals[i], db);
    CHECK(r.best_speaker == corpus.entries[i].speaker_id);
    CHECK(r.margin >= 0.0);
    CHECK(r.scores.size() == db.size());
    const auto again = Identify(corpus.signals[i], db);
    CHECK(again.best_speaker == r.best_speaker);
    for (std::size_t k = 0; k < r.scores.size(); ++k) CHECK(again.scores[k].score == r.scores[k].score);
  }
  for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
    const auto r = Identify(corpus.signals[i], db, DecisionMode::kRbfScore);
    CHECK(r.mode == DecisionMode::kRbfScore);
    CHECK(r.scores.size() == 3);
  }

  AudioSignal wrong_rate = corpus.signals[0];
  wrong_rate.sample_rate = 22050;
  CHECK(CodeOf([&] { Identify(wrong_rate, db); }) == ErrorCode::kSampleRateMismatch);
  AudioSignal silent{std::vector<double>(8000, 0.0), 16000};
  CHECK(CodeOf([&] { Identify(silent, db); }) == ErrorCode::kAllSilent);
  CHECK(CodeOf([&] { Identify(corpus.signals[0], SpeakerDatabase{}); }) == ErrorCode::kEmptyDatabase);
}

TEST_CASE("single-speaker database always answers that speaker") {
  const auto &corpus = SmallCorpus();
  SpeakerDatabase db = Enroll(SpeakerDatabase{}, "only", std::span(&corpus.signals[0], 1));
  for (const auto &s : corpus.signals) {
    CHECK(Identify(s, db).best_speaker == "only");
    CHECK(Identify(s, db, DecisionMode::kRbfScore).best_speaker == "only");
  }
}

TEST_CASE("rbf-score needs a trained output layer") {
  PipelineConfig config;
  config.train_rbf = false;
  const SpeakerDatabase db = EnrollSmallCorpus(config);
  CHECK(!db.shared_rbf);
  CHECK(CodeOf([&] { Identify(SmallCorpus().signals[0], db, DecisionMode::kRbfScore); }) == ErrorCode::kInvalidConfig);
}

TEST_CASE("database persistence") {
  testing::TempDir dir("db");
  const SpeakerDatabase db = EnrollSmallCorpus();
  SaveDatabase(db, dir / "db.bin");
  CHECK(!std::filesystem::exists(dir / "db.bin.tmp"));
  const SpeakerDatabase back = LoadDatabase(dir / "db.bin");

  CHECK(back.config == db.config);
  CHECK(back.normalization.min == db.normalization.min);
  CHECK(back.normalization.max == db.normalization.max);
  REQUIRE(back.size() == db.size());
  for (const auto &[id, m] : db.models) {
    const auto &n = back.models.at(id);
    CHECK(n.training_features == m.training_features);
    CHECK(n.centers == m.centers);
    CHECK(n.potentials == m.potentials);
    CHECK(n.widths == m.widths);
  }
  REQUIRE(back.shared_rbf);
  CHECK(back.shared_rbf->weights == db.shared_rbf->weights);
  CHECK(back.shared_rbf->bias == db.shared_rbf->bias);
  CHECK(back.rbf_speaker_order == db.rbf_speaker_order);
  CHECK(SerializeDatabase(back) == SerializeDatabase(db));

  for (auto mode : {DecisionMode::kDistortion, DecisionMode::kRbfScore}) {
    const auto a = Identify(SmallCorpus().signals[2], db, mode);
    const auto b = Identify(SmallCorpus().signals[2], back, mode);
    CHECK(a.best_speaker == b.best_speaker);
    for (std::size_t k = 0; k < a.scores.size(); ++k) CHECK(a.scores[k].score == b.scores[k].score);
  }
}

TEST_CASE("database load failures") {
  const auto bytes = SerializeDatabase(EnrollSmallCorpus());

  auto truncated = bytes;
  truncated.resize(bytes.size() / 2);
  CHECK(CodeOf([&] { DeserializeDatabase(truncated); }) == ErrorCode::kCorruptDatabase);
  truncated.resize(5);
  CHECK(CodeOf([&] { DeserializeDatabase(truncated); }) == ErrorCode::kCorruptDatabase);

  auto flipped = bytes;
  flipped[bytes.size() / 3] ^= std::byte{0x40};
  CHECK(CodeOf([&] { DeserializeDatabase(flipped); }) == ErrorCode::kCorruptDatabase);

  auto newer = bytes;
  newer[8] = static_cast<std::byte>(SpeakerDatabase::kFormatVersion + 1);
  CHECK(CodeOf([&] { DeserializeDatabase(newer); }) == ErrorCode::kVersionMismatch);

  auto magic = bytes;
  magic[0] = std::byte{'X'};
  CHECK(CodeOf([&] { DeserializeDatabase(magic); }) == ErrorCode::kCorruptDatabase);

  CHECK(CodeOf([] { LoadDatabase("/nonexistent/spkid.db"); }) == ErrorCode::kIoFailure);
}

TEST_CASE("decision mode names") {
  CHECK(ParseDecisionMode("distortion") == DecisionMode::kDistortion);
  CHECK(ParseDecisionMode(DecisionModeName(DecisionMode::kRbfScore)) == DecisionMode::kRbfScore);
  CHECK(CodeOf([] { ParseDecisionMode("gmm"); }) == ErrorCode::kInvalidConfig);
}

}  // namespace
}  // namespace spkid
