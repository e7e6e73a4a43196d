// include/spkid/engine.h

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

#ifndef SPKID_ENGINE_H_
#define SPKID_ENGINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spkid/audio_io.h"
#include "spkid/config.h"
#include "spkid/features.h"
#include "spkid/rbf.h"
#include "spkid/types.h"

namespace spkid {

// Per-dimension min-max scaling to [0, 1], fitted on all enrolled material.
struct Normalization {
  Vector min;
  Vector max;

  Eigen::Index dim() const { return min.size(); }
  Matrix Apply(const Matrix &features) const;

  static Normalization Fit(std::span<const Matrix *const> blocks);
};

struct SpeakerModel {
  std::string speaker_id;
  // Unnormalized enrollment features; kept so the model can be rebuilt when
  // another speaker changes the shared normalization.
  Matrix training_features;
  Matrix centers;  // K x D, normalized space
  std::vector<double> potentials;
  std::vector<double> widths;

  Eigen::Index frame_count() const { return training_features.rows(); }
};

struct SpeakerDatabase {
  static constexpr std::uint32_t kFormatVersion = 1;

  PipelineConfig config;
  std::map<std::string, SpeakerModel> models;  // ordered by speaker id
  Normalization normalization;
  // Shared output layer over the union of all speakers' centers, one output
  // per speaker in rbf_speaker_order.
  std::optional<RbfNetwork> shared_rbf;
  std::vector<std::string> rbf_speaker_order;

  bool empty() const { return models.empty(); }
  std::size_t size() const { return models.size(); }
  Eigen::Index feature_dim() const { return config.cepstral_count; }
};

enum class DecisionMode { kDistortion, kRbfScore };

std::string_view DecisionModeName(DecisionMode mode);
DecisionMode ParseDecisionMode(std::string_view name);

struct SpeakerScore {
  std::string speaker_id;
  double score = 0.0;
};

struct IdentificationResult {
  std::string best_speaker;
  std::vector<SpeakerScore> scores;  // one per enrolled speaker, by id
  DecisionMode mode = DecisionMode::kDistortion;
  // Gap between the best and runner-up score; 0 for a single speaker.
  double margin = 0.0;

  // Scores ordered best first. Ties keep the lexicographically smaller id
  // ahead.
  std::vector<SpeakerScore> Ranked() const;
};

struct EnrollmentRequest {
  std::string speaker_id;
  FeatureSequence features;
};

// Adds one speaker; returns the updated database. Throws kDuplicateSpeaker,
// kSampleRateMismatch or kAllSilent.
SpeakerDatabase Enroll(const SpeakerDatabase &db, const std::string &speaker_id,
                       std::span<const AudioSignal> signals);

// As Enroll, for several speakers with precomputed features. Normalization,
// clustering and the output layer are rebuilt once at the end.
SpeakerDatabase EnrollFeatures(const SpeakerDatabase &db,
                               std::vector<EnrollmentRequest> requests);

// Mean over frames of the Euclidean distance to the nearest model center.
// Features must already be normalized.
double DistortionDistance(const Matrix &normalized_features, const SpeakerModel &model);

IdentificationResult Identify(const AudioSignal &signal, const SpeakerDatabase &db,
                              DecisionMode mode = DecisionMode::kDistortion);
IdentificationResult IdentifyFeatures(const FeatureSequence &features, const SpeakerDatabase &db,
                                      DecisionMode mode = DecisionMode::kDistortion);

// Applies the decision rule to a per-speaker score vector: argmin for
// distortion, argmax for rbf-score.
IdentificationResult Decide(std::vector<SpeakerScore> scores, DecisionMode mode);

// Binary database file: magic, format version, little-endian payload, CRC-32.
std::vector<std::byte> SerializeDatabase(const SpeakerDatabase &db);
SpeakerDatabase DeserializeDatabase(std::span<const std::byte> bytes);
// Writes to a temporary sibling and renames over path.
void SaveDatabase(const SpeakerDatabase &db, const std::filesystem::path &path);
SpeakerDatabase LoadDatabase(const std::filesystem::path &path);

}  // namespace spkid

#endif  // SPKID_ENGINE_H_
