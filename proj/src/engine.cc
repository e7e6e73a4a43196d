// src/engine.cc

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

#include "spkid/engine.h"

#include <algorithm>
#include <cmath>

#include "spkid/error.h"
#include "spkid/kernels.h"
#include "spkid/subclust.h"

namespace spkid {

Normalization Normalization::Fit(std::span<const Matrix *const> blocks) {
  Normalization n;
  for (const Matrix *block : blocks) {
    if (block->rows() == 0) continue;
    if (n.min.size() == 0) {
      n.min = block->colwise().minCoeff().transpose();
      n.max = block->colwise().maxCoeff().transpose();
      continue;
    }
    if (block->cols() != n.min.size())
      throw Error(ErrorCode::kDimensionMismatch, "feature blocks differ in dimension");
    n.min = n.min.cwiseMin(block->colwise().minCoeff().transpose());
    n.max = n.max.cwiseMax(block->colwise().maxCoeff().transpose());
  }
  if (n.min.size() == 0) throw Error(ErrorCode::kEmptyFeatures, "no material to normalize");
  return n;
}

Matrix Normalization::Apply(const Matrix &features) const {
  if (features.cols() != min.size())
    throw Error(ErrorCode::kDimensionMismatch, "feature dimension " + std::to_string(features.cols()) +
                                                   " differs from normalization " + std::to_string(min.size()));
  Matrix out(features.rows(), features.cols());
  for (Eigen::Index d = 0; d < features.cols(); ++d) {
    const double range = max(d) - min(d);
    // A constant dimension carries no information; leave it unscaled.
    const double scale = range > 0.0 ? 1.0 / range : 1.0;
    out.col(d) = (features.col(d).array() - min(d)) * scale;
  }
  return out;
}

std::string_view DecisionModeName(DecisionMode mode) {
  return mode == DecisionMode::kDistortion ? "distortion" : "rbf-score";
}

DecisionMode ParseDecisionMode(std::string_view name) {
  if (name == "distortion") return DecisionMode::kDistortion;
  if (name == "rbf-score") return DecisionMode::kRbfScore;
  throw Error(ErrorCode::kInvalidConfig, "unknown decision mode '" + std::string(name) + "'");
}

namespace {

// Best-first ordering: lower distortion or higher RBF output wins; equal
// scores fall back to speaker id.
bool Better(const SpeakerScore &a, const SpeakerScore &b, DecisionMode mode) {
  if (a.score != b.score)
    return mode == DecisionMode::kDistortion ? a.score < b.score : a.score > b.score;
  return a.speaker_id < b.speaker_id;
}

// Re-derives everything that depends on the full set of enrolled speakers:
// normalization, each speaker's centers and widths, and the shared output
// layer.
void Rebuild(SpeakerDatabase &db) {
  std::vector<const Matrix *> blocks;
  for (const auto &[id, model] : db.models) blocks.push_back(&model.training_features);
  db.normalization = Normalization::Fit(blocks);

  const PipelineConfig &cfg = db.config;
  SubclustOptions options;
  options.radius = cfg.cluster_radius;
  options.accept_ratio = cfg.accept_ratio;
  options.reject_ratio = cfg.reject_ratio;

  std::vector<Matrix> normalized;
  normalized.reserve(db.models.size());
  Eigen::Index total_centers = 0, total_frames = 0;
  for (auto &[id, model] : db.models) {
    normalized.push_back(db.normalization.Apply(model.training_features));
    ClusterResult clusters = SubtractiveCluster(normalized.back(), options);
    model.widths = EstimateWidths(clusters, cfg.width_spread);
    model.centers = std::move(clusters.centers);
    model.potentials = std::move(clusters.potentials);
    total_centers += model.centers.rows();
    total_frames += model.training_features.rows();
  }

  db.shared_rbf.reset();
  db.rbf_speaker_order.clear();
  if (!cfg.train_rbf) return;

  const Eigen::Index dim = db.normalization.dim();
  const auto num_speakers = static_cast<Eigen::Index>(db.models.size());
  RbfNetwork net;
  net.centers.resize(total_centers, dim);
  Matrix inputs(total_frames, dim);
  Matrix targets = Matrix::Zero(total_frames, num_speakers);
  Eigen::Index c_row = 0, t_row = 0, speaker = 0;
  for (const auto &[id, model] : db.models) {
    net.centers.middleRows(c_row, model.centers.rows()) = model.centers;
    net.widths.insert(net.widths.end(), model.widths.begin(), model.widths.end());
    c_row += model.centers.rows();
    const Matrix &x = normalized[speaker];
    inputs.middleRows(t_row, x.rows()) = x;
    targets.block(t_row, speaker, x.rows(), 1).setOnes();
    t_row += x.rows();
    db.rbf_speaker_order.push_back(id);
    ++speaker;
  }
  const Matrix design = kernels::GaussianDesign(inputs, net.centers, net.widths);
  OutputLayer layer = FitWeights(design, targets, cfg.ridge_lambda);
  net.weights = std::move(layer.weights);
  net.bias = std::move(layer.bias);
  db.shared_rbf = std::move(net);
}

}  // namespace

std::vector<SpeakerScore> IdentificationResult::Ranked() const {
  std::vector<SpeakerScore> ranked = scores;
  std::sort(ranked.begin(), ranked.end(),
            [this](const SpeakerScore &a, const SpeakerScore &b) { return Better(a, b, mode); });
  return ranked;
}

IdentificationResult Decide(std::vector<SpeakerScore> scores, DecisionMode mode) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyDatabase, "no speakers to choose from");
  IdentificationResult result;
  result.mode = mode;
  result.scores = std::move(scores);
  const auto ranked = result.Ranked();
  result.best_speaker = ranked.front().speaker_id;
  result.margin = ranked.size() > 1 ? std::abs(ranked[1].score - ranked[0].score) : 0.0;
  return result;
}

SpeakerDatabase EnrollFeatures(const SpeakerDatabase &db, std::vector<EnrollmentRequest> requests) {
  db.config.Validate();
  SpeakerDatabase next = db;
  const std::uint64_t fingerprint = db.config.Fingerprint();
  for (auto &req : requests) {
    if (req.speaker_id.empty()) throw Error(ErrorCode::kInvalidConfig, "speaker id must not be empty");
    if (next.models.contains(req.speaker_id))
      throw Error(ErrorCode::kDuplicateSpeaker, "speaker '" + req.speaker_id + "' is already enrolled");
    if (req.features.num_frames() == 0)
      throw Error(ErrorCode::kEmptyFeatures, "no enrollment frames for '" + req.speaker_id + "'");
    if (req.features.dim() != db.feature_dim())
      throw Error(ErrorCode::kDimensionMismatch, "features for '" + req.speaker_id + "' have dimension " +
                                                     std::to_string(req.features.dim()));
    if (req.features.config_fingerprint != 0 && req.features.config_fingerprint != fingerprint)
      throw Error(ErrorCode::kInvalidConfig, "features for '" + req.speaker_id +
                                                 "' were extracted with a different pipeline configuration");
    if (!req.features.vectors.allFinite())
      throw Error(ErrorCode::kEmptyFeatures, "non-finite features for '" + req.speaker_id + "'");
    SpeakerModel model;
    model.speaker_id = req.speaker_id;
    model.training_features = std::move(req.features.vectors);
    next.models.emplace(req.speaker_id, std::move(model));
  }
  Rebuild(next);
  return next;
}

SpeakerDatabase Enroll(const SpeakerDatabase &db, const std::string &speaker_id,
                       std::span<const AudioSignal> signals) {
  if (db.models.contains(speaker_id))
    throw Error(ErrorCode::kDuplicateSpeaker, "speaker '" + speaker_id + "' is already enrolled");
  if (signals.empty()) throw Error(ErrorCode::kEmptyData, "no enrollment recordings for '" + speaker_id + "'");
  for (const auto &s : signals)
    if (s.sample_rate != db.config.sample_rate)
      throw Error(ErrorCode::kSampleRateMismatch, "recording is " + std::to_string(s.sample_rate) +
                                                      " Hz, database expects " +
                                                      std::to_string(db.config.sample_rate) + " Hz");

  std::vector<Matrix> parts;
  Eigen::Index rows = 0;
  for (const auto &s : signals) {
    parts.push_back(ExtractFeatures(s, db.config).vectors);
    rows += parts.back().rows();
  }
  EnrollmentRequest req;
  req.speaker_id = speaker_id;
  req.features.config_fingerprint = db.config.Fingerprint();
  req.features.vectors.resize(rows, db.feature_dim());
  Eigen::Index at = 0;
  for (const auto &p : parts) {
    req.features.vectors.middleRows(at, p.rows()) = p;
    at += p.rows();
  }
  std::vector<EnrollmentRequest> reqs;
  reqs.push_back(std::move(req));
  return EnrollFeatures(db, std::move(reqs));
}

double DistortionDistance(const Matrix &normalized_features, const SpeakerModel &model) {
  if (normalized_features.rows() == 0) throw Error(ErrorCode::kEmptyFeatures, "no feature vectors");
  if (normalized_features.cols() != model.centers.cols())
    throw Error(ErrorCode::kDimensionMismatch, "features and model centers differ in dimension");
  const auto distances = kernels::NearestCenterDistances(normalized_features, model.centers);
  double sum = 0.0;
  for (double d : distances) sum += d;
  return sum / static_cast<double>(distances.size());
}

IdentificationResult IdentifyFeatures(const FeatureSequence &features, const SpeakerDatabase &db,
                                      DecisionMode mode) {
  if (db.empty()) throw Error(ErrorCode::kEmptyDatabase, "no speakers enrolled");
  if (features.num_frames() == 0) throw Error(ErrorCode::kEmptyFeatures, "no feature vectors");
  const Matrix normalized = db.normalization.Apply(features.vectors);

  std::vector<SpeakerScore> scores;
  scores.reserve(db.size());
  if (mode == DecisionMode::kDistortion) {
    for (const auto &[id, model] : db.models) scores.push_back({id, DistortionDistance(normalized, model)});
    return Decide(std::move(scores), mode);
  }

  if (!db.shared_rbf)
    throw Error(ErrorCode::kInvalidConfig, "database was built without an RBF output layer");
  const RbfNetwork &net = *db.shared_rbf;
  const Matrix design = kernels::GaussianDesign(normalized, net.centers, net.widths);
  Matrix theta(net.num_centers() + 1, net.num_outputs());
  theta.topRows(net.num_centers()) = net.weights;
  theta.row(net.num_centers()) = net.bias.transpose();
  const Vector mean_output = (design * theta).colwise().mean().transpose();
  for (std::size_t c = 0; c < db.rbf_speaker_order.size(); ++c)
    scores.push_back({db.rbf_speaker_order[c], mean_output(static_cast<Eigen::Index>(c))});
  std::sort(scores.begin(), scores.end(),
            [](const SpeakerScore &a, const SpeakerScore &b) { return a.speaker_id < b.speaker_id; });
  return Decide(std::move(scores), mode);
}

IdentificationResult Identify(const AudioSignal &signal, const SpeakerDatabase &db, DecisionMode mode) {
  if (db.empty()) throw Error(ErrorCode::kEmptyDatabase, "no speakers enrolled");
  if (signal.sample_rate != db.config.sample_rate)
    throw Error(ErrorCode::kSampleRateMismatch, "recording is " + std::to_string(signal.sample_rate) +
                                                    " Hz, database expects " +
                                                    std::to_string(db.config.sample_rate) + " Hz");
  return IdentifyFeatures(ExtractFeatures(signal, db.config), db, mode);
}

}  // namespace spkid
