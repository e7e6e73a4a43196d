// src/database_io.cc

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

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <zlib.h>

#include "spkid/engine.h"
#include "spkid/error.h"

namespace spkid {

namespace {

constexpr char kMagic[8] = {'S', 'P', 'K', 'I', 'D', 'D', 'B', '\0'};
constexpr std::size_t kHeaderSize = sizeof(kMagic) + 4;
constexpr std::size_t kChecksumSize = 4;

std::uint32_t Crc32(std::span<const std::byte> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  const auto *p = reinterpret_cast<const Bytef *>(bytes.data());
  std::size_t left = bytes.size();
  while (left > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(left, 1u << 30));
    crc = crc32(crc, p, chunk);
    p += chunk;
    left -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

class Writer {
 public:
  void U8(std::uint8_t v) { out_.push_back(static_cast<std::byte>(v)); }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void I64(std::int64_t v) { U64(static_cast<std::uint64_t>(v)); }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }
  void Str(const std::string &s) {
    U64(s.size());
    for (char c : s) U8(static_cast<std::uint8_t>(c));
  }
  void Reals(std::span<const double> v) {
    U64(v.size());
    for (double x : v) F64(x);
  }
  void Mat(const Matrix &m) {
    U64(static_cast<std::uint64_t>(m.rows()));
    U64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.size(); ++i) F64(m.data()[i]);
  }
  void Raw(std::span<const char> s) {
    for (char c : s) U8(static_cast<std::uint8_t>(c));
  }
  std::vector<std::byte> &bytes() { return out_; }

 private:
  std::vector<std::byte> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::byte> in) : in_(in) {}

  std::uint8_t U8() {
    Need(1);
    return std::to_integer<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t U32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(U8()) << (8 * i);
    return v;
  }
  std::uint64_t U64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(U8()) << (8 * i);
    return v;
  }
  std::int64_t I64() { return static_cast<std::int64_t>(U64()); }
  int Int() {
    const std::int64_t v = I64();
    if (v < INT32_MIN || v > INT32_MAX) Fail("integer field out of range");
    return static_cast<int>(v);
  }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string Str() {
    const std::uint64_t n = Count(1);
    std::string s(n, '\0');
    for (auto &c : s) c = static_cast<char>(U8());
    return s;
  }
  std::vector<double> Reals() {
    const std::uint64_t n = Count(8);
    std::vector<double> v(n);
    for (auto &x : v) x = F64();
    return v;
  }
  Matrix Mat() {
    const std::uint64_t rows = U64();
    const std::uint64_t cols = U64();
    if (cols != 0 && rows > (in_.size() - pos_) / 8 / cols) Fail("matrix larger than file");
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = F64();
    return m;
  }
  bool AtEnd() const { return pos_ == in_.size(); }

  [[noreturn]] static void Fail(const std::string &what) { throw Error(ErrorCode::kCorruptDatabase, what); }

 private:
  void Need(std::size_t n) const {
    if (in_.size() - pos_ < n) Fail("unexpected end of database payload");
  }
  std::uint64_t Count(std::size_t element_size) {
    const std::uint64_t n = U64();
    if (n > (in_.size() - pos_) / element_size) Fail("element count larger than file");
    return n;
  }

  std::span<const std::byte> in_;
  std::size_t pos_ = 0;
};

void WriteConfig(Writer &w, const PipelineConfig &c) {
  w.I64(c.sample_rate);
  w.I64(c.frame_len);
  w.I64(c.frame_shift);
  w.F64(c.preemph_coeff);
  w.F64(c.silence_fraction);
  w.I64(c.fft_size);
  w.I64(c.mel_bins);
  w.I64(c.cepstral_count);
  w.I64(c.dct_norm_len);
  w.F64(c.cluster_radius);
  w.F64(c.accept_ratio);
  w.F64(c.reject_ratio);
  w.F64(c.width_spread);
  w.F64(c.ridge_lambda);
  w.U8(c.train_rbf ? 1 : 0);
}

PipelineConfig ReadConfig(Reader &r) {
  PipelineConfig c;
  c.sample_rate = r.Int();
  c.frame_len = r.Int();
  c.frame_shift = r.Int();
  c.preemph_coeff = r.F64();
  c.silence_fraction = r.F64();
  c.fft_size = r.Int();
  c.mel_bins = r.Int();
  c.cepstral_count = r.Int();
  c.dct_norm_len = r.Int();
  c.cluster_radius = r.F64();
  c.accept_ratio = r.F64();
  c.reject_ratio = r.F64();
  c.width_spread = r.F64();
  c.ridge_lambda = r.F64();
  c.train_rbf = r.U8() != 0;
  return c;
}

void CheckLoaded(const SpeakerDatabase &db) {
  try {
    db.config.Validate();
  } catch (const Error &e) {
    Reader::Fail(std::string("stored configuration invalid: ") + e.what());
  }
  const Eigen::Index dim = db.feature_dim();
  if (!db.empty()) {
    if (db.normalization.dim() != dim || db.normalization.max.size() != dim) Reader::Fail("normalization dimension");
    if ((db.normalization.min.array() > db.normalization.max.array()).any()) Reader::Fail("normalization min > max");
  }
  for (const auto &[id, m] : db.models) {
    if (id.empty() || id != m.speaker_id) Reader::Fail("speaker id mismatch");
    const auto k = static_cast<std::size_t>(m.centers.rows());
    if (k == 0 || m.centers.cols() != dim || m.widths.size() != k || m.potentials.size() != k ||
        m.training_features.cols() != dim || m.training_features.rows() == 0)
      Reader::Fail("inconsistent model for '" + id + "'");
    for (double w : m.widths)
      if (!(w > 0.0)) Reader::Fail("non-positive width for '" + id + "'");
  }
  if (db.shared_rbf) {
    try {
      db.shared_rbf->Validate();
    } catch (const Error &e) {
      Reader::Fail(std::string("stored RBF layer invalid: ") + e.what());
    }
    if (db.shared_rbf->num_outputs() != static_cast<Eigen::Index>(db.rbf_speaker_order.size()) ||
        db.shared_rbf->input_dim() != dim)
      Reader::Fail("RBF layer shape");
    for (const auto &id : db.rbf_speaker_order)
      if (!db.models.contains(id)) Reader::Fail("RBF output for unknown speaker '" + id + "'");
  }
}

}  // namespace

std::vector<std::byte> SerializeDatabase(const SpeakerDatabase &db) {
  Writer w;
  w.Raw(kMagic);
  w.U32(SpeakerDatabase::kFormatVersion);
  WriteConfig(w, db.config);
  w.Reals({db.normalization.min.data(), static_cast<std::size_t>(db.normalization.min.size())});
  w.Reals({db.normalization.max.data(), static_cast<std::size_t>(db.normalization.max.size())});
  w.U64(db.models.size());
  for (const auto &[id, m] : db.models) {
    w.Str(id);
    w.Mat(m.training_features);
    w.Mat(m.centers);
    w.Reals(m.potentials);
    w.Reals(m.widths);
  }
  w.U8(db.shared_rbf ? 1 : 0);
  if (db.shared_rbf) {
    w.U64(db.rbf_speaker_order.size());
    for (const auto &id : db.rbf_speaker_order) w.Str(id);
    const RbfNetwork &net = *db.shared_rbf;
    w.Mat(net.centers);
    w.Reals(net.widths);
    w.Mat(net.weights);
    w.Reals({net.bias.data(), static_cast<std::size_t>(net.bias.size())});
  }
  w.U32(Crc32(w.bytes()));
  return std::move(w.bytes());
}

SpeakerDatabase DeserializeDatabase(std::span<const std::byte> bytes) {
  if (bytes.size() < kHeaderSize + kChecksumSize) Reader::Fail("file too short");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) Reader::Fail("bad magic");
  Reader header(bytes.subspan(sizeof(kMagic), 4));
  const std::uint32_t version = header.U32();
  if (version != SpeakerDatabase::kFormatVersion)
    throw Error(ErrorCode::kVersionMismatch, "database format version " + std::to_string(version) +
                                                 ", expected " + std::to_string(SpeakerDatabase::kFormatVersion));
  const auto body = bytes.first(bytes.size() - kChecksumSize);
  Reader tail(bytes.last(kChecksumSize));
  if (tail.U32() != Crc32(body)) Reader::Fail("checksum mismatch");

  Reader r(body.subspan(kHeaderSize));
  SpeakerDatabase db;
  db.config = ReadConfig(r);
  auto mins = r.Reals();
  auto maxs = r.Reals();
  if (mins.size() != maxs.size()) Reader::Fail("normalization bounds differ in length");
  db.normalization.min = Eigen::Map<Vector>(mins.data(), static_cast<Eigen::Index>(mins.size()));
  db.normalization.max = Eigen::Map<Vector>(maxs.data(), static_cast<Eigen::Index>(maxs.size()));
  const std::uint64_t count = r.U64();
  for (std::uint64_t s = 0; s < count; ++s) {
    SpeakerModel m;
    m.speaker_id = r.Str();
    m.training_features = r.Mat();
    m.centers = r.Mat();
    m.potentials = r.Reals();
    m.widths = r.Reals();
    const std::string id = m.speaker_id;
    if (!db.models.emplace(id, std::move(m)).second) Reader::Fail("duplicate speaker '" + id + "'");
  }
  if (r.U8() != 0) {
    const std::uint64_t n = r.U64();
    for (std::uint64_t i = 0; i < n; ++i) db.rbf_speaker_order.push_back(r.Str());
    RbfNetwork net;
    net.centers = r.Mat();
    net.widths = r.Reals();
    net.weights = r.Mat();
    auto bias = r.Reals();
    net.bias = Eigen::Map<Vector>(bias.data(), static_cast<Eigen::Index>(bias.size()));
    db.shared_rbf = std::move(net);
  }
  if (!r.AtEnd()) Reader::Fail("trailing bytes after payload");
  CheckLoaded(db);
  return db;
}

void SaveDatabase(const SpeakerDatabase &db, const std::filesystem::path &path) {
  const auto bytes = SerializeDatabase(db);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIoFailure, "cannot replace " + path.string());
  }
}

SpeakerDatabase LoadDatabase(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open database " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> bytes(raw.size());
  std::memcpy(bytes.data(), raw.data(), raw.size());
  return DeserializeDatabase(bytes);
}

}  // namespace spkid
