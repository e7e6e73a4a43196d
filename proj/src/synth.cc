// src/synth.cc

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

#include "spkid/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "spkid/error.h"

namespace spkid {

namespace {

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// mt19937_64's output sequence is fixed by the standard, but the library
// distributions are not; map raw bits by hand so corpora are identical
// across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(SplitMix(seed)) {}

  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  double Normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = Uniform();
    while (u1 <= 0.0) u1 = Uniform();
    const double u2 = Uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }
  std::size_t Index(std::size_t n) { return static_cast<std::size_t>(Uniform() * static_cast<double>(n)) % n; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::string SpeakerName(int s) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "spk%02d", s);
  return buf;
}

std::filesystem::path UtterancePath(const std::string &speaker, int u) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_u%02d.wav", u);
  return std::filesystem::path(speaker) / (speaker + buf);
}

}  // namespace

SynthVoice MakeVoice(std::uint64_t seed) {
  Rng rng(seed);
  SynthVoice v;
  v.f0_hz = rng.Uniform(90.0, 240.0);
  for (int i = 0; i < 3; ++i) {
    SynthVoice::Vowel vowel{};
    vowel.formant_hz[0] = rng.Uniform(300.0, 850.0);
    vowel.formant_hz[1] = rng.Uniform(900.0, 2400.0);
    vowel.formant_hz[2] = rng.Uniform(2400.0, 3500.0);
    vowel.bandwidth_hz[0] = rng.Uniform(60.0, 120.0);
    vowel.bandwidth_hz[1] = rng.Uniform(80.0, 160.0);
    vowel.bandwidth_hz[2] = rng.Uniform(120.0, 220.0);
    v.vowels.push_back(vowel);
  }
  return v;
}

AudioSignal SynthesizeUtterance(const SynthVoice &voice, std::uint64_t seed, const SynthOptions &options) {
  if (voice.vowels.empty()) throw Error(ErrorCode::kInvalidConfig, "voice has no vowels");
  Rng rng(seed);
  const double sr = options.sample_rate;
  const auto total = static_cast<std::size_t>(std::lround(options.duration_s * sr));
  const auto lead = static_cast<std::size_t>(std::lround(options.lead_silence_s * sr));
  const auto trail = static_cast<std::size_t>(std::lround(options.trail_silence_s * sr));
  if (lead + trail >= total) throw Error(ErrorCode::kInvalidConfig, "silence padding exceeds duration");
  const std::size_t speech_end = total - trail;

  AudioSignal out;
  out.sample_rate = options.sample_rate;
  out.samples.assign(total, 0.0);

  const double f0 = voice.f0_hz * rng.Uniform(0.95, 1.05);
  const double formant_jitter = rng.Uniform(0.97, 1.03);
  std::size_t pos = lead;
  double peak = 0.0;
  while (pos < speech_end) {
    const auto len = static_cast<std::size_t>(rng.Uniform(0.18, 0.32) * sr);
    const std::size_t end = std::min(speech_end, pos + len);
    const SynthVoice::Vowel &vowel = voice.vowels[rng.Index(voice.vowels.size())];
    const double glide = rng.Uniform(-0.08, 0.08);

    // Harmonic amplitudes follow the sum of three resonance peaks.
    const int harmonics = static_cast<int>(0.45 * sr / f0);
    std::vector<double> amp(harmonics), phase0(harmonics);
    for (int h = 0; h < harmonics; ++h) {
      const double f = (h + 1) * f0;
      double a = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double x = (f - vowel.formant_hz[k] * formant_jitter) / (0.5 * vowel.bandwidth_hz[k]);
        a += (k == 0 ? 1.0 : 0.6) / (1.0 + x * x);
      }
      amp[h] = a / std::sqrt(h + 1.0);
      phase0[h] = rng.Uniform(0.0, 2.0 * std::numbers::pi);
    }

    double phase = 0.0;
    const double n = static_cast<double>(end - pos);
    for (std::size_t i = pos; i < end; ++i) {
      const double progress = (i - pos) / n;
      phase += 2.0 * std::numbers::pi * f0 * (1.0 + glide * progress) / sr;
      double s = 0.0;
      for (int h = 0; h < harmonics; ++h) s += amp[h] * std::sin((h + 1) * phase + phase0[h]);
      const double envelope = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * progress);
      out.samples[i] = envelope * s;
      peak = std::max(peak, std::abs(out.samples[i]));
    }
    pos = end + static_cast<std::size_t>(rng.Uniform(0.02, 0.06) * sr);
  }

  const double gain = peak > 0.0 ? 0.5 / peak : 1.0;
  for (std::size_t i = 0; i < total; ++i) {
    double x = out.samples[i] * gain + options.silence_noise_level * rng.Normal();
    if (i >= lead && i < speech_end) x += options.noise_level * rng.Normal();
    out.samples[i] = std::clamp(x, -1.0, 1.0);
  }
  return out;
}

int EnrollCount(const CorpusSpec &spec) {
  if (spec.enroll_per_speaker >= 0) return std::min(spec.enroll_per_speaker, spec.utterances);
  return spec.utterances - (2 * spec.utterances) / 5;
}

SynthCorpus GenerateCorpus(const CorpusSpec &spec) {
  if (spec.speakers < 1 || spec.utterances < 1)
    throw Error(ErrorCode::kInvalidConfig, "speaker and utterance counts must be at least 1");
  SynthCorpus corpus;
  const int enroll = EnrollCount(spec);
  for (int s = 0; s < spec.speakers; ++s) {
    const std::uint64_t speaker_seed = SplitMix(spec.seed * 1000003ull + static_cast<std::uint64_t>(s));
    const SynthVoice voice = MakeVoice(speaker_seed);
    const std::string id = SpeakerName(s);
    for (int u = 0; u < spec.utterances; ++u) {
      corpus.entries.push_back({UtterancePath(id, u), id, u < enroll});
      corpus.signals.push_back(SynthesizeUtterance(voice, SplitMix(speaker_seed + 7919ull * (u + 1)), spec.synth));
    }
  }
  return corpus;
}

std::vector<CorpusEntry> WriteCorpus(const CorpusSpec &spec, const std::filesystem::path &out) {
  const SynthCorpus corpus = GenerateCorpus(spec);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + out.string());
  std::ofstream enroll(out / "enroll.tsv", std::ios::trunc);
  std::ofstream test(out / "test.tsv", std::ios::trunc);
  if (!enroll || !test) throw Error(ErrorCode::kIoFailure, "cannot write manifests in " + out.string());
  for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
    const CorpusEntry &e = corpus.entries[i];
    std::filesystem::create_directories((out / e.path).parent_path(), ec);
    if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + (out / e.path).parent_path().string());
    WriteWav16(out / e.path, corpus.signals[i]);
    (e.enroll ? enroll : test) << e.path.generic_string() << '\t' << e.speaker_id << '\n';
  }
  if (!enroll.flush() || !test.flush()) throw Error(ErrorCode::kIoFailure, "short write to manifests");
  return corpus.entries;
}

std::vector<ManifestEntry> ReadManifest(const std::filesystem::path &manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open manifest " + manifest.string());
  const std::filesystem::path base = manifest.parent_path();
  std::vector<ManifestEntry> entries;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos)
      throw Error(ErrorCode::kManifestParse, manifest.string() + ":" + std::to_string(lineno) +
                                                 ": expected 'path<TAB>speaker_id'");
    std::filesystem::path path = line.substr(0, tab);
    if (path.is_relative()) path = base / path;
    entries.push_back({std::move(path), line.substr(tab + 1)});
  }
  if (entries.empty()) throw Error(ErrorCode::kManifestParse, manifest.string() + ": no entries");
  return entries;
}

}  // namespace spkid
