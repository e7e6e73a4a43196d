// include/spkid/synth.h

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

#ifndef SPKID_SYNTH_H_
#define SPKID_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "spkid/audio_io.h"

namespace spkid {

// Synthetic voice: harmonic source shaped by a small set of speaker-specific
// formant patterns.
struct SynthVoice {
  double f0_hz = 120.0;
  // Each vowel is three (formant Hz, bandwidth Hz) pairs.
  struct Vowel {
    double formant_hz[3];
    double bandwidth_hz[3];
  };
  std::vector<Vowel> vowels;
};

struct SynthOptions {
  int sample_rate = 16000;
  double duration_s = 2.0;
  double lead_silence_s = 0.2;
  double trail_silence_s = 0.2;
  double noise_level = 0.003;
  double silence_noise_level = 0.0005;
};

SynthVoice MakeVoice(std::uint64_t seed);
AudioSignal SynthesizeUtterance(const SynthVoice &voice, std::uint64_t seed,
                                const SynthOptions &options = {});

struct CorpusEntry {
  std::filesystem::path path;  // relative to the corpus directory
  std::string speaker_id;
  bool enroll = false;
};

struct CorpusSpec {
  int speakers = 5;
  int utterances = 5;
  int enroll_per_speaker = -1;  // < 0: utterances - (2 * utterances) / 5
  std::uint64_t seed = 1;
  SynthOptions synth;
};

int EnrollCount(const CorpusSpec &spec);

// Synthesizes a corpus in memory; entries are ordered by speaker, then
// utterance.
struct SynthCorpus {
  std::vector<CorpusEntry> entries;
  std::vector<AudioSignal> signals;
};
SynthCorpus GenerateCorpus(const CorpusSpec &spec);

// Writes <out>/<speaker>/<speaker>_uNN.wav plus enroll.tsv and test.tsv
// manifests (path<TAB>speaker_id, paths relative to out).
std::vector<CorpusEntry> WriteCorpus(const CorpusSpec &spec, const std::filesystem::path &out);

struct ManifestEntry {
  std::filesystem::path path;
  std::string speaker_id;
};

// Relative paths are resolved against the manifest's directory. Throws
// kManifestParse on malformed lines or an empty manifest.
std::vector<ManifestEntry> ReadManifest(const std::filesystem::path &manifest);

}  // namespace spkid

#endif  // SPKID_SYNTH_H_
