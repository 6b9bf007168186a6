// Copyright 2026 RACL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RACL_AUDIO_HPP
#define RACL_AUDIO_HPP

#include <string>
#include <vector>

#include "racl/common.hpp"

namespace racl {

// Reads a RIFF WAV file (16-bit PCM or 32-bit IEEE float). Multichannel
// input is averaged to mono; amplitudes land in [-1, 1].
AudioClip read_wav(const std::string& path);

// Writes 16-bit PCM with round-half-away-from-zero quantization.
void write_wav(const std::string& path, const AudioClip& clip);

// Band-limited polyphase resampling: windowed sinc, Kaiser window (beta = 8),
// half-width 32 taps per phase. Duration is preserved within one sample.
AudioClip resample(const AudioClip& clip, int target_rate);

// Truncates to the leading window or extends by circular padding so the
// output has exactly target_len samples.
AudioClip fix_length(const AudioClip& clip, size_t target_len);

// Manifest rows: path<TAB>provenance[<TAB>subset], UTF-8 TSV. Lines starting
// with '#' are headers/comments; "# racl-config <hex>" carries the config
// hash of the producing run.
struct ManifestRow {
  std::string path;
  Provenance provenance = Provenance::kBonaFide;
  std::string subset;  // empty when the manifest has no subset column
};

struct Manifest {
  std::vector<ManifestRow> rows;
  uint64_t config_hash = 0;  // 0 = unknown (hand-written manifest)
};

Manifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const Manifest& manifest);

}  // namespace racl

#endif  // RACL_AUDIO_HPP
