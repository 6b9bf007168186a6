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

#ifndef RACL_SYNTHCORPUS_HPP
#define RACL_SYNTHCORPUS_HPP

#include <string>

#include "racl/audio.hpp"
#include "racl/common.hpp"

namespace racl {

// Deterministic synthetic corpus: "bona fide" clips are harmonic tone
// complexes with vibrato and a filtered noise floor; "spoof" clips come from
// the same generator with quantized harmonic phases, suppressed vibrato
// jitter, and spectral notches. Classes share loudness and duration
// statistics so energy is not a shortcut feature.
struct CorpusSpec {
  int n_per_class = 200;
  double duration_s = 4.05;
  int sample_rate = 16000;
  uint64_t seed = 688;
};

// One clip, bit-reproducible from (spec, class, index).
AudioClip synth_clip(const CorpusSpec& spec, Provenance label, int index);

// Writes n_per_class WAVs per class under out_dir plus a TSV manifest
// (returned path: out_dir/manifest.tsv). config_hash is embedded in the
// manifest header.
std::string generate_corpus(const CorpusSpec& spec, const std::string& out_dir,
                            uint64_t config_hash);

}  // namespace racl

#endif  // RACL_SYNTHCORPUS_HPP
