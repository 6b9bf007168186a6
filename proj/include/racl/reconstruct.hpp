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

#ifndef RACL_RECONSTRUCT_HPP
#define RACL_RECONSTRUCT_HPP

#include "racl/common.hpp"
#include "racl/dsp.hpp"

namespace racl {

// Hard-sample generation by analysis-resynthesis: STFT -> mel projection ->
// pseudo-inverse mel recovery -> Griffin-Lim phase retrieval. The output
// sounds like the input but carries lossy spectral round-trip artifacts.
// Labels map BonaFide -> RecBonaFide and Spoof -> RecSpoof.
AudioClip reconstruct_clip(const AudioClip& clip, const SpectrogramConfig& cfg, uint64_t seed);

}  // namespace racl

#endif  // RACL_RECONSTRUCT_HPP
