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

#ifndef RACL_AUGMENT_HPP
#define RACL_AUGMENT_HPP

#include <array>
#include <string>
#include <vector>

#include "racl/common.hpp"
#include "racl/rng.hpp"

namespace racl {

enum class AugmentCategory { kNone = 0, kNoise = 1, kMusic = 2, kBabble = 3, kRir = 4 };

struct AugmentConfig {
  double noise_snr_db[2] = {0.0, 15.0};
  double music_snr_db[2] = {5.0, 15.0};
  double speech_snr_db[2] = {13.0, 20.0};
  int speech_mix_count[2] = {3, 8};
  // One category is drawn per sample; probabilities over
  // {none, noise, music, babble, rir}, must sum to 1.
  std::array<double, 5> probabilities = {0.2, 0.2, 0.2, 0.2, 0.2};
  std::string noise_dir, music_dir, speech_dir, rir_dir;

  void validate() const;
};

// Gain g with 10*log10(signal_power / (g^2 * noise_power)) = snr_db.
double snr_gain(double signal_power, double noise_power, double snr_db);

double mean_square(const std::vector<double>& x);

// clip + g * interferer at the requested SNR. The interferer is tiled or cut
// to the clip length first (cut offset drawn from rng when longer). The
// mixture is rescaled only if it would clip.
AudioClip mix_additive(const AudioClip& clip, const AudioClip& interferer, double snr_db, Rng& rng);

AudioClip mix_babble(const AudioClip& clip, const std::vector<AudioClip>& utterances, double snr_db,
                     const AugmentConfig& cfg, Rng& rng);

// Full linear convolution truncated to the clip length, renormalized to the
// clip's original peak.
AudioClip convolve_rir(const AudioClip& clip, const AudioClip& rir);

// WAV pools resolved from the config directories, loaded lazily per file.
class AugmentPools {
 public:
  explicit AugmentPools(const AugmentConfig& cfg, int sample_rate);

  // Effective per-category probabilities: a category whose pool is missing
  // or empty has its mass folded into kNone.
  const std::array<double, 5>& probabilities() const { return probs_; }
  bool has_pool(AugmentCategory c) const;

  // Applies one drawn category to the clip. Deterministic in (clip, rng state).
  AudioClip apply(const AudioClip& clip, Rng& rng) const;

 private:
  AudioClip load(AugmentCategory c, size_t index) const;
  const std::vector<std::string>& pool(AugmentCategory c) const;

  AugmentConfig cfg_;
  int sample_rate_;
  std::array<double, 5> probs_;
  std::vector<std::string> noise_files_, music_files_, speech_files_, rir_files_;
};

}  // namespace racl

#endif  // RACL_AUGMENT_HPP
