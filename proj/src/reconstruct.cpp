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

#include "racl/reconstruct.hpp"

namespace racl {

AudioClip reconstruct_clip(const AudioClip& clip, const SpectrogramConfig& cfg, uint64_t seed) {
  cfg.validate(clip.sample_rate);
  const Eigen::MatrixXd fb = mel_filterbank(cfg, clip.sample_rate);
  const Eigen::MatrixXd mag = stft(clip.samples, cfg, true).cwiseAbs();
  const Eigen::MatrixXd mel = mel_project(mag, fb);
  const Eigen::MatrixXd mag_rec = mel_invert(mel, fb);

  AudioClip out = clip;
  out.samples = griffin_lim(mag_rec, cfg, clip.samples.size(), seed);
  out.label = reconstructed_of(clip.label);
  // keep the amplitude contract after resynthesis
  double peak = 0.0;
  for (double v : out.samples) peak = std::max(peak, std::abs(v));
  if (peak > 1.0)
    for (double& v : out.samples) v /= peak;
  return out;
}

}  // namespace racl
