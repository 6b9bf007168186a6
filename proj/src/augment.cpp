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

#include "racl/augment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "racl/audio.hpp"

namespace racl {

namespace fs = std::filesystem;

void AugmentConfig::validate() const {
  auto check_interval = [](const double* iv, const char* name) {
    if (iv[0] > iv[1]) throw Error(ErrorCode::kConfig, std::string(name) + ": lower bound above upper");
  };
  check_interval(noise_snr_db, "noise_snr_db");
  check_interval(music_snr_db, "music_snr_db");
  check_interval(speech_snr_db, "speech_snr_db");
  if (speech_mix_count[0] > speech_mix_count[1] || speech_mix_count[0] < 1)
    throw Error(ErrorCode::kConfig, "speech_mix_count: invalid interval");
  double sum = 0.0;
  for (double p : probabilities) {
    if (p < 0.0 || p > 1.0) throw Error(ErrorCode::kConfig, "augment probability outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorCode::kConfig, "augment probabilities must sum to 1");
}

double mean_square(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return x.empty() ? 0.0 : acc / static_cast<double>(x.size());
}

double snr_gain(double signal_power, double noise_power, double snr_db) {
  if (signal_power <= 0.0 || noise_power <= 0.0)
    throw Error(ErrorCode::kDegenerate, "snr_gain: zero-power signal or noise");
  return std::sqrt(signal_power / noise_power) * std::pow(10.0, -snr_db / 20.0);
}

namespace {

// Tile or cut the interferer to the clip length; cut offset from rng.
std::vector<double> fit_to_length(const std::vector<double>& x, size_t len, Rng& rng) {
  if (x.empty()) throw Error(ErrorCode::kDegenerate, "empty interferer");
  std::vector<double> out(len);
  if (x.size() >= len) {
    const size_t slack = x.size() - len;
    const size_t off = slack == 0 ? 0 : static_cast<size_t>(rng.below(slack + 1));
    std::copy(x.begin() + static_cast<long>(off), x.begin() + static_cast<long>(off + len), out.begin());
  } else {
    for (size_t i = 0; i < len; ++i) out[i] = x[i % x.size()];
  }
  return out;
}

}  // namespace

AudioClip mix_additive(const AudioClip& clip, const AudioClip& interferer, double snr_db, Rng& rng) {
  if (clip.samples.empty() || interferer.samples.empty())
    throw Error(ErrorCode::kDegenerate, "mix_additive: empty input");
  const std::vector<double> noise = fit_to_length(interferer.samples, clip.samples.size(), rng);
  const double g = snr_gain(mean_square(clip.samples), mean_square(noise), snr_db);

  AudioClip out = clip;
  double peak = 0.0;
  for (size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] += g * noise[i];
    peak = std::max(peak, std::abs(out.samples[i]));
  }
  if (peak > 1.0)
    for (double& v : out.samples) v /= peak;
  return out;
}

AudioClip mix_babble(const AudioClip& clip, const std::vector<AudioClip>& utterances, double snr_db,
                     const AugmentConfig& cfg, Rng& rng) {
  const int n = static_cast<int>(utterances.size());
  if (n < cfg.speech_mix_count[0] || n > cfg.speech_mix_count[1])
    throw Error(ErrorCode::kConfig, "mix_babble: utterance count " + std::to_string(n) +
                                        " outside configured interval");
  AudioClip babble;
  babble.sample_rate = clip.sample_rate;
  babble.samples.assign(clip.samples.size(), 0.0);
  for (const auto& u : utterances) {
    const std::vector<double> fitted = fit_to_length(u.samples, clip.samples.size(), rng);
    for (size_t i = 0; i < fitted.size(); ++i) babble.samples[i] += fitted[i];
  }
  return mix_additive(clip, babble, snr_db, rng);
}

AudioClip convolve_rir(const AudioClip& clip, const AudioClip& rir) {
  if (rir.samples.empty()) throw Error(ErrorCode::kDegenerate, "convolve_rir: empty RIR");
  if (rir.samples.size() > clip.samples.size())
    throw Error(ErrorCode::kShape, "convolve_rir: RIR longer than clip");
  const size_t n = clip.samples.size();
  AudioClip out = clip;
  out.samples.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const size_t kmax = std::min(rir.samples.size() - 1, i);
    for (size_t k = 0; k <= kmax; ++k) acc += rir.samples[k] * clip.samples[i - k];
    out.samples[i] = acc;
  }
  double in_peak = 0.0, out_peak = 0.0;
  for (double v : clip.samples) in_peak = std::max(in_peak, std::abs(v));
  for (double v : out.samples) out_peak = std::max(out_peak, std::abs(v));
  if (out_peak > 0.0 && in_peak > 0.0) {
    const double s = in_peak / out_peak;
    for (double& v : out.samples) v *= s;
  }
  return out;
}

namespace {

std::vector<std::string> list_wavs(const std::string& dir) {
  std::vector<std::string> files;
  if (dir.empty() || !fs::is_directory(dir)) return files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".wav") files.push_back(e.path().string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

AugmentPools::AugmentPools(const AugmentConfig& cfg, int sample_rate)
    : cfg_(cfg), sample_rate_(sample_rate) {
  cfg.validate();
  noise_files_ = list_wavs(cfg.noise_dir);
  music_files_ = list_wavs(cfg.music_dir);
  speech_files_ = list_wavs(cfg.speech_dir);
  rir_files_ = list_wavs(cfg.rir_dir);

  // fold mass of missing pools into "none"
  probs_ = cfg.probabilities;
  const AugmentCategory cats[] = {AugmentCategory::kNoise, AugmentCategory::kMusic,
                                  AugmentCategory::kBabble, AugmentCategory::kRir};
  for (AugmentCategory c : cats) {
    if (!has_pool(c)) {
      probs_[0] += probs_[static_cast<size_t>(c)];
      probs_[static_cast<size_t>(c)] = 0.0;
    }
  }
  if (has_pool(AugmentCategory::kBabble) &&
      static_cast<int>(speech_files_.size()) < cfg_.speech_mix_count[0]) {
    probs_[0] += probs_[static_cast<size_t>(AugmentCategory::kBabble)];
    probs_[static_cast<size_t>(AugmentCategory::kBabble)] = 0.0;
  }
}

const std::vector<std::string>& AugmentPools::pool(AugmentCategory c) const {
  switch (c) {
    case AugmentCategory::kNoise: return noise_files_;
    case AugmentCategory::kMusic: return music_files_;
    case AugmentCategory::kBabble: return speech_files_;
    case AugmentCategory::kRir: return rir_files_;
    default: throw Error(ErrorCode::kConfig, "no pool for category none");
  }
}

bool AugmentPools::has_pool(AugmentCategory c) const {
  return c != AugmentCategory::kNone && !pool(c).empty();
}

AudioClip AugmentPools::load(AugmentCategory c, size_t index) const {
  AudioClip clip = read_wav(pool(c)[index]);
  if (clip.sample_rate != sample_rate_) clip = resample(clip, sample_rate_);
  return clip;
}

AudioClip AugmentPools::apply(const AudioClip& clip, Rng& rng) const {
  const double u = rng.uniform();
  double cum = 0.0;
  AugmentCategory cat = AugmentCategory::kNone;
  for (size_t c = 0; c < probs_.size(); ++c) {
    cum += probs_[c];
    if (u < cum) {
      cat = static_cast<AugmentCategory>(c);
      break;
    }
  }
  switch (cat) {
    case AugmentCategory::kNone:
      return clip;
    case AugmentCategory::kNoise: {
      const AudioClip noise = load(cat, rng.below(noise_files_.size()));
      return mix_additive(clip, noise, rng.uniform(cfg_.noise_snr_db[0], cfg_.noise_snr_db[1]), rng);
    }
    case AugmentCategory::kMusic: {
      const AudioClip music = load(cat, rng.below(music_files_.size()));
      return mix_additive(clip, music, rng.uniform(cfg_.music_snr_db[0], cfg_.music_snr_db[1]), rng);
    }
    case AugmentCategory::kBabble: {
      const int lo = cfg_.speech_mix_count[0];
      const int hi = std::min(cfg_.speech_mix_count[1], static_cast<int>(speech_files_.size()));
      const int count = rng.uniform_int(lo, std::max(lo, hi));
      std::vector<AudioClip> utts;
      utts.reserve(static_cast<size_t>(count));
      for (int i = 0; i < count; ++i) utts.push_back(load(cat, rng.below(speech_files_.size())));
      return mix_babble(clip, utts, rng.uniform(cfg_.speech_snr_db[0], cfg_.speech_snr_db[1]), cfg_, rng);
    }
    case AugmentCategory::kRir: {
      AudioClip rir = load(cat, rng.below(rir_files_.size()));
      if (rir.samples.size() > clip.samples.size())
        rir.samples.resize(clip.samples.size());  // long RIR tails carry no usable energy here
      return convolve_rir(clip, rir);
    }
  }
  return clip;
}

}  // namespace racl
