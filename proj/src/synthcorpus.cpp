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

#include "racl/synthcorpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "racl/rng.hpp"

namespace racl {

namespace fs = std::filesystem;

namespace {

// RBJ notch biquad applied in place.
void notch_filter(std::vector<double>& x, double freq, double q, int sample_rate) {
  const double w0 = 2.0 * M_PI * freq / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double cw = std::cos(w0);
  const double a0 = 1.0 + alpha;
  const double b0 = 1.0 / a0, b1 = -2.0 * cw / a0, b2 = 1.0 / a0;
  const double a1 = -2.0 * cw / a0, a2 = (1.0 - alpha) / a0;
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
  for (double& v : x) {
    const double in = v;
    v = b0 * in + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = in;
    y2 = y1;
    y1 = v;
  }
}

}  // namespace

AudioClip synth_clip(const CorpusSpec& spec, Provenance label, int index) {
  const bool spoof = label == Provenance::kSpoof;
  Rng rng(Rng::derive(spec.seed, spoof ? "corpus_spoof" : "corpus_bona", static_cast<uint64_t>(index)));

  const size_t n = static_cast<size_t>(spec.duration_s * spec.sample_rate);
  const double f0 = rng.uniform(120.0, 250.0);
  const int harmonics = rng.uniform_int(8, 12);
  const double vib_rate = rng.uniform(4.0, 6.0);
  const double vib_phase = rng.uniform(0.0, 2.0 * M_PI);
  // spoof vibrato is nearly flat: reduced harmonic jitter
  const double vib_depth = spoof ? rng.uniform(0.0, 0.002) : rng.uniform(0.01, 0.02);

  std::vector<double> phases(static_cast<size_t>(harmonics));
  for (double& p : phases) {
    p = rng.uniform(0.0, 2.0 * M_PI);
    if (spoof) p = std::round(p / (M_PI / 2.0)) * (M_PI / 2.0);  // quantized phase
  }

  std::vector<double> x(n, 0.0);
  const double dt = 1.0 / spec.sample_rate;
  double inst_phase = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double f = f0 * (1.0 + vib_depth * std::sin(2.0 * M_PI * vib_rate * t + vib_phase));
    inst_phase += 2.0 * M_PI * f * dt;
    for (int h = 1; h <= harmonics; ++h) {
      x[i] += std::sin(h * inst_phase + phases[static_cast<size_t>(h - 1)]) / h;
    }
  }

  // filtered noise floor at about -30 dB relative to the tone complex
  double lp = 0.0;
  for (size_t i = 0; i < n; ++i) {
    lp = 0.95 * lp + 0.05 * rng.uniform(-1.0, 1.0);
    x[i] += 0.3 * lp;
  }

  if (spoof) {
    // spectral notch artifacts, fixed centers mirroring vocoder-style gaps
    notch_filter(x, 1300.0, 8.0, spec.sample_rate);
    notch_filter(x, 2700.0, 8.0, spec.sample_rate);
    notch_filter(x, 4100.0, 8.0, spec.sample_rate);
  }

  // identical loudness statistics across classes
  double ms = 0.0;
  for (double v : x) ms += v * v;
  ms /= static_cast<double>(n);
  const double target_rms = 0.1 * std::pow(10.0, rng.uniform(-0.5, 0.5) / 20.0);
  const double g = target_rms / std::sqrt(std::max(ms, 1e-12));
  double peak = 0.0;
  for (double& v : x) {
    v *= g;
    peak = std::max(peak, std::abs(v));
  }
  if (peak > 1.0)
    for (double& v : x) v /= peak;

  AudioClip clip;
  clip.samples = std::move(x);
  clip.sample_rate = spec.sample_rate;
  clip.label = label;
  clip.source_id = std::string(spoof ? "spoof" : "bona") + "_" + std::to_string(index);
  return clip;
}

std::string generate_corpus(const CorpusSpec& spec, const std::string& out_dir,
                            uint64_t config_hash) {
  if (spec.n_per_class < 1) throw Error(ErrorCode::kConfig, "generate_corpus: n_per_class must be >= 1");
  fs::create_directories(out_dir);

  Manifest manifest;
  manifest.config_hash = config_hash;
  const Provenance classes[] = {Provenance::kBonaFide, Provenance::kSpoof};
  for (Provenance label : classes) {
    for (int i = 0; i < spec.n_per_class; ++i) {
      const AudioClip clip = synth_clip(spec, label, i);
      const std::string name = clip.source_id + ".wav";
      const std::string path = (fs::path(out_dir) / name).string();
      write_wav(path, clip);
      manifest.rows.push_back({path, label, ""});
    }
  }
  const std::string manifest_path = (fs::path(out_dir) / "manifest.tsv").string();
  write_manifest(manifest_path, manifest);
  return manifest_path;
}

}  // namespace racl
