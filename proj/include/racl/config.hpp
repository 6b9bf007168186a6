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

#ifndef RACL_CONFIG_HPP
#define RACL_CONFIG_HPP

#include <cstdint>
#include <string>

#include "racl/augment.hpp"
#include "racl/dsp.hpp"
#include "racl/losses.hpp"
#include "racl/model.hpp"

namespace racl {

struct FeatureConfig {
  int layers = 12;        // L (the pretrained stack this stands in for uses 24)
  int dims = 64;          // D (1024 upstream)
  uint64_t extractor_seed = 1234;
};

struct TrainConfig {
  int epochs = 100;
  int batch_size = 32;
  int avg_window = 5;  // best epoch + four predecessors
  bool reconstruct_dev = true;
};

struct CorpusConfig {
  int n_per_class = 200;
  double duration_s = 4.05;
};

// Every tunable of the pipeline in one serializable place. A run embeds the
// hash of its resolved config in all outputs; unknown JSON keys are rejected.
struct RunConfig {
  uint64_t seed = 688;
  int sample_rate = 16000;
  size_t fixed_len = 64600;
  SpectrogramConfig spectrogram;
  FeatureConfig features;
  HeadConfig head;
  RaclWeights losses;
  OptimizerConfig optimizer;
  TrainConfig train;
  CorpusConfig corpus;
  AugmentConfig augment;

  void validate() const;

  // Canonical JSON (sorted keys) of the resolved config.
  std::string to_json() const;
  // FNV-1a over the canonical JSON.
  uint64_t hash() const;
  // Hash over the data-producing keys only (seed, rates, lengths,
  // spectrogram, corpus); embedded in manifests so they survive
  // training-hyperparameter changes.
  uint64_t data_hash() const;

  // Merge JSON text over the current values; unknown keys are a config
  // error naming the offending path.
  void apply_json(const std::string& json_text);

  // Defaults, overlaid with the file (when non-empty), then the RACL_SEED
  // environment variable.
  static RunConfig load(const std::string& json_path);
};

}  // namespace racl

#endif  // RACL_CONFIG_HPP
