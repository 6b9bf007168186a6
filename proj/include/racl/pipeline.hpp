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

#ifndef RACL_PIPELINE_HPP
#define RACL_PIPELINE_HPP

#include <string>
#include <vector>

#include "racl/audio.hpp"
#include "racl/config.hpp"
#include "racl/eval.hpp"
#include "racl/features.hpp"
#include "racl/model.hpp"

namespace racl {

// Shared forward machinery: frozen extractor + aggregation + head.
class Pipeline {
 public:
  explicit Pipeline(const RunConfig& cfg);

  const RunConfig& config() const { return cfg_; }
  const FrozenExtractor& extractor() const { return extractor_; }

  // read -> resample to the working rate -> fix_length.
  AudioClip load_clip(const ManifestRow& row) const;

  struct SampleForward {
    FeatureStack stack;
    AggregateResult agg;
    ForwardTape tape;
  };
  SampleForward forward(const AudioClip& clip, const TrainableParams& params) const;

  TrainableParams init_params() const;

 private:
  RunConfig cfg_;
  FrozenExtractor extractor_;
};

struct EpochLog {
  int epoch = 0;
  double lr = 0.0;
  LossBreakdown train;  // component means over batches (gradients unused)
  LossBreakdown dev;
};

struct TrainResult {
  Checkpoint final;  // averaged parameters; epoch = best epoch
  std::vector<EpochLog> log;
  std::vector<double> dev_losses;
  int best_epoch = 0;
};

// Full training run. Writes per-epoch checkpoints, the averaged final model
// (final.ckpt), and the epoch log TSV into out_dir.
TrainResult train(const Pipeline& pipeline, const Manifest& train_manifest,
                  const Manifest& dev_manifest, const std::string& out_dir, int workers);

struct ScoredRow {
  ScoreRecord record;
  Eigen::VectorXd embedding;
  Provenance provenance = Provenance::kBonaFide;
  bool ok = false;
  std::string error;
};

// Deterministic per-utterance scoring; failed rows carry their error and
// the run continues.
std::vector<ScoredRow> score_manifest(const Pipeline& pipeline, const Manifest& manifest,
                                      const TrainableParams& params, int workers);

}  // namespace racl

#endif  // RACL_PIPELINE_HPP
