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

#include "racl/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "racl/augment.hpp"
#include "racl/parallel.hpp"

namespace racl {

namespace fs = std::filesystem;

Pipeline::Pipeline(const RunConfig& cfg)
    : cfg_(cfg),
      extractor_(cfg.features.extractor_seed, cfg.features.layers, cfg.features.dims,
                 cfg.spectrogram, cfg.sample_rate) {
  cfg.validate();
}

AudioClip Pipeline::load_clip(const ManifestRow& row) const {
  AudioClip clip = read_wav(row.path);
  clip.label = row.provenance;
  if (clip.sample_rate != cfg_.sample_rate) clip = resample(clip, cfg_.sample_rate);
  return fix_length(clip, cfg_.fixed_len);
}

Pipeline::SampleForward Pipeline::forward(const AudioClip& clip, const TrainableParams& params) const {
  SampleForward out;
  out.stack = extractor_.extract(clip);
  out.agg = aggregate(out.stack, params.kernel);
  out.tape = head_forward(out.agg.agg, params.head);
  return out;
}

TrainableParams Pipeline::init_params() const {
  TrainableParams p;
  p.kernel = init_kernel(adaptive_kernel_size(cfg_.features.layers), cfg_.seed);
  p.head = HeadParams::init(cfg_.head, cfg_.seed);
  return p;
}

namespace {

// Stratified epoch order: per-class shuffle, then proportional interleave so
// every batch sees all provenance classes where possible.
std::vector<size_t> stratified_order(const std::vector<ManifestRow>& rows, uint64_t seed, int epoch) {
  std::vector<std::vector<size_t>> by_class(4);
  for (size_t i = 0; i < rows.size(); ++i)
    by_class[static_cast<size_t>(rows[i].provenance)].push_back(i);
  Rng rng(Rng::derive(seed, "shuffle", static_cast<uint64_t>(epoch)));
  for (auto& cls : by_class) rng.shuffle(cls.begin(), cls.end());

  const size_t total = rows.size();
  std::vector<size_t> taken(4, 0);
  std::vector<size_t> order;
  order.reserve(total);
  for (size_t n = 0; n < total; ++n) {
    // pick the class lagging most behind its proportional share
    int best = -1;
    double best_deficit = -1.0;
    for (int c = 0; c < 4; ++c) {
      const size_t size = by_class[static_cast<size_t>(c)].size();
      if (taken[static_cast<size_t>(c)] >= size) continue;
      const double deficit = static_cast<double>(size) * (n + 1) / total -
                             static_cast<double>(taken[static_cast<size_t>(c)]);
      if (deficit > best_deficit) {
        best_deficit = deficit;
        best = c;
      }
    }
    order.push_back(by_class[static_cast<size_t>(best)][taken[static_cast<size_t>(best)]++]);
  }
  return order;
}

struct BatchForward {
  std::vector<Pipeline::SampleForward> samples;
  std::vector<Eigen::VectorXd> embeddings;
  std::vector<Eigen::Vector2d> logits;
  std::vector<Provenance> provenance;
};

BatchForward forward_batch(const Pipeline& pipeline, const std::vector<ManifestRow>& rows,
                           const std::vector<size_t>& indices, const TrainableParams& params,
                           const AugmentPools* pools, uint64_t seed, int epoch, int workers) {
  BatchForward batch;
  batch.samples.resize(indices.size());
  batch.provenance.resize(indices.size());
  parallel_for(indices.size(), workers, [&](size_t k) {
    const ManifestRow& row = rows[indices[k]];
    AudioClip clip = pipeline.load_clip(row);
    if (pools) {
      Rng rng(Rng::derive(seed, "augment",
                          static_cast<uint64_t>(epoch) * rows.size() + indices[k]));
      clip = pools->apply(clip, rng);
    }
    batch.samples[k] = pipeline.forward(clip, params);
    batch.provenance[k] = row.provenance;
  });
  batch.embeddings.reserve(indices.size());
  batch.logits.reserve(indices.size());
  for (const auto& s : batch.samples) {
    batch.embeddings.push_back(s.tape.embedding);
    batch.logits.push_back(s.tape.logits);
  }
  return batch;
}

void accumulate_loss(LossBreakdown& acc, const LossBreakdown& b, double weight) {
  acc.cls += weight * b.cls;
  acc.std_ += weight * b.std_;
  acc.enh += weight * b.enh;
  acc.reg_bona += weight * b.reg_bona;
  acc.reg_spoof += weight * b.reg_spoof;
  acc.total += weight * b.total;
}

void scale_loss(LossBreakdown& acc, double s) {
  acc.cls *= s;
  acc.std_ *= s;
  acc.enh *= s;
  acc.reg_bona *= s;
  acc.reg_spoof *= s;
  acc.total *= s;
}

void write_epoch_log(const std::string& path, const std::vector<EpochLog>& log,
                     uint64_t config_hash) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write epoch log: " + path);
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof hash_buf, "%016llx", static_cast<unsigned long long>(config_hash));
  out << "# racl-config " << hash_buf << "\n";
  out << "epoch\tlr\ttrain_cls\ttrain_std\ttrain_enh\ttrain_reg\ttrain_total"
         "\tdev_cls\tdev_std\tdev_enh\tdev_reg\tdev_total\n";
  char line[512];
  for (const auto& e : log) {
    std::snprintf(line, sizeof line,
                  "%d\t%.10g\t%.10g\t%.10g\t%.10g\t%.10g\t%.10g\t%.10g\t%.10g\t%.10g\t%.10g\t%.10g\n",
                  e.epoch, e.lr, e.train.cls, e.train.std_, e.train.enh,
                  e.train.reg_bona + e.train.reg_spoof, e.train.total, e.dev.cls, e.dev.std_,
                  e.dev.enh, e.dev.reg_bona + e.dev.reg_spoof, e.dev.total);
    out << line;
  }
}

}  // namespace

TrainResult train(const Pipeline& pipeline, const Manifest& train_manifest,
                  const Manifest& dev_manifest, const std::string& out_dir, int workers) {
  const RunConfig& cfg = pipeline.config();
  if (train_manifest.rows.empty() || dev_manifest.rows.empty())
    throw Error(ErrorCode::kConfig, "train: empty train or dev manifest");
  fs::create_directories(out_dir);

  const AugmentPools pools(cfg.augment, cfg.sample_rate);
  const bool augmented = pools.probabilities()[0] < 1.0;

  TrainableParams params = pipeline.init_params();
  AdamOptimizer adam(cfg.optimizer, params);
  const uint64_t hash = cfg.hash();

  TrainResult result;
  std::vector<Checkpoint> checkpoints;
  checkpoints.reserve(static_cast<size_t>(cfg.train.epochs));

  auto batches_of = [&cfg](const std::vector<size_t>& order) {
    std::vector<std::vector<size_t>> batches;
    const size_t bs = static_cast<size_t>(cfg.train.batch_size);
    for (size_t start = 0; start < order.size(); start += bs) {
      const size_t end = std::min(order.size(), start + bs);
      if (end - start < 2) break;  // a single sample forms no pairs
      batches.emplace_back(order.begin() + static_cast<long>(start),
                           order.begin() + static_cast<long>(end));
    }
    return batches;
  };

  std::vector<size_t> dev_order(dev_manifest.rows.size());
  for (size_t i = 0; i < dev_order.size(); ++i) dev_order[i] = i;

  for (int epoch = 0; epoch < cfg.train.epochs; ++epoch) {
    const double lr = lr_at(cfg.optimizer, epoch);
    EpochLog elog;
    elog.epoch = epoch;
    elog.lr = lr;

    const auto order = stratified_order(train_manifest.rows, cfg.seed, epoch);
    const auto batches = batches_of(order);
    size_t train_count = 0;
    for (const auto& batch_idx : batches) {
      BatchForward batch = forward_batch(pipeline, train_manifest.rows, batch_idx, params,
                                         augmented ? &pools : nullptr, cfg.seed, epoch, workers);
      LossBreakdown losses = racl_total(batch.embeddings, batch.logits, batch.provenance, cfg.losses);
      if (!std::isfinite(losses.total))
        throw Error(ErrorCode::kNumeric, "train: non-finite loss at epoch " + std::to_string(epoch));
      accumulate_loss(elog.train, losses, static_cast<double>(batch_idx.size()));
      train_count += batch_idx.size();

      // backprop in fixed sample order for bit determinism
      TrainableParams grads;
      grads.kernel = Eigen::VectorXd::Zero(params.kernel.size());
      grads.head = HeadParams::zeros(cfg.head);
      for (size_t k = 0; k < batch_idx.size(); ++k) {
        const auto& s = batch.samples[k];
        const HeadGrads hg =
            head_backward(s.tape, params.head, losses.grad_logits[k], losses.grad_embeddings[k]);
        grads.kernel += aggregate_backward_kernel(s.stack, params.kernel, s.agg, hg.grad_input);
        grads.head.attn_w += hg.params.attn_w;
        grads.head.attn_b += hg.params.attn_b;
        grads.head.w1 += hg.params.w1;
        grads.head.b1 += hg.params.b1;
        grads.head.w2 += hg.params.w2;
        grads.head.b2 += hg.params.b2;
        grads.head.w3 += hg.params.w3;
        grads.head.b3 += hg.params.b3;
      }
      adam.step(params, grads, lr);
    }
    if (train_count > 0) scale_loss(elog.train, 1.0 / static_cast<double>(train_count));

    // dev pass, no augmentation
    const auto dev_batches = batches_of(dev_order);
    size_t dev_count = 0;
    for (const auto& batch_idx : dev_batches) {
      BatchForward batch = forward_batch(pipeline, dev_manifest.rows, batch_idx, params, nullptr,
                                         cfg.seed, epoch, workers);
      LossBreakdown losses = racl_total(batch.embeddings, batch.logits, batch.provenance, cfg.losses);
      accumulate_loss(elog.dev, losses, static_cast<double>(batch_idx.size()));
      dev_count += batch_idx.size();
    }
    if (dev_count > 0) scale_loss(elog.dev, 1.0 / static_cast<double>(dev_count));

    Checkpoint ckpt;
    ckpt.epoch = epoch;
    ckpt.val_loss = elog.dev.total;
    ckpt.config_hash = hash;
    ckpt.params = params;
    char name[64];
    std::snprintf(name, sizeof name, "epoch_%04d.ckpt", epoch);
    save_checkpoint((fs::path(out_dir) / name).string(), ckpt);
    checkpoints.push_back(std::move(ckpt));

    result.log.push_back(elog);
    result.dev_losses.push_back(elog.dev.total);
  }

  const auto window = averaging_window(result.dev_losses, cfg.train.avg_window);
  std::vector<Checkpoint> to_average;
  for (int e : window) to_average.push_back(checkpoints[static_cast<size_t>(e)]);
  result.best_epoch = window.back();

  result.final.epoch = result.best_epoch;
  result.final.val_loss = result.dev_losses[static_cast<size_t>(result.best_epoch)];
  result.final.config_hash = hash;
  result.final.params = average_checkpoints(to_average);
  save_checkpoint((fs::path(out_dir) / "final.ckpt").string(), result.final);
  write_epoch_log((fs::path(out_dir) / "train_log.tsv").string(), result.log, hash);
  return result;
}

std::vector<ScoredRow> score_manifest(const Pipeline& pipeline, const Manifest& manifest,
                                      const TrainableParams& params, int workers) {
  std::vector<ScoredRow> out(manifest.rows.size());
  parallel_for(manifest.rows.size(), workers, [&](size_t i) {
    const ManifestRow& row = manifest.rows[i];
    ScoredRow& r = out[i];
    // filename stem, not the path: score files must not depend on where the
    // corpus happens to live
    r.record.source_id = fs::path(row.path).stem().string();
    r.record.subset = row.subset;
    r.provenance = row.provenance;
    r.record.binary_label = binary_label(row.provenance);
    try {
      const AudioClip clip = pipeline.load_clip(row);
      const auto fwd = pipeline.forward(clip, params);
      const Eigen::Vector2d& l = fwd.tape.logits;
      const double mx = std::max(l(0), l(1));
      const double denom = std::exp(l(0) - mx) + std::exp(l(1) - mx);
      r.record.score = std::exp(l(1) - mx) / denom;  // spoof probability
      r.embedding = fwd.tape.embedding;
      r.ok = true;
    } catch (const std::exception& e) {
      r.ok = false;
      r.error = e.what();
    }
  });
  return out;
}

}  // namespace racl
