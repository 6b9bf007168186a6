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

#ifndef RACL_MODEL_HPP
#define RACL_MODEL_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "racl/common.hpp"
#include "racl/losses.hpp"
#include "racl/rng.hpp"

namespace racl {

struct HeadConfig {
  int input_dim = 64;   // D
  int hidden = 64;      // H
  int embedding = 32;   // E
};

// Attentive-pooling MLP head: per-frame attention scores -> softmax pooling
// over T, two affine+tanh blocks D->H->E, affine E->2 logits. The E-dim
// post-tanh activation is the embedding fed to the contrastive and
// regularization losses.
struct HeadParams {
  Eigen::VectorXd attn_w;  // D
  Eigen::VectorXd attn_b;  // 1
  Eigen::MatrixXd w1;      // H x D
  Eigen::VectorXd b1;      // H
  Eigen::MatrixXd w2;      // E x H
  Eigen::VectorXd b2;      // E
  Eigen::MatrixXd w3;      // 2 x E
  Eigen::VectorXd b3;      // 2

  static HeadParams init(const HeadConfig& cfg, uint64_t seed);
  static HeadParams zeros(const HeadConfig& cfg);
};

// All trainable state: the aggregation kernel plus the head.
struct TrainableParams {
  Eigen::VectorXd kernel;
  HeadParams head;

  // Fixed tensor enumeration order; also the serialization order.
  void for_each_tensor(const std::function<void(const std::string&, Eigen::Ref<Eigen::VectorXd>)>& fn);
  void for_each_tensor(
      const std::function<void(const std::string&, const Eigen::Ref<const Eigen::VectorXd>&)>& fn) const;
  size_t total_size() const;
};

struct ForwardTape {
  Eigen::MatrixXd input;      // T x D
  Eigen::VectorXd scores;     // T
  Eigen::VectorXd alpha;      // softmax over T
  Eigen::VectorXd pooled;     // D
  Eigen::VectorXd h1;         // post-tanh H
  Eigen::VectorXd embedding;  // post-tanh E
  Eigen::Vector2d logits;
};

// Deterministic forward pass; the tape suffices for exact backprop.
ForwardTape head_forward(const Eigen::MatrixXd& agg, const HeadParams& params);

struct HeadGrads {
  HeadParams params;          // same shapes, gradient values
  Eigen::MatrixXd grad_input; // d(loss)/d(agg)
};

// Exact reverse-mode gradients. grad_embedding is injected at the embedding
// tap so losses on embeddings and on logits combine additively.
HeadGrads head_backward(const ForwardTape& tape, const HeadParams& params,
                        const Eigen::Vector2d& grad_logits, const Eigen::VectorXd& grad_embedding);

struct OptimizerConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 5e-4;
  double base_lr = 5e-4;
  double lr_decay = 0.5;
  int lr_step_epochs = 10;
};

class AdamOptimizer {
 public:
  AdamOptimizer(const OptimizerConfig& cfg, const TrainableParams& shape_like);

  // Coupled L2: g' = g + weight_decay * theta, then bias-corrected Adam.
  void step(TrainableParams& params, const TrainableParams& grads, double lr);

  long step_count() const { return t_; }

 private:
  OptimizerConfig cfg_;
  std::vector<Eigen::VectorXd> m_, v_;
  long t_ = 0;
};

double lr_at(const OptimizerConfig& cfg, int epoch);

struct Checkpoint {
  int epoch = 0;
  double val_loss = 0.0;
  uint64_t config_hash = 0;
  TrainableParams params;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

// Elementwise arithmetic mean of all trainable parameters.
TrainableParams average_checkpoints(const std::vector<Checkpoint>& ckpts);

// Indices to average per the selection rule: lowest-validation-loss epoch
// plus up to four immediately preceding epochs.
std::vector<int> averaging_window(const std::vector<double>& val_losses, int window = 5);

}  // namespace racl

#endif  // RACL_MODEL_HPP
