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

#ifndef RACL_LOSSES_HPP
#define RACL_LOSSES_HPP

#include <Eigen/Dense>
#include <vector>

#include "racl/common.hpp"

namespace racl {

struct RaclWeights {
  double alpha = 0.6;   // standard contrastive
  double beta = 0.1;    // enhanced contrastive
  double gamma = 0.3;   // variance regularization
  double margin = 1.0;
  double delta = 1e-4;
  double class_weight_bona = 10.0;
  double class_weight_other = 1.0;

  void validate() const;
};

struct EmbeddingPair {
  int i = 0;
  int j = 0;
  int y = 0;  // 1 = same class, 0 = different
};

// All unordered pairs (i < j); Y from the binary label (bona fide vs rest).
std::vector<EmbeddingPair> make_pairs_std(const std::vector<int>& binary_labels);

// Restricted to BonaFide / RecBonaFide samples; Y = 1 for bona/bona and
// rec/rec, Y = 0 for bona/rec. Pair indices refer to the full batch.
std::vector<EmbeddingPair> make_pairs_enh(const std::vector<Provenance>& provenance);

// Margin contrastive loss, mean over pairs of Y*D^2 + (1-Y)*max(0, m-D)^2.
// Gradients are accumulated (scaled by `scale`) into grads when non-null.
// An empty pair list contributes 0.
double contrastive(const std::vector<Eigen::VectorXd>& embeddings,
                   const std::vector<EmbeddingPair>& pairs, double margin,
                   std::vector<Eigen::VectorXd>* grads = nullptr, double scale = 1.0);

// Variance hinge over one class: -(1/d) sum_j max(0, 1 - sqrt(Var_j + delta))
// with population variance over the `members` rows. Fewer than 2 members
// contribute 0.
double variance_reg(const std::vector<Eigen::VectorXd>& embeddings,
                    const std::vector<int>& members, double delta,
                    std::vector<Eigen::VectorXd>* grads = nullptr, double scale = 1.0);

// Weighted binary cross-entropy on 2-way logits, mean reduction;
// weight 10 for bona fide (label 0), 1 otherwise; log-sum-exp stabilized.
double weighted_ce(const std::vector<Eigen::Vector2d>& logits, const std::vector<int>& binary_labels,
                   const RaclWeights& w, std::vector<Eigen::Vector2d>* grads = nullptr,
                   double scale = 1.0);

struct LossBreakdown {
  double cls = 0.0;
  double std_ = 0.0;
  double enh = 0.0;
  double reg_bona = 0.0;
  double reg_spoof = 0.0;
  double total = 0.0;
  std::vector<Eigen::VectorXd> grad_embeddings;
  std::vector<Eigen::Vector2d> grad_logits;
};

// total = (1 - alpha - beta)*cls + alpha*std + beta*enh + gamma*(reg_bona + reg_spoof)
LossBreakdown racl_total(const std::vector<Eigen::VectorXd>& embeddings,
                         const std::vector<Eigen::Vector2d>& logits,
                         const std::vector<Provenance>& provenance, const RaclWeights& w);

}  // namespace racl

#endif  // RACL_LOSSES_HPP
