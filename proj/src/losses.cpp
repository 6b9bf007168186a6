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

#include "racl/losses.hpp"

#include <cmath>

namespace racl {

void RaclWeights::validate() const {
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0)
    throw Error(ErrorCode::kConfig, "loss weights must be nonnegative");
  if (alpha + beta >= 1.0)
    throw Error(ErrorCode::kConfig, "alpha + beta must be < 1 so the CE coefficient stays positive");
  if (margin <= 0.0) throw Error(ErrorCode::kConfig, "margin must be positive");
  if (delta <= 0.0) throw Error(ErrorCode::kConfig, "delta must be positive");
}

std::vector<EmbeddingPair> make_pairs_std(const std::vector<int>& binary_labels) {
  const int n = static_cast<int>(binary_labels.size());
  if (n < 2) throw Error(ErrorCode::kDegenerate, "make_pairs_std: batch size must be >= 2");
  std::vector<EmbeddingPair> pairs;
  pairs.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      pairs.push_back({i, j, binary_labels[static_cast<size_t>(i)] ==
                                 binary_labels[static_cast<size_t>(j)]
                             ? 1
                             : 0});
  return pairs;
}

std::vector<EmbeddingPair> make_pairs_enh(const std::vector<Provenance>& provenance) {
  std::vector<int> eligible;
  for (int i = 0; i < static_cast<int>(provenance.size()); ++i) {
    const Provenance p = provenance[static_cast<size_t>(i)];
    if (p == Provenance::kBonaFide || p == Provenance::kRecBonaFide) eligible.push_back(i);
  }
  std::vector<EmbeddingPair> pairs;
  for (size_t a = 0; a < eligible.size(); ++a) {
    for (size_t b = a + 1; b < eligible.size(); ++b) {
      const int i = eligible[a], j = eligible[b];
      const int y = provenance[static_cast<size_t>(i)] == provenance[static_cast<size_t>(j)] ? 1 : 0;
      pairs.push_back({i, j, y});
    }
  }
  return pairs;
}

double contrastive(const std::vector<Eigen::VectorXd>& embeddings,
                   const std::vector<EmbeddingPair>& pairs, double margin,
                   std::vector<Eigen::VectorXd>* grads, double scale) {
  if (pairs.empty()) return 0.0;
  const double inv_n = 1.0 / static_cast<double>(pairs.size());
  double loss = 0.0;
  for (const auto& p : pairs) {
    const Eigen::VectorXd diff =
        embeddings[static_cast<size_t>(p.i)] - embeddings[static_cast<size_t>(p.j)];
    const double dist = diff.norm();
    if (p.y == 1) {
      loss += dist * dist;
      if (grads) {
        const Eigen::VectorXd g = (2.0 * inv_n * scale) * diff;
        (*grads)[static_cast<size_t>(p.i)] += g;
        (*grads)[static_cast<size_t>(p.j)] -= g;
      }
    } else {
      const double hinge = margin - dist;
      if (hinge > 0.0) {
        loss += hinge * hinge;
        // subgradient 0 at dist = 0 (direction undefined)
        if (grads && dist > 0.0) {
          const Eigen::VectorXd g = (-2.0 * hinge / dist * inv_n * scale) * diff;
          (*grads)[static_cast<size_t>(p.i)] += g;
          (*grads)[static_cast<size_t>(p.j)] -= g;
        }
      }
    }
  }
  return loss * inv_n;
}

double variance_reg(const std::vector<Eigen::VectorXd>& embeddings, const std::vector<int>& members,
                    double delta, std::vector<Eigen::VectorXd>* grads, double scale) {
  const int n = static_cast<int>(members.size());
  if (n < 2) return 0.0;
  const long d = embeddings[static_cast<size_t>(members[0])].size();

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (int idx : members) mean += embeddings[static_cast<size_t>(idx)];
  mean /= static_cast<double>(n);

  Eigen::VectorXd var = Eigen::VectorXd::Zero(d);
  for (int idx : members) {
    const Eigen::VectorXd c = embeddings[static_cast<size_t>(idx)] - mean;
    var += c.cwiseProduct(c);
  }
  var /= static_cast<double>(n);  // population variance

  double loss = 0.0;
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(d);  // d(loss)/d(var_j)
  for (long j = 0; j < d; ++j) {
    const double s = std::sqrt(var(j) + delta);
    if (s < 1.0) {
      loss -= (1.0 - s);
      coeff(j) = 1.0 / (2.0 * s);  // -d(-(1-s))/dvar = ds/dvar
    }
  }
  loss /= static_cast<double>(d);
  if (grads) {
    // d(var_j)/d(x_ij) = 2 (x_ij - mean_j) / n; mean term cancels in sum
    const double f = scale * 2.0 / (static_cast<double>(n) * static_cast<double>(d));
    for (int idx : members) {
      const Eigen::VectorXd c = embeddings[static_cast<size_t>(idx)] - mean;
      (*grads)[static_cast<size_t>(idx)] += f * coeff.cwiseProduct(c);
    }
  }
  return loss;
}

double weighted_ce(const std::vector<Eigen::Vector2d>& logits, const std::vector<int>& binary_labels,
                   const RaclWeights& w, std::vector<Eigen::Vector2d>* grads, double scale) {
  const size_t m = logits.size();
  if (m == 0) throw Error(ErrorCode::kDegenerate, "weighted_ce: empty batch");
  double loss = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const int y = binary_labels[i];  // 0 bona fide -> class index 0
    const double weight = y == 0 ? w.class_weight_bona : w.class_weight_other;
    const Eigen::Vector2d& l = logits[i];
    const double mx = std::max(l(0), l(1));
    const double lse = mx + std::log(std::exp(l(0) - mx) + std::exp(l(1) - mx));
    loss += weight * (lse - l(y));
    if (grads) {
      Eigen::Vector2d p(std::exp(l(0) - lse), std::exp(l(1) - lse));
      p(y) -= 1.0;
      (*grads)[i] += (scale * weight / static_cast<double>(m)) * p;
    }
  }
  return loss / static_cast<double>(m);
}

LossBreakdown racl_total(const std::vector<Eigen::VectorXd>& embeddings,
                         const std::vector<Eigen::Vector2d>& logits,
                         const std::vector<Provenance>& provenance, const RaclWeights& w) {
  w.validate();
  const size_t n = embeddings.size();
  if (n != logits.size() || n != provenance.size())
    throw Error(ErrorCode::kShape, "racl_total: batch arrays disagree in length");

  std::vector<int> labels(n);
  std::vector<int> bona_idx, other_idx;
  for (size_t i = 0; i < n; ++i) {
    labels[i] = binary_label(provenance[i]);
    (labels[i] == 0 ? bona_idx : other_idx).push_back(static_cast<int>(i));
  }

  LossBreakdown out;
  const long d = embeddings.empty() ? 0 : embeddings[0].size();
  out.grad_embeddings.assign(n, Eigen::VectorXd::Zero(d));
  out.grad_logits.assign(n, Eigen::Vector2d::Zero());

  const double ce_coeff = 1.0 - w.alpha - w.beta;
  out.cls = weighted_ce(logits, labels, w, &out.grad_logits, ce_coeff);
  out.std_ = n >= 2 ? contrastive(embeddings, make_pairs_std(labels), w.margin,
                                  &out.grad_embeddings, w.alpha)
                    : 0.0;
  out.enh = contrastive(embeddings, make_pairs_enh(provenance), w.margin, &out.grad_embeddings,
                        w.beta);
  out.reg_bona = variance_reg(embeddings, bona_idx, w.delta, &out.grad_embeddings, w.gamma);
  out.reg_spoof = variance_reg(embeddings, other_idx, w.delta, &out.grad_embeddings, w.gamma);
  out.total = ce_coeff * out.cls + w.alpha * out.std_ + w.beta * out.enh +
              w.gamma * (out.reg_bona + out.reg_spoof);
  if (!std::isfinite(out.total)) throw Error(ErrorCode::kNumeric, "racl_total: non-finite loss");
  return out;
}

}  // namespace racl
