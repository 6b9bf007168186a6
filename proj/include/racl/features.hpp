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

#ifndef RACL_FEATURES_HPP
#define RACL_FEATURES_HPP

#include <Eigen/Dense>
#include <vector>

#include "racl/common.hpp"
#include "racl/dsp.hpp"

namespace racl {

// L layers of T x D frame features from the frozen extractor.
struct FeatureStack {
  std::vector<Eigen::MatrixXd> layers;

  int num_layers() const { return static_cast<int>(layers.size()); }
  long frames() const { return layers.empty() ? 0 : layers[0].rows(); }
  long dims() const { return layers.empty() ? 0 : layers[0].cols(); }
};

// Frozen stand-in for a pretrained multi-layer transformer: log-mel frames
// projected to D dims, then L affine+tanh layers whose weights are drawn
// once from the seed. Contributes no trainable parameters.
class FrozenExtractor {
 public:
  FrozenExtractor(uint64_t seed, int num_layers, int dim, SpectrogramConfig spec_cfg,
                  int sample_rate);

  FeatureStack extract(const AudioClip& clip) const;

  int num_layers() const { return num_layers_; }
  int dim() const { return dim_; }

 private:
  int num_layers_;
  int dim_;
  SpectrogramConfig spec_cfg_;
  int sample_rate_;
  Eigen::MatrixXd filterbank_;
  Eigen::MatrixXd input_proj_;              // D x mel_bins
  std::vector<Eigen::MatrixXd> layer_w_;    // D x D each
  std::vector<Eigen::VectorXd> layer_b_;    // D each
};

// Per-layer scalar descriptors: z_l = mean over all T x D entries of layer l.
Eigen::VectorXd gap(const FeatureStack& stack);

// Odd kernel size adapted to the layer count (from the channel-attention
// design this aggregation follows): nearest odd to |log2(L)/2 + 1/2|,
// floored at 3, capped at L (L-1 when L is even).
int adaptive_kernel_size(int num_layers);

struct AggregateResult {
  Eigen::VectorXd z;        // descriptors, length L
  Eigen::VectorXd conv;     // pre-sigmoid convolution output
  Eigen::VectorXd weights;  // omega, each in (0, 1)
  Eigen::MatrixXd agg;      // sum_l omega_l * F_l, T x D
};

// omega = sigmoid(same-length zero-padded 1-D convolution of z with kernel);
// agg = sum_l omega_l F_l. kernel length must be odd and <= L.
AggregateResult aggregate(const FeatureStack& stack, const Eigen::VectorXd& kernel);

// d(loss)/d(kernel) given d(loss)/d(agg), chaining through omega and the
// convolution. The stack itself is frozen, so no input gradient is produced.
Eigen::VectorXd aggregate_backward_kernel(const FeatureStack& stack, const Eigen::VectorXd& kernel,
                                          const AggregateResult& fwd,
                                          const Eigen::MatrixXd& grad_agg);

// Kernel init: uniform in [-1/sqrt(k), 1/sqrt(k)], seeded.
Eigen::VectorXd init_kernel(int k, uint64_t seed);

}  // namespace racl

#endif  // RACL_FEATURES_HPP
