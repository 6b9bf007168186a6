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

#include "racl/features.hpp"

#include <cmath>

#include "racl/rng.hpp"

namespace racl {

namespace {
constexpr double kLogFloor = 1e-10;

Eigen::MatrixXd random_matrix(long rows, long cols, double scale, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) m(i, j) = rng.uniform(-scale, scale);
  return m;
}
}  // namespace

FrozenExtractor::FrozenExtractor(uint64_t seed, int num_layers, int dim,
                                 SpectrogramConfig spec_cfg, int sample_rate)
    : num_layers_(num_layers), dim_(dim), spec_cfg_(spec_cfg), sample_rate_(sample_rate) {
  if (num_layers < 1 || dim < 1)
    throw Error(ErrorCode::kConfig, "extractor needs at least one layer and one dim");
  spec_cfg.validate(sample_rate);
  filterbank_ = mel_filterbank(spec_cfg, sample_rate);

  Rng rng(Rng::derive(seed, "extractor", 0));
  input_proj_ = random_matrix(dim, spec_cfg.mel_bins, 1.0 / std::sqrt(spec_cfg.mel_bins), rng);
  layer_w_.reserve(static_cast<size_t>(num_layers));
  layer_b_.reserve(static_cast<size_t>(num_layers));
  for (int l = 0; l < num_layers; ++l) {
    layer_w_.push_back(random_matrix(dim, dim, 1.0 / std::sqrt(dim), rng));
    Eigen::VectorXd b(dim);
    for (int j = 0; j < dim; ++j) b(j) = rng.uniform(-0.1, 0.1);
    layer_b_.push_back(std::move(b));
  }
}

FeatureStack FrozenExtractor::extract(const AudioClip& clip) const {
  if (clip.sample_rate != sample_rate_)
    throw Error(ErrorCode::kShape, "extract: clip not at the working rate");
  // Non-centered framing: T = (len - fft)/hop + 1.
  const Eigen::MatrixXd mag = stft(clip.samples, spec_cfg_, false).cwiseAbs();
  const Eigen::MatrixXd mel = mel_project(mag, filterbank_);
  Eigen::MatrixXd logmel = (mel.array() + kLogFloor).log().matrix();  // T x mel_bins
  // Per-utterance standardization keeps the tanh layers out of saturation.
  const double mean = logmel.mean();
  const double sd = std::sqrt((logmel.array() - mean).square().mean());
  logmel = ((logmel.array() - mean) / (sd > 1e-12 ? sd : 1.0)).matrix();

  FeatureStack stack;
  stack.layers.reserve(static_cast<size_t>(num_layers_));
  Eigen::MatrixXd h = logmel * input_proj_.transpose();  // T x D
  for (int l = 0; l < num_layers_; ++l) {
    Eigen::MatrixXd pre = h * layer_w_[l].transpose();
    pre.rowwise() += layer_b_[l].transpose();
    h = pre.array().tanh().matrix();
    stack.layers.push_back(h);
  }
  return stack;
}

Eigen::VectorXd gap(const FeatureStack& stack) {
  const int L = stack.num_layers();
  Eigen::VectorXd z(L);
  for (int l = 0; l < L; ++l) z(l) = stack.layers[static_cast<size_t>(l)].mean();
  return z;
}

int adaptive_kernel_size(int num_layers) {
  if (num_layers < 1) throw Error(ErrorCode::kConfig, "adaptive_kernel_size: L must be >= 1");
  const double v = std::abs(std::log2(static_cast<double>(num_layers)) / 2.0 + 0.5);
  int k = 2 * static_cast<int>(std::llround((v - 1.0) / 2.0)) + 1;  // nearest odd
  k = std::max(k, 3);
  const int cap = (num_layers % 2 == 1) ? num_layers : num_layers - 1;
  return std::min(k, std::max(cap, 1));
}

namespace {
// Same-length 1-D convolution with zero padding of width (k-1)/2.
Eigen::VectorXd conv1d_same(const Eigen::VectorXd& z, const Eigen::VectorXd& kernel) {
  const int L = static_cast<int>(z.size());
  const int k = static_cast<int>(kernel.size());
  const int half = (k - 1) / 2;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(L);
  for (int l = 0; l < L; ++l) {
    for (int j = -half; j <= half; ++j) {
      const int src = l + j;
      if (src >= 0 && src < L) out(l) += kernel(j + half) * z(src);
    }
  }
  return out;
}
}  // namespace

AggregateResult aggregate(const FeatureStack& stack, const Eigen::VectorXd& kernel) {
  const int L = stack.num_layers();
  const int k = static_cast<int>(kernel.size());
  if (k % 2 == 0) throw Error(ErrorCode::kConfig, "aggregate: kernel length must be odd");
  if (k > L) throw Error(ErrorCode::kConfig, "aggregate: kernel longer than layer count");
  for (const auto& layer : stack.layers) {
    if (layer.rows() != stack.frames() || layer.cols() != stack.dims())
      throw Error(ErrorCode::kShape, "aggregate: layers disagree in shape");
  }

  AggregateResult r;
  r.z = gap(stack);
  r.conv = conv1d_same(r.z, kernel);
  r.weights = (1.0 / (1.0 + (-r.conv.array()).exp())).matrix();
  r.agg = Eigen::MatrixXd::Zero(stack.frames(), stack.dims());
  for (int l = 0; l < L; ++l) r.agg += r.weights(l) * stack.layers[static_cast<size_t>(l)];
  return r;
}

Eigen::VectorXd aggregate_backward_kernel(const FeatureStack& stack, const Eigen::VectorXd& kernel,
                                          const AggregateResult& fwd,
                                          const Eigen::MatrixXd& grad_agg) {
  const int L = stack.num_layers();
  const int k = static_cast<int>(kernel.size());
  const int half = (k - 1) / 2;

  // d(loss)/d(omega_l) = <grad_agg, F_l>
  Eigen::VectorXd grad_omega(L);
  for (int l = 0; l < L; ++l)
    grad_omega(l) = grad_agg.cwiseProduct(stack.layers[static_cast<size_t>(l)]).sum();

  // through the sigmoid
  Eigen::VectorXd grad_conv =
      grad_omega.array() * fwd.weights.array() * (1.0 - fwd.weights.array());

  // conv(l) = sum_j kernel(j+half) * z(l+j)
  Eigen::VectorXd grad_kernel = Eigen::VectorXd::Zero(k);
  for (int l = 0; l < L; ++l) {
    for (int j = -half; j <= half; ++j) {
      const int src = l + j;
      if (src >= 0 && src < L) grad_kernel(j + half) += grad_conv(l) * fwd.z(src);
    }
  }
  return grad_kernel;
}

Eigen::VectorXd init_kernel(int k, uint64_t seed) {
  Rng rng(Rng::derive(seed, "agg_kernel", 0));
  Eigen::VectorXd kernel(k);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  for (int i = 0; i < k; ++i) kernel(i) = rng.uniform(-scale, scale);
  return kernel;
}

}  // namespace racl
