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

#include <cmath>

#include <doctest.h>

#include "racl/features.hpp"
#include "racl/rng.hpp"
#include "racl/synthcorpus.hpp"

namespace {

racl::FeatureStack random_stack(int L, long T, long D, uint64_t seed) {
  racl::Rng rng(seed);
  racl::FeatureStack stack;
  for (int l = 0; l < L; ++l) {
    Eigen::MatrixXd m(T, D);
    for (long i = 0; i < T; ++i)
      for (long j = 0; j < D; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
    stack.layers.push_back(std::move(m));
  }
  return stack;
}

racl::AudioClip short_clip(int index) {
  racl::CorpusSpec spec;
  spec.duration_s = 1.0;
  return racl::synth_clip(spec, racl::Provenance::kBonaFide, index);
}

}  // namespace

TEST_CASE("extract is deterministic with the expected shape") {
  racl::SpectrogramConfig cfg;
  const racl::FrozenExtractor ex(1234, 12, 64, cfg, 16000);
  const racl::AudioClip clip = short_clip(0);

  const racl::FeatureStack a = ex.extract(clip);
  const racl::FeatureStack b = ex.extract(clip);
  REQUIRE(a.num_layers() == 12);
  CHECK(a.frames() == (static_cast<long>(clip.samples.size()) - cfg.fft_size) / cfg.hop + 1);
  CHECK(a.dims() == 64);
  for (int l = 0; l < 12; ++l)
    CHECK((a.layers[static_cast<size_t>(l)] - b.layers[static_cast<size_t>(l)])
              .cwiseAbs()
              .maxCoeff() == 0.0);

  // a different seed changes the stack
  const racl::FrozenExtractor other(4321, 12, 64, cfg, 16000);
  CHECK((other.extract(clip).layers[0] - a.layers[0]).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("extract of silence gives frames identical across time") {
  racl::SpectrogramConfig cfg;
  const racl::FrozenExtractor ex(1234, 4, 16, cfg, 16000);
  racl::AudioClip clip;
  clip.sample_rate = 16000;
  clip.samples.assign(16000, 0.0);
  const racl::FeatureStack stack = ex.extract(clip);
  for (const auto& layer : stack.layers)
    for (long t = 1; t < layer.rows(); ++t)
      CHECK((layer.row(t) - layer.row(0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gap is the arithmetic mean of each layer") {
  racl::FeatureStack stack;
  stack.layers.push_back(Eigen::MatrixXd::Ones(3, 5));
  Eigen::MatrixXd m(2, 2);
  m << 1, 3, 5, 7;
  stack.layers.push_back(m);
  stack.layers.push_back(Eigen::MatrixXd::Zero(2, 2));
  // gap ignores cross-layer shape here; construct separately per layer
  racl::FeatureStack ones_only, m_only, zero_only;
  ones_only.layers = {stack.layers[0]};
  m_only.layers = {stack.layers[1]};
  zero_only.layers = {stack.layers[2]};
  CHECK(racl::gap(ones_only)(0) == doctest::Approx(1.0));
  CHECK(racl::gap(m_only)(0) == doctest::Approx(4.0));
  CHECK(racl::gap(zero_only)(0) == doctest::Approx(0.0));
}

TEST_CASE("gap is linear") {
  const racl::FeatureStack f = random_stack(3, 4, 5, 10);
  const racl::FeatureStack g = random_stack(3, 4, 5, 11);
  racl::FeatureStack combo;
  for (int l = 0; l < 3; ++l)
    combo.layers.push_back(2.0 * f.layers[static_cast<size_t>(l)] -
                           0.5 * g.layers[static_cast<size_t>(l)]);
  const Eigen::VectorXd want = 2.0 * racl::gap(f) - 0.5 * racl::gap(g);
  CHECK((racl::gap(combo) - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("adaptive_kernel_size follows the published formula") {
  CHECK(racl::adaptive_kernel_size(24) == 3);
  CHECK(racl::adaptive_kernel_size(1) == 1);
  CHECK(racl::adaptive_kernel_size(256) == 5);
  CHECK(racl::adaptive_kernel_size(12) == 3);
  // always odd and within [1, L]
  for (int L = 1; L <= 64; ++L) {
    const int k = racl::adaptive_kernel_size(L);
    CHECK(k % 2 == 1);
    CHECK(k >= 1);
    CHECK(k <= L);
  }
}

TEST_CASE("aggregate with a zero kernel weights every layer by one half") {
  const racl::FeatureStack stack = random_stack(5, 3, 4, 12);
  const racl::AggregateResult r = racl::aggregate(stack, Eigen::VectorXd::Zero(3));
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(3, 4);
  for (const auto& layer : stack.layers) want += 0.5 * layer;
  for (int l = 0; l < 5; ++l) CHECK(r.weights(l) == doctest::Approx(0.5));
  CHECK((r.agg - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("aggregate handles L = 1 and rejects even kernels") {
  racl::FeatureStack stack = random_stack(1, 2, 3, 13);
  stack.layers[0].setConstant(2.0);
  Eigen::VectorXd kernel(1);
  kernel << 0.7;
  // z = gap = 2, conv = 1.4
  const racl::AggregateResult r = racl::aggregate(stack, kernel);
  CHECK(r.weights(0) == doctest::Approx(1.0 / (1.0 + std::exp(-1.4))));
  CHECK(r.agg(0, 0) == doctest::Approx(2.0 * r.weights(0)));

  CHECK_THROWS_AS(racl::aggregate(stack, Eigen::VectorXd::Zero(2)), racl::Error);
  CHECK_THROWS_AS(racl::aggregate(stack, Eigen::VectorXd::Zero(3)), racl::Error);
}

TEST_CASE("aggregate weights stay strictly inside (0, 1)") {
  const racl::FeatureStack stack = random_stack(8, 3, 3, 14);
  Eigen::VectorXd kernel(3);
  kernel << 50.0, -80.0, 120.0;  // extreme values
  const racl::AggregateResult r = racl::aggregate(stack, kernel);
  for (int l = 0; l < 8; ++l) {
    CHECK(r.weights(l) > 0.0);
    CHECK(r.weights(l) < 1.0);
  }
}

TEST_CASE("aggregate is equivariant under layer reversal with a symmetric kernel") {
  const racl::FeatureStack stack = random_stack(6, 3, 4, 15);
  racl::FeatureStack reversed;
  for (int l = 5; l >= 0; --l) reversed.layers.push_back(stack.layers[static_cast<size_t>(l)]);
  Eigen::VectorXd kernel(3);
  kernel << 0.4, -0.2, 0.4;  // palindrome
  const racl::AggregateResult a = racl::aggregate(stack, kernel);
  const racl::AggregateResult b = racl::aggregate(reversed, kernel);
  CHECK((a.agg - b.agg).cwiseAbs().maxCoeff() < 1e-12);
  for (int l = 0; l < 6; ++l) CHECK(a.weights(l) == doctest::Approx(b.weights(5 - l)));
}

TEST_CASE("kernel gradient matches central finite differences") {
  const racl::FeatureStack stack = random_stack(7, 4, 5, 16);
  Eigen::VectorXd kernel = racl::init_kernel(3, 99);

  // scalar loss: weighted sum of agg entries
  racl::Rng rng(17);
  Eigen::MatrixXd weights(4, 5);
  for (long i = 0; i < 4; ++i)
    for (long j = 0; j < 5; ++j) weights(i, j) = rng.uniform(-1.0, 1.0);
  auto loss = [&](const Eigen::VectorXd& k) {
    return (racl::aggregate(stack, k).agg.array() * weights.array()).sum();
  };

  const racl::AggregateResult fwd = racl::aggregate(stack, kernel);
  const Eigen::VectorXd analytic = racl::aggregate_backward_kernel(stack, kernel, fwd, weights);

  const double h = 1e-6;
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd kp = kernel, km = kernel;
    kp(i) += h;
    km(i) -= h;
    const double numeric = (loss(kp) - loss(km)) / (2.0 * h);
    CHECK(std::abs(analytic(i) - numeric) / std::max(1.0, std::abs(numeric)) < 1e-4);
  }
}
