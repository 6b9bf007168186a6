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
#include <cstdio>
#include <string>
#include <vector>

#include <doctest.h>

#include "racl/features.hpp"
#include "racl/model.hpp"
#include "racl/rng.hpp"

namespace {

racl::HeadConfig tiny_cfg() {
  racl::HeadConfig cfg;
  cfg.input_dim = 5;
  cfg.hidden = 4;
  cfg.embedding = 3;
  return cfg;
}

Eigen::MatrixXd random_input(long T, long D, uint64_t seed) {
  racl::Rng rng(seed);
  Eigen::MatrixXd m(T, D);
  for (long i = 0; i < T; ++i)
    for (long j = 0; j < D; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

racl::TrainableParams tiny_params(uint64_t seed) {
  racl::TrainableParams p;
  p.kernel = racl::init_kernel(3, seed);
  p.head = racl::HeadParams::init(tiny_cfg(), seed + 1);
  return p;
}

double param_max_abs_diff(const racl::TrainableParams& a, const racl::TrainableParams& b) {
  double worst = 0.0;
  std::vector<Eigen::VectorXd> flat_a, flat_b;
  a.for_each_tensor([&](const std::string&, const Eigen::Ref<const Eigen::VectorXd>& v) {
    flat_a.push_back(v);
  });
  b.for_each_tensor([&](const std::string&, const Eigen::Ref<const Eigen::VectorXd>& v) {
    flat_b.push_back(v);
  });
  REQUIRE(flat_a.size() == flat_b.size());
  for (size_t i = 0; i < flat_a.size(); ++i) {
    REQUIRE(flat_a[i].size() == flat_b[i].size());
    worst = std::max(worst, (flat_a[i] - flat_b[i]).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

TEST_CASE("zero parameters give zero logits and uniform attention") {
  const racl::HeadConfig cfg = tiny_cfg();
  const racl::HeadParams params = racl::HeadParams::zeros(cfg);
  const Eigen::MatrixXd input = random_input(6, cfg.input_dim, 31);
  const racl::ForwardTape tape = racl::head_forward(input, params);
  CHECK(tape.logits(0) == 0.0);
  CHECK(tape.logits(1) == 0.0);
  for (long t = 0; t < 6; ++t) CHECK(tape.alpha(t) == doctest::Approx(1.0 / 6.0));
  CHECK(tape.embedding.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("attention pooling is invariant to score shifts") {
  // adding a constant to the attention bias leaves alpha unchanged
  const racl::HeadConfig cfg = tiny_cfg();
  racl::HeadParams params = racl::HeadParams::init(cfg, 32);
  const Eigen::MatrixXd input = random_input(5, cfg.input_dim, 33);
  const racl::ForwardTape a = racl::head_forward(input, params);
  params.attn_b(0) += 12.5;
  const racl::ForwardTape b = racl::head_forward(input, params);
  CHECK((a.alpha - b.alpha).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((a.logits - b.logits).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("head_backward matches finite differences for params and input") {
  const racl::HeadConfig cfg = tiny_cfg();
  racl::HeadParams params = racl::HeadParams::init(cfg, 34);
  const Eigen::MatrixXd input = random_input(4, cfg.input_dim, 35);

  // arbitrary smooth scalar loss over logits and embedding
  const Eigen::Vector2d cl(0.7, -0.4);
  racl::Rng rng(36);
  Eigen::VectorXd ce(cfg.embedding);
  for (int i = 0; i < cfg.embedding; ++i) ce(i) = rng.uniform(-1.0, 1.0);
  auto loss = [&](const Eigen::MatrixXd& in, const racl::HeadParams& p) {
    const racl::ForwardTape tape = racl::head_forward(in, p);
    return cl.dot(tape.logits) + ce.dot(tape.embedding);
  };

  const racl::ForwardTape tape = racl::head_forward(input, params);
  const racl::HeadGrads grads = racl::head_backward(tape, params, cl, ce);

  const double h = 1e-6;
  // input gradient
  for (long i = 0; i < input.rows(); ++i) {
    for (long j = 0; j < input.cols(); ++j) {
      Eigen::MatrixXd ip = input, im = input;
      ip(i, j) += h;
      im(i, j) -= h;
      const double numeric = (loss(ip, params) - loss(im, params)) / (2.0 * h);
      CHECK(std::abs(grads.grad_input(i, j) - numeric) < 1e-6);
    }
  }

  // parameter gradients, spot-checked coordinate by coordinate
  auto check_tensor = [&](Eigen::Ref<Eigen::VectorXd> theta, const Eigen::VectorXd& analytic) {
    for (long i = 0; i < theta.size(); ++i) {
      const double orig = theta(i);
      theta(i) = orig + h;
      const double up = loss(input, params);
      theta(i) = orig - h;
      const double dn = loss(input, params);
      theta(i) = orig;
      CHECK(std::abs(analytic(i) - (up - dn) / (2.0 * h)) < 1e-6);
    }
  };
  check_tensor(params.attn_w, grads.params.attn_w);
  check_tensor(params.attn_b, grads.params.attn_b);
  check_tensor(params.b1, grads.params.b1);
  check_tensor(params.b2, grads.params.b2);
  check_tensor(params.b3, grads.params.b3);
  Eigen::Map<Eigen::VectorXd> w1(params.w1.data(), params.w1.size());
  check_tensor(w1, Eigen::Map<const Eigen::VectorXd>(grads.params.w1.data(), grads.params.w1.size()));
  Eigen::Map<Eigen::VectorXd> w2(params.w2.data(), params.w2.size());
  check_tensor(w2, Eigen::Map<const Eigen::VectorXd>(grads.params.w2.data(), grads.params.w2.size()));
  Eigen::Map<Eigen::VectorXd> w3(params.w3.data(), params.w3.size());
  check_tensor(w3, Eigen::Map<const Eigen::VectorXd>(grads.params.w3.data(), grads.params.w3.size()));
}

TEST_CASE("Adam first step moves each coordinate by lr against the gradient sign") {
  racl::OptimizerConfig cfg;
  cfg.weight_decay = 0.0;
  racl::TrainableParams params = tiny_params(40);
  const racl::TrainableParams before = params;

  racl::TrainableParams grads = tiny_params(41);
  // nonzero gradients everywhere
  grads.for_each_tensor([](const std::string&, Eigen::Ref<Eigen::VectorXd> v) {
    for (long i = 0; i < v.size(); ++i) v(i) = (v(i) >= 0.0 ? 1.0 : -1.0) * (0.5 + std::abs(v(i)));
  });

  racl::AdamOptimizer opt(cfg, params);
  opt.step(params, grads, 5e-4);
  CHECK(opt.step_count() == 1);

  // first step after bias correction: delta = -lr * g / (|g| + eps)
  std::vector<Eigen::VectorXd> p0, p1, g;
  before.for_each_tensor([&](const std::string&, const Eigen::Ref<const Eigen::VectorXd>& v) {
    p0.push_back(v);
  });
  params.for_each_tensor([&](const std::string&, const Eigen::Ref<const Eigen::VectorXd>& v) {
    p1.push_back(v);
  });
  grads.for_each_tensor([&](const std::string&, const Eigen::Ref<const Eigen::VectorXd>& v) {
    g.push_back(v);
  });
  for (size_t t = 0; t < p0.size(); ++t) {
    for (long i = 0; i < p0[t].size(); ++i) {
      const double delta = p1[t](i) - p0[t](i);
      const double expected = -5e-4 * g[t](i) / (std::abs(g[t](i)) + 1e-8);
      CHECK(delta == doctest::Approx(expected).epsilon(1e-6));
    }
  }
}

TEST_CASE("Adam leaves parameters alone under zero gradients and no decay") {
  racl::OptimizerConfig cfg;
  cfg.weight_decay = 0.0;
  racl::TrainableParams params = tiny_params(42);
  const racl::TrainableParams before = params;
  racl::TrainableParams grads = params;
  grads.for_each_tensor([](const std::string&, Eigen::Ref<Eigen::VectorXd> v) { v.setZero(); });

  racl::AdamOptimizer opt(cfg, params);
  for (int s = 0; s < 3; ++s) opt.step(params, grads, 1e-3);
  CHECK(param_max_abs_diff(params, before) == 0.0);
}

TEST_CASE("weight decay shrinks parameters even with zero gradients") {
  racl::OptimizerConfig cfg;  // weight_decay = 5e-4
  racl::TrainableParams params = tiny_params(43);
  params.kernel.setConstant(1.0);
  racl::TrainableParams grads = params;
  grads.for_each_tensor([](const std::string&, Eigen::Ref<Eigen::VectorXd> v) { v.setZero(); });

  racl::AdamOptimizer opt(cfg, params);
  opt.step(params, grads, 1e-3);
  // effective gradient is wd * theta = 5e-4; step ~ lr * sign
  CHECK(params.kernel(0) < 1.0);
  CHECK(params.kernel(0) > 1.0 - 2e-3);
}

TEST_CASE("lr_at applies step decay") {
  racl::OptimizerConfig cfg;  // base 5e-4, halve every 10 epochs
  CHECK(racl::lr_at(cfg, 0) == doctest::Approx(5e-4));
  CHECK(racl::lr_at(cfg, 9) == doctest::Approx(5e-4));
  CHECK(racl::lr_at(cfg, 10) == doctest::Approx(2.5e-4));
  CHECK(racl::lr_at(cfg, 25) == doctest::Approx(1.25e-4));
}

TEST_CASE("averaging_window selects the best epoch and its predecessors") {
  // best at index 0: window is just {0}
  CHECK(racl::averaging_window({1.0, 2.0, 3.0}) == std::vector<int>{0});
  // best at index 2 with only two predecessors
  CHECK(racl::averaging_window({3.0, 2.0, 1.0}) == std::vector<int>{0, 1, 2});
  // best mid-run: four predecessors
  CHECK(racl::averaging_window({9, 8, 7, 6, 5, 4, 1, 2, 3}) ==
        std::vector<int>{2, 3, 4, 5, 6});
  // ties resolve to the earliest best epoch
  CHECK(racl::averaging_window({2.0, 1.0, 1.0}) == std::vector<int>{0, 1});
  // custom window size
  CHECK(racl::averaging_window({5, 4, 3, 2, 1}, 2) == std::vector<int>{3, 4});
}

TEST_CASE("average_checkpoints is the elementwise mean") {
  racl::Checkpoint a, b;
  a.params = tiny_params(44);
  b.params = tiny_params(45);

  // averaging identical checkpoints is the identity
  const racl::TrainableParams same = racl::average_checkpoints({a, a, a});
  CHECK(param_max_abs_diff(same, a.params) < 1e-15);

  // two distinct checkpoints: midpoint
  const racl::TrainableParams mid = racl::average_checkpoints({a, b});
  racl::TrainableParams want = a.params;
  std::vector<Eigen::VectorXd> flat_b;
  b.params.for_each_tensor([&](const std::string&, const Eigen::Ref<const Eigen::VectorXd>& v) {
    flat_b.push_back(v);
  });
  size_t idx = 0;
  want.for_each_tensor([&](const std::string&, Eigen::Ref<Eigen::VectorXd> v) {
    v = 0.5 * (v + flat_b[idx++]);
  });
  CHECK(param_max_abs_diff(mid, want) < 1e-15);
}

TEST_CASE("checkpoint serialization round-trips bit-exactly") {
  racl::Checkpoint ckpt;
  ckpt.epoch = 17;
  ckpt.val_loss = 0.123456789123456789;
  ckpt.config_hash = 0xDEADBEEFCAFEF00DULL;
  ckpt.params = tiny_params(46);

  const std::string path = "/tmp/racl_test_ckpt.bin";
  racl::save_checkpoint(path, ckpt);
  const racl::Checkpoint back = racl::load_checkpoint(path);
  std::remove(path.c_str());

  CHECK(back.epoch == 17);
  CHECK(back.val_loss == ckpt.val_loss);
  CHECK(back.config_hash == ckpt.config_hash);
  CHECK(param_max_abs_diff(back.params, ckpt.params) == 0.0);
}

TEST_CASE("load_checkpoint rejects garbage") {
  const std::string path = "/tmp/racl_test_bad_ckpt.bin";
  {
    FILE* f = std::fopen(path.c_str(), "wb");
    REQUIRE(f != nullptr);
    std::fputs("not a checkpoint", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(racl::load_checkpoint(path), racl::Error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(racl::load_checkpoint("/tmp/does_not_exist_racl.bin"), racl::Error);
}
