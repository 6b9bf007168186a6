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

#include "racl/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace racl {

namespace {

Eigen::MatrixXd uniform_matrix(long rows, long cols, double scale, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) m(i, j) = rng.uniform(-scale, scale);
  return m;
}

}  // namespace

HeadParams HeadParams::init(const HeadConfig& cfg, uint64_t seed) {
  Rng rng(Rng::derive(seed, "head", 0));
  HeadParams p;
  p.attn_w = uniform_matrix(cfg.input_dim, 1, 1.0 / std::sqrt(cfg.input_dim), rng);
  p.attn_b = Eigen::VectorXd::Zero(1);
  p.w1 = uniform_matrix(cfg.hidden, cfg.input_dim, 1.0 / std::sqrt(cfg.input_dim), rng);
  p.b1 = Eigen::VectorXd::Zero(cfg.hidden);
  p.w2 = uniform_matrix(cfg.embedding, cfg.hidden, 1.0 / std::sqrt(cfg.hidden), rng);
  p.b2 = Eigen::VectorXd::Zero(cfg.embedding);
  p.w3 = uniform_matrix(2, cfg.embedding, 1.0 / std::sqrt(cfg.embedding), rng);
  p.b3 = Eigen::VectorXd::Zero(2);
  return p;
}

HeadParams HeadParams::zeros(const HeadConfig& cfg) {
  HeadParams p;
  p.attn_w = Eigen::VectorXd::Zero(cfg.input_dim);
  p.attn_b = Eigen::VectorXd::Zero(1);
  p.w1 = Eigen::MatrixXd::Zero(cfg.hidden, cfg.input_dim);
  p.b1 = Eigen::VectorXd::Zero(cfg.hidden);
  p.w2 = Eigen::MatrixXd::Zero(cfg.embedding, cfg.hidden);
  p.b2 = Eigen::VectorXd::Zero(cfg.embedding);
  p.w3 = Eigen::MatrixXd::Zero(2, cfg.embedding);
  p.b3 = Eigen::VectorXd::Zero(2);
  return p;
}

namespace {

template <class Params, class Fn>
void visit_tensors(Params& p, Fn&& fn) {
  using Map = std::conditional_t<std::is_const_v<Params>, Eigen::Map<const Eigen::VectorXd>,
                                 Eigen::Map<Eigen::VectorXd>>;
  fn("agg.kernel", Map(p.kernel.data(), p.kernel.size()));
  fn("head.attn_w", Map(p.head.attn_w.data(), p.head.attn_w.size()));
  fn("head.attn_b", Map(p.head.attn_b.data(), p.head.attn_b.size()));
  fn("head.w1", Map(p.head.w1.data(), p.head.w1.size()));
  fn("head.b1", Map(p.head.b1.data(), p.head.b1.size()));
  fn("head.w2", Map(p.head.w2.data(), p.head.w2.size()));
  fn("head.b2", Map(p.head.b2.data(), p.head.b2.size()));
  fn("head.w3", Map(p.head.w3.data(), p.head.w3.size()));
  fn("head.b3", Map(p.head.b3.data(), p.head.b3.size()));
}

}  // namespace

void TrainableParams::for_each_tensor(
    const std::function<void(const std::string&, Eigen::Ref<Eigen::VectorXd>)>& fn) {
  visit_tensors(*this, [&fn](const char* name, Eigen::Map<Eigen::VectorXd> v) {
    fn(name, Eigen::Ref<Eigen::VectorXd>(v));
  });
}

void TrainableParams::for_each_tensor(
    const std::function<void(const std::string&, const Eigen::Ref<const Eigen::VectorXd>&)>& fn)
    const {
  visit_tensors(*this, [&fn](const char* name, Eigen::Map<const Eigen::VectorXd> v) {
    fn(name, Eigen::Ref<const Eigen::VectorXd>(v));
  });
}

size_t TrainableParams::total_size() const {
  size_t n = 0;
  for_each_tensor([&n](const std::string&, const Eigen::Ref<const Eigen::VectorXd>& v) {
    n += static_cast<size_t>(v.size());
  });
  return n;
}

ForwardTape head_forward(const Eigen::MatrixXd& agg, const HeadParams& params) {
  if (!agg.allFinite()) throw Error(ErrorCode::kNumeric, "head_forward: non-finite input");
  if (agg.cols() != params.attn_w.size())
    throw Error(ErrorCode::kShape, "head_forward: input dim mismatch");

  ForwardTape t;
  t.input = agg;
  t.scores = agg * params.attn_w;
  t.scores.array() += params.attn_b(0);
  // softmax over frames, shift-invariant
  const double mx = t.scores.maxCoeff();
  t.alpha = (t.scores.array() - mx).exp();
  t.alpha /= t.alpha.sum();
  t.pooled = agg.transpose() * t.alpha;
  t.h1 = ((params.w1 * t.pooled + params.b1).array().tanh()).matrix();
  t.embedding = ((params.w2 * t.h1 + params.b2).array().tanh()).matrix();
  t.logits = params.w3 * t.embedding + params.b3;
  return t;
}

HeadGrads head_backward(const ForwardTape& tape, const HeadParams& params,
                        const Eigen::Vector2d& grad_logits, const Eigen::VectorXd& grad_embedding) {
  if (grad_embedding.size() != tape.embedding.size())
    throw Error(ErrorCode::kShape, "head_backward: embedding gradient shape mismatch");

  HeadGrads g;
  g.params.w3 = grad_logits * tape.embedding.transpose();
  g.params.b3 = grad_logits;

  const Eigen::VectorXd g_emb_total = params.w3.transpose() * grad_logits + grad_embedding;
  const Eigen::VectorXd g_epre =
      (g_emb_total.array() * (1.0 - tape.embedding.array().square())).matrix();
  g.params.w2 = g_epre * tape.h1.transpose();
  g.params.b2 = g_epre;

  const Eigen::VectorXd g_h1 = params.w2.transpose() * g_epre;
  const Eigen::VectorXd g_h1pre = (g_h1.array() * (1.0 - tape.h1.array().square())).matrix();
  g.params.w1 = g_h1pre * tape.pooled.transpose();
  g.params.b1 = g_h1pre;

  const Eigen::VectorXd g_pooled = params.w1.transpose() * g_h1pre;

  // pooled = X^T alpha
  const Eigen::VectorXd g_alpha = tape.input * g_pooled;                    // T
  const double dot = tape.alpha.dot(g_alpha);
  const Eigen::VectorXd g_scores = (tape.alpha.array() * (g_alpha.array() - dot)).matrix();

  g.params.attn_w = tape.input.transpose() * g_scores;
  g.params.attn_b = Eigen::VectorXd::Constant(1, g_scores.sum());

  g.grad_input = tape.alpha * g_pooled.transpose();  // from pooling
  g.grad_input += g_scores * params.attn_w.transpose();  // from attention scores
  return g;
}

AdamOptimizer::AdamOptimizer(const OptimizerConfig& cfg, const TrainableParams& shape_like)
    : cfg_(cfg) {
  shape_like.for_each_tensor([this](const std::string&, const Eigen::Ref<const Eigen::VectorXd>& v) {
    m_.push_back(Eigen::VectorXd::Zero(v.size()));
    v_.push_back(Eigen::VectorXd::Zero(v.size()));
  });
}

void AdamOptimizer::step(TrainableParams& params, const TrainableParams& grads, double lr) {
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));

  std::vector<Eigen::VectorXd> grad_list;
  grads.for_each_tensor([&grad_list](const std::string&, const Eigen::Ref<const Eigen::VectorXd>& v) {
    grad_list.emplace_back(v);
  });

  size_t idx = 0;
  params.for_each_tensor([&](const std::string&, Eigen::Ref<Eigen::VectorXd> theta) {
    if (grad_list[idx].size() != theta.size())
      throw Error(ErrorCode::kShape, "adam_step: gradient shape mismatch");
    const Eigen::VectorXd g = grad_list[idx] + cfg_.weight_decay * theta;
    m_[idx] = cfg_.beta1 * m_[idx] + (1.0 - cfg_.beta1) * g;
    v_[idx] = cfg_.beta2 * v_[idx] + (1.0 - cfg_.beta2) * g.cwiseProduct(g);
    theta -= (lr * (m_[idx] / bc1).array() / ((v_[idx] / bc2).array().sqrt() + cfg_.eps)).matrix();
    ++idx;
  });
}

double lr_at(const OptimizerConfig& cfg, int epoch) {
  if (epoch < 0) throw Error(ErrorCode::kConfig, "lr_at: negative epoch");
  return cfg.base_lr * std::pow(cfg.lr_decay, epoch / cfg.lr_step_epochs);
}

namespace {

constexpr char kMagic[4] = {'R', 'A', 'C', 'L'};
constexpr uint32_t kVersion = 1;

template <class T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T read_pod(std::ifstream& in, const std::string& path) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw Error(ErrorCode::kFormat, "truncated checkpoint: " + path);
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write checkpoint: " + path);
  out.write(kMagic, 4);
  write_pod(out, kVersion);
  write_pod(out, ckpt.config_hash);
  write_pod(out, static_cast<int32_t>(ckpt.epoch));
  write_pod(out, ckpt.val_loss);

  uint32_t count = 0;
  ckpt.params.for_each_tensor(
      [&count](const std::string&, const Eigen::Ref<const Eigen::VectorXd>&) { ++count; });
  write_pod(out, count);
  ckpt.params.for_each_tensor(
      [&out](const std::string& name, const Eigen::Ref<const Eigen::VectorXd>& v) {
        const uint32_t name_len = static_cast<uint32_t>(name.size());
        write_pod(out, name_len);
        out.write(name.data(), name_len);
        const uint64_t n = static_cast<uint64_t>(v.size());
        write_pod(out, n);
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(n * sizeof(double)));
      });
  if (!out) throw Error(ErrorCode::kIo, "short write on checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open checkpoint: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw Error(ErrorCode::kFormat, "not a checkpoint file: " + path);
  const uint32_t version = read_pod<uint32_t>(in, path);
  if (version != kVersion)
    throw Error(ErrorCode::kFormat, "unsupported checkpoint version " + std::to_string(version));

  Checkpoint ckpt;
  ckpt.config_hash = read_pod<uint64_t>(in, path);
  ckpt.epoch = read_pod<int32_t>(in, path);
  ckpt.val_loss = read_pod<double>(in, path);
  const uint32_t count = read_pod<uint32_t>(in, path);

  std::vector<std::pair<std::string, Eigen::VectorXd>> tensors;
  for (uint32_t i = 0; i < count; ++i) {
    const uint32_t name_len = read_pod<uint32_t>(in, path);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const uint64_t n = read_pod<uint64_t>(in, path);
    Eigen::VectorXd v(static_cast<long>(n));
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw Error(ErrorCode::kFormat, "truncated checkpoint: " + path);
    tensors.emplace_back(std::move(name), std::move(v));
  }

  // reshape into the structured params via the tensor table
  auto find = [&tensors, &path](const std::string& name) -> const Eigen::VectorXd& {
    for (const auto& [n, v] : tensors)
      if (n == name) return v;
    throw Error(ErrorCode::kFormat, "checkpoint missing tensor " + name + ": " + path);
  };

  const Eigen::VectorXd& w1 = find("head.w1");
  const Eigen::VectorXd& attn_w = find("head.attn_w");
  const Eigen::VectorXd& b1 = find("head.b1");
  const Eigen::VectorXd& b2 = find("head.b2");
  const long D = attn_w.size();
  const long H = b1.size();
  const long E = b2.size();
  if (w1.size() != H * D) throw Error(ErrorCode::kFormat, "inconsistent tensor shapes: " + path);

  ckpt.params.kernel = find("agg.kernel");
  ckpt.params.head.attn_w = attn_w;
  ckpt.params.head.attn_b = find("head.attn_b");
  ckpt.params.head.w1 = Eigen::Map<const Eigen::MatrixXd>(w1.data(), H, D);
  ckpt.params.head.b1 = b1;
  ckpt.params.head.w2 = Eigen::Map<const Eigen::MatrixXd>(find("head.w2").data(), E, H);
  ckpt.params.head.b2 = b2;
  ckpt.params.head.w3 = Eigen::Map<const Eigen::MatrixXd>(find("head.w3").data(), 2, E);
  ckpt.params.head.b3 = find("head.b3");
  return ckpt;
}

TrainableParams average_checkpoints(const std::vector<Checkpoint>& ckpts) {
  if (ckpts.empty()) throw Error(ErrorCode::kDegenerate, "average_checkpoints: empty list");
  TrainableParams avg = ckpts[0].params;
  std::vector<Eigen::VectorXd> acc;
  avg.for_each_tensor([&acc](const std::string&, const Eigen::Ref<const Eigen::VectorXd>& v) {
    acc.push_back(Eigen::VectorXd::Zero(v.size()));
  });
  for (const auto& c : ckpts) {
    size_t idx = 0;
    c.params.for_each_tensor([&](const std::string&, const Eigen::Ref<const Eigen::VectorXd>& v) {
      if (v.size() != acc[idx].size())
        throw Error(ErrorCode::kShape, "average_checkpoints: shape mismatch");
      acc[idx] += v;
      ++idx;
    });
  }
  const double inv = 1.0 / static_cast<double>(ckpts.size());
  size_t idx = 0;
  avg.for_each_tensor([&](const std::string&, Eigen::Ref<Eigen::VectorXd> v) {
    v = acc[idx] * inv;
    ++idx;
  });
  return avg;
}

std::vector<int> averaging_window(const std::vector<double>& val_losses, int window) {
  if (val_losses.empty()) throw Error(ErrorCode::kDegenerate, "averaging_window: no epochs");
  int best = 0;
  for (int i = 1; i < static_cast<int>(val_losses.size()); ++i)
    if (val_losses[static_cast<size_t>(i)] < val_losses[static_cast<size_t>(best)]) best = i;
  std::vector<int> out;
  for (int e = std::max(0, best - (window - 1)); e <= best; ++e) out.push_back(e);
  return out;
}

}  // namespace racl
