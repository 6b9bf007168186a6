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

#include "racl/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "racl/dsp.hpp"
#include "racl/eval.hpp"
#include "racl/features.hpp"
#include "racl/losses.hpp"
#include "racl/model.hpp"
#include "racl/rng.hpp"
#include "racl/synthcorpus.hpp"

namespace racl {

namespace {

constexpr double kFdStep = 1e-4;
constexpr double kFdTol = 1e-4;

double rel_err(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

struct ToyBatch {
  std::vector<FeatureStack> stacks;
  std::vector<Provenance> provenance;
};

ToyBatch make_toy_batch(uint64_t seed, int batch, int L, long T, long D) {
  ToyBatch out;
  Rng rng(seed);
  const Provenance classes[4] = {Provenance::kBonaFide, Provenance::kSpoof,
                                 Provenance::kRecBonaFide, Provenance::kRecSpoof};
  for (int b = 0; b < batch; ++b) {
    FeatureStack stack;
    for (int l = 0; l < L; ++l) {
      Eigen::MatrixXd m(T, D);
      for (long i = 0; i < T; ++i)
        for (long j = 0; j < D; ++j) m(i, j) = rng.normal();
      stack.layers.push_back(std::move(m));
    }
    out.stacks.push_back(std::move(stack));
    out.provenance.push_back(classes[b % 4]);
  }
  return out;
}

// Loss of the whole trainable path (aggregation + head + RACL total),
// evaluated forward-only so it can serve as the finite-difference oracle.
double batch_loss(const ToyBatch& batch, const TrainableParams& params, const RaclWeights& w) {
  std::vector<Eigen::VectorXd> embeddings;
  std::vector<Eigen::Vector2d> logits;
  for (const auto& stack : batch.stacks) {
    const auto agg = aggregate(stack, params.kernel);
    const auto tape = head_forward(agg.agg, params.head);
    embeddings.push_back(tape.embedding);
    logits.push_back(tape.logits);
  }
  return racl_total(embeddings, logits, batch.provenance, w).total;
}

TrainableParams batch_gradients(const ToyBatch& batch, const TrainableParams& params,
                                const RaclWeights& w, const HeadConfig& head_cfg) {
  std::vector<Eigen::VectorXd> embeddings;
  std::vector<Eigen::Vector2d> logits;
  std::vector<AggregateResult> aggs;
  std::vector<ForwardTape> tapes;
  for (const auto& stack : batch.stacks) {
    aggs.push_back(aggregate(stack, params.kernel));
    tapes.push_back(head_forward(aggs.back().agg, params.head));
    embeddings.push_back(tapes.back().embedding);
    logits.push_back(tapes.back().logits);
  }
  const LossBreakdown losses = racl_total(embeddings, logits, batch.provenance, w);

  TrainableParams grads;
  grads.kernel = Eigen::VectorXd::Zero(params.kernel.size());
  grads.head = HeadParams::zeros(head_cfg);
  for (size_t k = 0; k < batch.stacks.size(); ++k) {
    const HeadGrads hg =
        head_backward(tapes[k], params.head, losses.grad_logits[k], losses.grad_embeddings[k]);
    grads.kernel += aggregate_backward_kernel(batch.stacks[k], params.kernel, aggs[k], hg.grad_input);
    grads.head.attn_w += hg.params.attn_w;
    grads.head.attn_b += hg.params.attn_b;
    grads.head.w1 += hg.params.w1;
    grads.head.b1 += hg.params.b1;
    grads.head.w2 += hg.params.w2;
    grads.head.b2 += hg.params.b2;
    grads.head.w3 += hg.params.w3;
    grads.head.b3 += hg.params.b3;
  }
  return grads;
}

CheckResult check_full_gradients(const VerifyOptions& opts) {
  CheckResult result{"gradient-full-pipeline", true, ""};
  const int L = 5;
  const HeadConfig head_cfg{8, 6, 5};
  double worst = 0.0;
  for (int trial = 0; trial < opts.gradient_batches; ++trial) {
    const ToyBatch batch = make_toy_batch(1000 + static_cast<uint64_t>(trial), 8, L, 7, head_cfg.input_dim);
    RaclWeights w;
    TrainableParams params;
    params.kernel = init_kernel(3, 77 + static_cast<uint64_t>(trial));
    params.head = HeadParams::init(head_cfg, 99 + static_cast<uint64_t>(trial));

    TrainableParams grads = batch_gradients(batch, params, w, head_cfg);
    if (opts.inject_gradient_bug) grads.kernel(0) += 0.5;

    std::vector<Eigen::VectorXd> analytic;
    grads.for_each_tensor([&analytic](const std::string&, const Eigen::Ref<const Eigen::VectorXd>& v) {
      analytic.emplace_back(v);
    });

    size_t tensor_idx = 0;
    bool ok = true;
    params.for_each_tensor([&](const std::string& name, Eigen::Ref<Eigen::VectorXd> theta) {
      for (long i = 0; i < theta.size(); ++i) {
        const double saved = theta(i);
        theta(i) = saved + kFdStep;
        const double up = batch_loss(batch, params, w);
        theta(i) = saved - kFdStep;
        const double dn = batch_loss(batch, params, w);
        theta(i) = saved;
        const double numeric = (up - dn) / (2.0 * kFdStep);
        const double err = rel_err(analytic[tensor_idx](i), numeric);
        worst = std::max(worst, err);
        if (err >= kFdTol && ok) {
          ok = false;
          result.pass = false;
          result.detail = "trial " + std::to_string(trial) + ", tensor " + name + "[" +
                          std::to_string(i) + "]: rel err " + std::to_string(err);
        }
      }
      ++tensor_idx;
    });
    if (!result.pass) return result;
  }
  std::ostringstream os;
  os << opts.gradient_batches << " batches, worst rel err " << worst;
  result.detail = os.str();
  return result;
}

CheckResult check_component_gradients() {
  CheckResult result{"gradient-loss-components", true, ""};
  Rng rng(4242);
  double worst = 0.0;
  for (int trial = 0; trial < 10 && result.pass; ++trial) {
    const int n = 8;
    const long d = 6;
    RaclWeights w;
    std::vector<Eigen::VectorXd> emb(n);
    std::vector<Provenance> prov(n);
    std::vector<int> labels(n);
    const Provenance classes[4] = {Provenance::kBonaFide, Provenance::kSpoof,
                                   Provenance::kRecBonaFide, Provenance::kRecSpoof};
    for (int i = 0; i < n; ++i) {
      emb[static_cast<size_t>(i)] = Eigen::VectorXd::NullaryExpr(d, [&rng](long) { return rng.normal(); });
      prov[static_cast<size_t>(i)] = classes[i % 4];
      labels[static_cast<size_t>(i)] = binary_label(prov[static_cast<size_t>(i)]);
    }
    std::vector<Eigen::Vector2d> logits(n);
    for (auto& l : logits) l = Eigen::Vector2d(rng.normal(), rng.normal());

    struct Component {
      const char* name;
      std::function<double(const std::vector<Eigen::VectorXd>&, std::vector<Eigen::VectorXd>*)> eval;
    };
    std::vector<int> bona_idx, other_idx;
    for (int i = 0; i < n; ++i)
      (labels[static_cast<size_t>(i)] == 0 ? bona_idx : other_idx).push_back(i);

    const auto std_pairs = make_pairs_std(labels);
    const auto enh_pairs = make_pairs_enh(prov);
    const std::vector<Component> components = {
        {"std", [&](const auto& e, auto* g) { return contrastive(e, std_pairs, w.margin, g); }},
        {"enh", [&](const auto& e, auto* g) { return contrastive(e, enh_pairs, w.margin, g); }},
        {"reg_bona", [&](const auto& e, auto* g) { return variance_reg(e, bona_idx, w.delta, g); }},
        {"reg_other", [&](const auto& e, auto* g) { return variance_reg(e, other_idx, w.delta, g); }},
    };
    for (const auto& comp : components) {
      std::vector<Eigen::VectorXd> grads(n, Eigen::VectorXd::Zero(d));
      comp.eval(emb, &grads);
      for (int i = 0; i < n && result.pass; ++i) {
        for (long j = 0; j < d; ++j) {
          auto perturbed = emb;
          perturbed[static_cast<size_t>(i)](j) += kFdStep;
          const double up = comp.eval(perturbed, nullptr);
          perturbed[static_cast<size_t>(i)](j) -= 2.0 * kFdStep;
          const double dn = comp.eval(perturbed, nullptr);
          const double numeric = (up - dn) / (2.0 * kFdStep);
          const double err = rel_err(grads[static_cast<size_t>(i)](j), numeric);
          worst = std::max(worst, err);
          if (err >= kFdTol) {
            result.pass = false;
            result.detail = std::string(comp.name) + " grad mismatch, rel err " + std::to_string(err);
            break;
          }
        }
      }
    }
    // cross-entropy w.r.t. logits
    std::vector<Eigen::Vector2d> ce_grads(n, Eigen::Vector2d::Zero());
    weighted_ce(logits, labels, w, &ce_grads);
    for (int i = 0; i < n && result.pass; ++i) {
      for (int j = 0; j < 2; ++j) {
        auto perturbed = logits;
        perturbed[static_cast<size_t>(i)](j) += kFdStep;
        const double up = weighted_ce(perturbed, labels, w);
        perturbed[static_cast<size_t>(i)](j) -= 2.0 * kFdStep;
        const double dn = weighted_ce(perturbed, labels, w);
        const double err = rel_err(ce_grads[static_cast<size_t>(i)](j), (up - dn) / (2.0 * kFdStep));
        worst = std::max(worst, err);
        if (err >= kFdTol) {
          result.pass = false;
          result.detail = "weighted_ce grad mismatch, rel err " + std::to_string(err);
        }
      }
    }
  }
  if (result.pass) {
    std::ostringstream os;
    os << "worst rel err " << worst;
    result.detail = os.str();
  }
  return result;
}

CheckResult check_eer_oracle(const VerifyOptions& opts) {
  CheckResult result{"eer-oracle-equivalence", true, ""};
  Rng rng(777);
  double worst = 0.0;
  for (int trial = 0; trial < opts.eer_trials; ++trial) {
    const int nb = rng.uniform_int(1, 40);
    const int ns = rng.uniform_int(1, 40);
    std::vector<double> bona(static_cast<size_t>(nb)), spoof(static_cast<size_t>(ns));
    // quantized scores force ties and duplicates
    const bool quantize = trial % 3 == 0;
    for (auto& v : bona) v = quantize ? std::round(rng.uniform() * 8.0) / 8.0 : rng.uniform();
    for (auto& v : spoof) v = quantize ? std::round(rng.uniform() * 8.0) / 8.0 : rng.uniform();
    const double fast = eer(bona, spoof);
    const double slow = eer_oracle(bona, spoof);
    worst = std::max(worst, std::abs(fast - slow));
    if (std::abs(fast - slow) >= 1e-9) {
      result.pass = false;
      result.detail = "trial " + std::to_string(trial) + ": fast " + std::to_string(fast) +
                      " vs oracle " + std::to_string(slow);
      return result;
    }
    // invariance under a strictly increasing transform
    auto transform = [](std::vector<double> v) {
      for (auto& x : v) x = std::tanh(2.0 * x) + 0.1 * x;
      return v;
    };
    const double mapped = eer(transform(bona), transform(spoof));
    if (std::abs(fast - mapped) >= 1e-9) {
      result.pass = false;
      result.detail = "EER not invariant under monotone transform";
      return result;
    }
  }
  std::ostringstream os;
  os << opts.eer_trials << " trials, worst |diff| " << worst;
  result.detail = os.str();
  return result;
}

CheckResult check_loss_identities() {
  CheckResult result{"loss-identities", true, ""};
  RaclWeights w;
  const long d = 4;
  auto fail = [&result](const std::string& msg) {
    result.pass = false;
    result.detail = msg;
  };

  // coincident same-class pair
  std::vector<Eigen::VectorXd> emb = {Eigen::VectorXd::Ones(d), Eigen::VectorXd::Ones(d)};
  if (contrastive(emb, {{0, 1, 1}}, w.margin) != 0.0) fail("contrastive(Y=1, D=0) != 0");

  // beyond-margin different-class pair
  emb[1] = Eigen::VectorXd::Ones(d) * 3.0;
  if (contrastive(emb, {{0, 1, 0}}, w.margin) != 0.0) fail("contrastive(Y=0, D>=m) != 0");

  // identical embeddings: -(1 - sqrt(delta)) with delta = 1e-4
  std::vector<Eigen::VectorXd> same(5, Eigen::VectorXd::Constant(d, 0.7));
  const double reg = variance_reg(same, {0, 1, 2, 3, 4}, 1e-4);
  if (std::abs(reg - (-0.99)) > 1e-12) fail("variance_reg of identical embeddings != -0.99");

  // ablation: alpha = beta = gamma = 0 collapses bitwise to weighted CE
  Rng rng(55);
  const int n = 6;
  std::vector<Eigen::VectorXd> bemb(n);
  std::vector<Eigen::Vector2d> logits(n);
  std::vector<Provenance> prov(n);
  std::vector<int> labels(n);
  const Provenance classes[4] = {Provenance::kBonaFide, Provenance::kSpoof,
                                 Provenance::kRecBonaFide, Provenance::kRecSpoof};
  for (int i = 0; i < n; ++i) {
    bemb[static_cast<size_t>(i)] = Eigen::VectorXd::NullaryExpr(d, [&rng](long) { return rng.normal(); });
    logits[static_cast<size_t>(i)] = Eigen::Vector2d(rng.normal(), rng.normal());
    prov[static_cast<size_t>(i)] = classes[i % 4];
    labels[static_cast<size_t>(i)] = binary_label(prov[static_cast<size_t>(i)]);
  }
  RaclWeights ablated = w;
  ablated.alpha = ablated.beta = ablated.gamma = 0.0;
  const LossBreakdown b = racl_total(bemb, logits, prov, ablated);
  const double ce = weighted_ce(logits, labels, w);
  if (b.total != ce) fail("ablated racl_total not bitwise equal to weighted CE");

  // default weights sum the CE coefficient to 0.3 (within rounding)
  if (std::abs(1.0 - w.alpha - w.beta - 0.3) > 1e-12 || w.alpha != 0.6 || w.beta != 0.1 ||
      w.gamma != 0.3)
    fail("default weights are not (0.6, 0.1, 0.3)");

  if (result.pass) result.detail = "all identities hold";
  return result;
}

CheckResult check_griffin_lim(const RunConfig& cfg) {
  CheckResult result{"griffin-lim-convergence", true, ""};
  CorpusSpec spec;
  spec.sample_rate = cfg.sample_rate;
  spec.duration_s = 1.0;
  spec.seed = cfg.seed;
  const AudioClip clip = synth_clip(spec, Provenance::kBonaFide, 0);
  const Eigen::MatrixXd mag = stft(clip.samples, cfg.spectrogram, true).cwiseAbs();
  std::vector<double> errors;
  griffin_lim(mag, cfg.spectrogram, clip.samples.size(), cfg.seed, &errors);
  for (size_t i = 1; i < errors.size(); ++i) {
    if (errors[i] > errors[i - 1] * (1.0 + 1e-12) + 1e-15) {
      result.pass = false;
      result.detail = "error increased at iteration " + std::to_string(i);
      return result;
    }
  }
  std::ostringstream os;
  os << errors.size() << " iterations, final spectral-convergence error " << errors.back();
  result.detail = os.str();
  return result;
}

CheckResult check_determinism(const RunConfig& cfg) {
  CheckResult result{"determinism-probes", true, ""};
  CorpusSpec spec;
  spec.sample_rate = cfg.sample_rate;
  spec.duration_s = 1.0;
  spec.seed = cfg.seed;
  const AudioClip clip = synth_clip(spec, Provenance::kSpoof, 3);
  const AudioClip clip2 = synth_clip(spec, Provenance::kSpoof, 3);
  if (clip.samples != clip2.samples) {
    result.pass = false;
    result.detail = "corpus generation not bit-reproducible";
    return result;
  }

  FrozenExtractor ex(cfg.features.extractor_seed, 4, 16, cfg.spectrogram, cfg.sample_rate);
  const FeatureStack a = ex.extract(clip);
  const FeatureStack b = ex.extract(clip);
  for (size_t l = 0; l < a.layers.size(); ++l) {
    if (a.layers[l] != b.layers[l]) {
      result.pass = false;
      result.detail = "extractor not bit-deterministic";
      return result;
    }
  }

  // two optimizer runs from the same seed agree bitwise
  auto run_adam = [&cfg]() {
    HeadConfig hc{4, 4, 3};
    TrainableParams p;
    p.kernel = init_kernel(3, cfg.seed);
    p.head = HeadParams::init(hc, cfg.seed);
    AdamOptimizer adam(cfg.optimizer, p);
    Rng rng(cfg.seed);
    for (int step = 0; step < 20; ++step) {
      TrainableParams g;
      g.kernel = Eigen::VectorXd::NullaryExpr(3, [&rng](long) { return rng.normal(); });
      g.head = HeadParams::zeros(hc);
      g.head.w1 = Eigen::MatrixXd::NullaryExpr(4, 4, [&rng](long, long) { return rng.normal(); });
      adam.step(p, g, lr_at(cfg.optimizer, step / 5));
    }
    return p;
  };
  const TrainableParams run1 = run_adam();
  const TrainableParams run2 = run_adam();
  bool same = true;
  std::vector<Eigen::VectorXd> flat1;
  run1.for_each_tensor([&flat1](const std::string&, const Eigen::Ref<const Eigen::VectorXd>& v) {
    flat1.emplace_back(v);
  });
  size_t idx = 0;
  run2.for_each_tensor([&](const std::string&, const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (flat1[idx] != v) same = false;
    ++idx;
  });
  if (!same) {
    result.pass = false;
    result.detail = "optimizer trajectory not bit-deterministic";
    return result;
  }
  result.detail = "corpus, extractor, optimizer all bit-deterministic";
  return result;
}

}  // namespace

std::vector<CheckResult> run_verification(const RunConfig& cfg, const VerifyOptions& opts) {
  std::vector<CheckResult> results;
  results.push_back(check_component_gradients());
  results.push_back(check_full_gradients(opts));
  results.push_back(check_eer_oracle(opts));
  results.push_back(check_loss_identities());
  results.push_back(check_griffin_lim(cfg));
  results.push_back(check_determinism(cfg));
  return results;
}

}  // namespace racl
