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

#include "racl/config.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

namespace racl {

using nlohmann::json;

namespace {

// Applies src over dst field-by-field; collects unknown keys.
template <class Fn>
void merge_object(const json& src, const std::string& prefix, Fn&& set_field) {
  if (!src.is_object())
    throw Error(ErrorCode::kConfig, "config: expected object at " + (prefix.empty() ? "/" : prefix));
  for (const auto& [key, value] : src.items()) {
    if (!set_field(key, value))
      throw Error(ErrorCode::kConfig, "config: unknown key " + prefix + "/" + key);
  }
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw Error(ErrorCode::kConfig, "config: expected number at " + where);
  return v.get<double>();
}

void read_interval(const json& v, double* out, const std::string& where) {
  if (!v.is_array() || v.size() != 2)
    throw Error(ErrorCode::kConfig, "config: expected [lo, hi] at " + where);
  out[0] = as_number(v[0], where);
  out[1] = as_number(v[1], where);
}

}  // namespace

void RunConfig::validate() const {
  if (sample_rate <= 0) throw Error(ErrorCode::kConfig, "sample_rate must be positive");
  if (fixed_len == 0) throw Error(ErrorCode::kConfig, "fixed_len must be positive");
  spectrogram.validate(sample_rate);
  if (features.layers < 1 || features.dims < 1)
    throw Error(ErrorCode::kConfig, "features.layers and features.dims must be >= 1");
  if (head.input_dim != features.dims)
    throw Error(ErrorCode::kConfig, "head.input_dim must equal features.dims");
  if (head.hidden < 1 || head.embedding < 1)
    throw Error(ErrorCode::kConfig, "head sizes must be >= 1");
  losses.validate();
  if (optimizer.base_lr <= 0 || optimizer.lr_step_epochs < 1)
    throw Error(ErrorCode::kConfig, "invalid optimizer settings");
  if (train.epochs < 1 || train.batch_size < 2 || train.avg_window < 1)
    throw Error(ErrorCode::kConfig, "invalid train settings");
  if (corpus.n_per_class < 1 || corpus.duration_s <= 0)
    throw Error(ErrorCode::kConfig, "invalid corpus settings");
  if (static_cast<size_t>(corpus.duration_s * sample_rate) < static_cast<size_t>(spectrogram.fft_size))
    throw Error(ErrorCode::kConfig, "corpus duration shorter than one analysis frame");
  augment.validate();
}

std::string RunConfig::to_json() const {
  json j;
  j["seed"] = seed;
  j["sample_rate"] = sample_rate;
  j["fixed_len"] = fixed_len;
  j["spectrogram"] = {{"fft_size", spectrogram.fft_size},
                      {"hop", spectrogram.hop},
                      {"mel_bins", spectrogram.mel_bins},
                      {"fmin", spectrogram.fmin},
                      {"fmax", spectrogram.fmax},
                      {"griffin_lim_iters", spectrogram.griffin_lim_iters}};
  j["features"] = {{"layers", features.layers},
                   {"dims", features.dims},
                   {"extractor_seed", features.extractor_seed}};
  j["head"] = {{"hidden", head.hidden}, {"embedding", head.embedding}};
  j["losses"] = {{"alpha", losses.alpha},
                 {"beta", losses.beta},
                 {"gamma", losses.gamma},
                 {"margin", losses.margin},
                 {"delta", losses.delta},
                 {"class_weights", {losses.class_weight_bona, losses.class_weight_other}}};
  j["optimizer"] = {{"beta1", optimizer.beta1},
                    {"beta2", optimizer.beta2},
                    {"eps", optimizer.eps},
                    {"weight_decay", optimizer.weight_decay},
                    {"base_lr", optimizer.base_lr},
                    {"lr_decay", optimizer.lr_decay},
                    {"lr_step_epochs", optimizer.lr_step_epochs}};
  j["train"] = {{"epochs", train.epochs},
                {"batch_size", train.batch_size},
                {"avg_window", train.avg_window},
                {"reconstruct_dev", train.reconstruct_dev}};
  j["corpus"] = {{"n_per_class", corpus.n_per_class}, {"duration_s", corpus.duration_s}};
  j["augment"] = {{"noise_snr_db", {augment.noise_snr_db[0], augment.noise_snr_db[1]}},
                  {"music_snr_db", {augment.music_snr_db[0], augment.music_snr_db[1]}},
                  {"speech_snr_db", {augment.speech_snr_db[0], augment.speech_snr_db[1]}},
                  {"speech_mix_count", {augment.speech_mix_count[0], augment.speech_mix_count[1]}},
                  {"probabilities",
                   {{"none", augment.probabilities[0]},
                    {"noise", augment.probabilities[1]},
                    {"music", augment.probabilities[2]},
                    {"babble", augment.probabilities[3]},
                    {"rir", augment.probabilities[4]}}},
                  {"noise_dir", augment.noise_dir},
                  {"music_dir", augment.music_dir},
                  {"speech_dir", augment.speech_dir},
                  {"rir_dir", augment.rir_dir}};
  return j.dump(2);
}

namespace {
uint64_t fnv1a(const std::string& s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h == 0 ? 1 : h;  // 0 is reserved for "unknown"
}
}  // namespace

uint64_t RunConfig::hash() const { return fnv1a(to_json()); }

uint64_t RunConfig::data_hash() const {
  // Only the keys that determine corpus and reconstruction content; manifests
  // stay valid across training-hyperparameter changes.
  json j;
  j["seed"] = seed;
  j["sample_rate"] = sample_rate;
  j["fixed_len"] = fixed_len;
  j["spectrogram"] = {{"fft_size", spectrogram.fft_size},
                      {"hop", spectrogram.hop},
                      {"mel_bins", spectrogram.mel_bins},
                      {"fmin", spectrogram.fmin},
                      {"fmax", spectrogram.fmax},
                      {"griffin_lim_iters", spectrogram.griffin_lim_iters}};
  j["corpus"] = {{"n_per_class", corpus.n_per_class}, {"duration_s", corpus.duration_s}};
  return fnv1a(j.dump(2));
}

void RunConfig::apply_json(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, std::string("config: JSON parse error: ") + e.what());
  }

  merge_object(root, "", [this](const std::string& k, const json& v) {
    if (k == "seed") { seed = v.get<uint64_t>(); return true; }
    if (k == "sample_rate") { sample_rate = v.get<int>(); return true; }
    if (k == "fixed_len") { fixed_len = v.get<size_t>(); return true; }
    if (k == "spectrogram") {
      merge_object(v, "/spectrogram", [this](const std::string& k2, const json& v2) {
        if (k2 == "fft_size") { spectrogram.fft_size = v2.get<int>(); return true; }
        if (k2 == "hop") { spectrogram.hop = v2.get<int>(); return true; }
        if (k2 == "mel_bins") { spectrogram.mel_bins = v2.get<int>(); return true; }
        if (k2 == "fmin") { spectrogram.fmin = as_number(v2, "/spectrogram/fmin"); return true; }
        if (k2 == "fmax") { spectrogram.fmax = as_number(v2, "/spectrogram/fmax"); return true; }
        if (k2 == "griffin_lim_iters") { spectrogram.griffin_lim_iters = v2.get<int>(); return true; }
        return false;
      });
      return true;
    }
    if (k == "features") {
      merge_object(v, "/features", [this](const std::string& k2, const json& v2) {
        if (k2 == "layers") { features.layers = v2.get<int>(); return true; }
        if (k2 == "dims") { features.dims = v2.get<int>(); head.input_dim = features.dims; return true; }
        if (k2 == "extractor_seed") { features.extractor_seed = v2.get<uint64_t>(); return true; }
        return false;
      });
      return true;
    }
    if (k == "head") {
      merge_object(v, "/head", [this](const std::string& k2, const json& v2) {
        if (k2 == "hidden") { head.hidden = v2.get<int>(); return true; }
        if (k2 == "embedding") { head.embedding = v2.get<int>(); return true; }
        return false;
      });
      return true;
    }
    if (k == "losses") {
      merge_object(v, "/losses", [this](const std::string& k2, const json& v2) {
        if (k2 == "alpha") { losses.alpha = as_number(v2, "/losses/alpha"); return true; }
        if (k2 == "beta") { losses.beta = as_number(v2, "/losses/beta"); return true; }
        if (k2 == "gamma") { losses.gamma = as_number(v2, "/losses/gamma"); return true; }
        if (k2 == "margin") { losses.margin = as_number(v2, "/losses/margin"); return true; }
        if (k2 == "delta") { losses.delta = as_number(v2, "/losses/delta"); return true; }
        if (k2 == "class_weights") {
          double cw[2];
          read_interval(v2, cw, "/losses/class_weights");
          losses.class_weight_bona = cw[0];
          losses.class_weight_other = cw[1];
          return true;
        }
        return false;
      });
      return true;
    }
    if (k == "optimizer") {
      merge_object(v, "/optimizer", [this](const std::string& k2, const json& v2) {
        if (k2 == "beta1") { optimizer.beta1 = as_number(v2, "/optimizer/beta1"); return true; }
        if (k2 == "beta2") { optimizer.beta2 = as_number(v2, "/optimizer/beta2"); return true; }
        if (k2 == "eps") { optimizer.eps = as_number(v2, "/optimizer/eps"); return true; }
        if (k2 == "weight_decay") { optimizer.weight_decay = as_number(v2, "/optimizer/weight_decay"); return true; }
        if (k2 == "base_lr") { optimizer.base_lr = as_number(v2, "/optimizer/base_lr"); return true; }
        if (k2 == "lr_decay") { optimizer.lr_decay = as_number(v2, "/optimizer/lr_decay"); return true; }
        if (k2 == "lr_step_epochs") { optimizer.lr_step_epochs = v2.get<int>(); return true; }
        return false;
      });
      return true;
    }
    if (k == "train") {
      merge_object(v, "/train", [this](const std::string& k2, const json& v2) {
        if (k2 == "epochs") { train.epochs = v2.get<int>(); return true; }
        if (k2 == "batch_size") { train.batch_size = v2.get<int>(); return true; }
        if (k2 == "avg_window") { train.avg_window = v2.get<int>(); return true; }
        if (k2 == "reconstruct_dev") { train.reconstruct_dev = v2.get<bool>(); return true; }
        return false;
      });
      return true;
    }
    if (k == "corpus") {
      merge_object(v, "/corpus", [this](const std::string& k2, const json& v2) {
        if (k2 == "n_per_class") { corpus.n_per_class = v2.get<int>(); return true; }
        if (k2 == "duration_s") { corpus.duration_s = as_number(v2, "/corpus/duration_s"); return true; }
        return false;
      });
      return true;
    }
    if (k == "augment") {
      merge_object(v, "/augment", [this](const std::string& k2, const json& v2) {
        if (k2 == "noise_snr_db") { read_interval(v2, augment.noise_snr_db, "/augment/noise_snr_db"); return true; }
        if (k2 == "music_snr_db") { read_interval(v2, augment.music_snr_db, "/augment/music_snr_db"); return true; }
        if (k2 == "speech_snr_db") { read_interval(v2, augment.speech_snr_db, "/augment/speech_snr_db"); return true; }
        if (k2 == "speech_mix_count") {
          double iv[2];
          read_interval(v2, iv, "/augment/speech_mix_count");
          augment.speech_mix_count[0] = static_cast<int>(iv[0]);
          augment.speech_mix_count[1] = static_cast<int>(iv[1]);
          return true;
        }
        if (k2 == "probabilities") {
          merge_object(v2, "/augment/probabilities", [this](const std::string& k3, const json& v3) {
            const char* names[] = {"none", "noise", "music", "babble", "rir"};
            for (size_t c = 0; c < 5; ++c) {
              if (k3 == names[c]) {
                augment.probabilities[c] = as_number(v3, "/augment/probabilities/" + k3);
                return true;
              }
            }
            return false;
          });
          return true;
        }
        if (k2 == "noise_dir") { augment.noise_dir = v2.get<std::string>(); return true; }
        if (k2 == "music_dir") { augment.music_dir = v2.get<std::string>(); return true; }
        if (k2 == "speech_dir") { augment.speech_dir = v2.get<std::string>(); return true; }
        if (k2 == "rir_dir") { augment.rir_dir = v2.get<std::string>(); return true; }
        return false;
      });
      return true;
    }
    return false;
  });
}

RunConfig RunConfig::load(const std::string& json_path) {
  RunConfig cfg;
  if (!json_path.empty()) {
    std::ifstream in(json_path);
    if (!in) throw Error(ErrorCode::kIo, "cannot open config: " + json_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    cfg.apply_json(text);
  }
  if (const char* env = std::getenv("RACL_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfig, "RACL_SEED is not an integer");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace racl
