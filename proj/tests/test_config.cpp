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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <doctest.h>

#include "racl/config.hpp"

namespace {

std::string write_temp_json(const std::string& text) {
  const std::string path = "/tmp/racl_test_config.json";
  std::ofstream out(path);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("defaults match the documented values") {
  racl::RunConfig cfg;
  CHECK(cfg.seed == 688);
  CHECK(cfg.sample_rate == 16000);
  CHECK(cfg.fixed_len == 64600);
  CHECK(cfg.spectrogram.fft_size == 1024);
  CHECK(cfg.spectrogram.hop == 256);
  CHECK(cfg.spectrogram.mel_bins == 80);
  CHECK(cfg.spectrogram.griffin_lim_iters == 32);
  CHECK(cfg.features.layers == 12);
  CHECK(cfg.features.dims == 64);
  CHECK(cfg.head.hidden == 64);
  CHECK(cfg.head.embedding == 32);
  CHECK(cfg.losses.alpha == 0.6);
  CHECK(cfg.losses.beta == 0.1);
  CHECK(cfg.losses.gamma == 0.3);
  CHECK(cfg.losses.margin == 1.0);
  CHECK(cfg.losses.class_weight_bona == 10.0);
  CHECK(cfg.losses.class_weight_other == 1.0);
  CHECK(cfg.optimizer.base_lr == 5e-4);
  CHECK(cfg.optimizer.weight_decay == 5e-4);
  CHECK(cfg.train.epochs == 100);
  CHECK(cfg.train.avg_window == 5);
  CHECK(cfg.corpus.n_per_class == 200);
  cfg.validate();
}

TEST_CASE("apply_json overrides nested keys") {
  racl::RunConfig cfg;
  cfg.apply_json(R"({"seed": 42, "losses": {"alpha": 0.5}, "train": {"epochs": 3}})");
  CHECK(cfg.seed == 42);
  CHECK(cfg.losses.alpha == 0.5);
  CHECK(cfg.losses.beta == 0.1);  // untouched keys keep defaults
  CHECK(cfg.train.epochs == 3);
}

TEST_CASE("unknown keys are rejected and name the offending path") {
  racl::RunConfig cfg;
  try {
    cfg.apply_json(R"({"losses": {"alhpa": 0.5}})");
    FAIL("expected a config error");
  } catch (const racl::Error& e) {
    CHECK(e.code() == racl::ErrorCode::kConfig);
    CHECK(std::string(e.what()).find("alhpa") != std::string::npos);
  }

  CHECK_THROWS_AS(cfg.apply_json(R"({"bogus_top_level": 1})"), racl::Error);
  CHECK_THROWS_AS(cfg.apply_json("{not json"), racl::Error);
}

TEST_CASE("validate rejects out-of-range values") {
  racl::RunConfig cfg;
  cfg.losses.alpha = 0.95;  // alpha + beta must leave room for the CE share
  CHECK_THROWS_AS(cfg.validate(), racl::Error);

  cfg = racl::RunConfig{};
  cfg.spectrogram.fft_size = 1000;  // not a power of two
  CHECK_THROWS_AS(cfg.validate(), racl::Error);

  cfg = racl::RunConfig{};
  cfg.train.epochs = 0;
  CHECK_THROWS_AS(cfg.validate(), racl::Error);
}

TEST_CASE("hash is canonical and sensitive to every change") {
  racl::RunConfig a, b;
  CHECK(a.hash() == b.hash());
  CHECK(a.to_json() == b.to_json());

  b.apply_json(R"({"losses": {"alpha": 0.59}})");
  CHECK(a.hash() != b.hash());

  // applying the same override twice is stable
  racl::RunConfig c;
  c.apply_json(R"({"losses": {"alpha": 0.59}})");
  CHECK(b.hash() == c.hash());
}

TEST_CASE("data_hash ignores training hyperparameters") {
  racl::RunConfig a, b;
  b.apply_json(
      R"({"train": {"epochs": 7}, "optimizer": {"base_lr": 0.005}, "losses": {"margin": 4.0}, "head": {"hidden": 16}})");
  CHECK(a.data_hash() == b.data_hash());
  CHECK(a.hash() != b.hash());

  // data-producing keys do change it
  racl::RunConfig c;
  c.apply_json(R"({"corpus": {"n_per_class": 8}})");
  CHECK(a.data_hash() != c.data_hash());
  racl::RunConfig d;
  d.apply_json(R"({"seed": 689})");
  CHECK(a.data_hash() != d.data_hash());
  racl::RunConfig e;
  e.apply_json(R"({"spectrogram": {"hop": 128}})");
  CHECK(a.data_hash() != e.data_hash());
}

TEST_CASE("load layers file over defaults then the environment") {
  const std::string path = write_temp_json(R"({"seed": 100, "train": {"epochs": 5}})");

  unsetenv("RACL_SEED");
  racl::RunConfig cfg = racl::RunConfig::load(path);
  CHECK(cfg.seed == 100);
  CHECK(cfg.train.epochs == 5);

  setenv("RACL_SEED", "777", 1);
  cfg = racl::RunConfig::load(path);
  CHECK(cfg.seed == 777);
  CHECK(cfg.train.epochs == 5);
  unsetenv("RACL_SEED");

  // empty path: pure defaults
  cfg = racl::RunConfig::load("");
  CHECK(cfg.seed == 688);

  CHECK_THROWS_AS(racl::RunConfig::load("/tmp/no_such_racl_config.json"), racl::Error);
  std::remove(path.c_str());
}
