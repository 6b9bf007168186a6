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

// Exercises the shared-library C interface the way an external embedder
// would: config lifecycle, error reporting, and a miniature synth ->
// reconstruct -> train -> eval round trip.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include <racl.h>

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

const char* kTinyJson = R"({
  "fixed_len": 16000,
  "corpus": {"n_per_class": 2, "duration_s": 1.0},
  "features": {"layers": 4, "dims": 16},
  "head": {"hidden": 8, "embedding": 4},
  "train": {"epochs": 2, "batch_size": 4, "reconstruct_dev": false},
  "spectrogram": {"griffin_lim_iters": 8}
})";

}  // namespace

TEST_CASE("config lifecycle, dump, and hash") {
  racl_config* cfg = racl_config_create(nullptr);
  REQUIRE(cfg != nullptr);

  const uint64_t h0 = racl_config_hash(cfg);
  CHECK(h0 != 0);

  CHECK(racl_config_apply_json(cfg, R"({"seed": 42})") == RACL_OK);
  CHECK(racl_config_hash(cfg) != h0);

  CHECK(racl_config_set_seed(cfg, 688) == RACL_OK);

  char* dump = racl_config_dump(cfg);
  REQUIRE(dump != nullptr);
  CHECK(std::string(dump).find("\"seed\": 688") != std::string::npos);
  racl_string_free(dump);

  racl_config_destroy(cfg);
  racl_config_destroy(nullptr);  // must be a harmless no-op
}

TEST_CASE("errors set the status and the thread-local message") {
  racl_config* cfg = racl_config_create(nullptr);
  REQUIRE(cfg != nullptr);

  CHECK(racl_config_apply_json(cfg, R"({"losses": {"alhpa": 0.5}})") == RACL_CONFIG_ERROR);
  CHECK(std::string(racl_last_error()).find("alhpa") != std::string::npos);

  CHECK(racl_config_apply_json(cfg, "{broken") == RACL_CONFIG_ERROR);
  CHECK(racl_last_error()[0] != '\0');

  // NULL arguments are rejected, not dereferenced
  CHECK(racl_config_apply_json(nullptr, "{}") == RACL_CONFIG_ERROR);
  CHECK(racl_config_apply_json(cfg, nullptr) == RACL_CONFIG_ERROR);
  CHECK(racl_config_dump(nullptr) == nullptr);
  CHECK(racl_config_hash(nullptr) == 0);
  CHECK(racl_cmd_synth(nullptr, "/tmp/x", 1, 0) == RACL_CONFIG_ERROR);
  CHECK(racl_cmd_verify(nullptr, 0) == RACL_CONFIG_ERROR);

  racl_config_destroy(cfg);
}

TEST_CASE("config file loading failures surface as NULL") {
  CHECK(racl_config_create("/tmp/no_such_racl_file.json") == nullptr);
  CHECK(racl_last_error()[0] != '\0');
}

TEST_CASE("miniature end-to-end run through the C interface") {
  racl_config* cfg = racl_config_create(nullptr);
  REQUIRE(cfg != nullptr);
  REQUIRE(racl_config_apply_json(cfg, kTinyJson) == RACL_OK);

  TempDir corpus("racl_capi_corpus"), rec("racl_capi_rec"), run("racl_capi_run"),
      ev("racl_capi_eval");

  REQUIRE(racl_cmd_synth(cfg, corpus.path.c_str(), 1, 0) == RACL_OK);
  const std::string manifest = (corpus.path / "manifest.tsv").string();
  REQUIRE(fs::exists(manifest));

  // refuses to clobber a non-empty directory without overwrite
  CHECK(racl_cmd_synth(cfg, corpus.path.c_str(), 1, 0) == RACL_CONFIG_ERROR);
  CHECK(racl_cmd_synth(cfg, corpus.path.c_str(), 1, 1) == RACL_OK);

  REQUIRE(racl_cmd_reconstruct(cfg, manifest.c_str(), rec.path.c_str(), 1, 0) == RACL_OK);
  const std::string merged = (rec.path / "manifest_merged.tsv").string();
  REQUIRE(fs::exists(merged));

  REQUIRE(racl_cmd_train(cfg, merged.c_str(), merged.c_str(), run.path.c_str(), 1, 0) == RACL_OK);
  const std::string ckpt = (run.path / "final.ckpt").string();
  REQUIRE(fs::exists(ckpt));

  REQUIRE(racl_cmd_eval(cfg, merged.c_str(), ckpt.c_str(), ev.path.c_str(), 1, 0, 0) == RACL_OK);
  CHECK(fs::exists(ev.path / "report.json"));
  CHECK(fs::exists(ev.path / "scores.tsv"));

  // a config change invalidates existing artifacts
  racl_config* other = racl_config_create(nullptr);
  REQUIRE(racl_config_apply_json(other, kTinyJson) == RACL_OK);
  REQUIRE(racl_config_set_seed(other, 9999) == RACL_OK);
  CHECK(racl_cmd_train(other, merged.c_str(), merged.c_str(), run.path.c_str(), 1, 1) ==
        RACL_CONFIG_ERROR);
  CHECK(racl_last_error()[0] != '\0');
  racl_config_destroy(other);

  racl_config_destroy(cfg);
}
