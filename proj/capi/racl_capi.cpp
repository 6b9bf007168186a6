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

#include "racl.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "racl/commands.hpp"

namespace {

thread_local std::string g_last_error;

racl_status status_of(const racl::Error& e) {
  switch (e.code()) {
    case racl::ErrorCode::kConfig: return RACL_CONFIG_ERROR;
    default: return RACL_RUNTIME_ERROR;
  }
}

// Runs fn, capturing exceptions into the thread-local error slot.
template <typename Fn>
racl_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const racl::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RACL_RUNTIME_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return RACL_RUNTIME_ERROR;
  }
}

const racl::RunConfig& unwrap(const racl_config* cfg) {
  return *reinterpret_cast<const racl::RunConfig*>(cfg);
}

racl::CommandOptions make_opts(int workers, int overwrite) {
  racl::CommandOptions opts;
  opts.workers = workers;
  opts.overwrite = overwrite != 0;
  return opts;
}

}  // namespace

extern "C" {

racl_config* racl_config_create(const char* json_path) {
  racl::RunConfig* cfg = nullptr;
  const racl_status st = guarded([&]() {
    cfg = new racl::RunConfig(racl::RunConfig::load(json_path ? json_path : ""));
    return RACL_OK;
  });
  if (st != RACL_OK) return nullptr;
  return reinterpret_cast<racl_config*>(cfg);
}

racl_status racl_config_apply_json(racl_config* cfg, const char* json_text) {
  return guarded([&]() {
    if (!cfg || !json_text) throw racl::Error(racl::ErrorCode::kConfig, "null argument");
    reinterpret_cast<racl::RunConfig*>(cfg)->apply_json(json_text);
    return RACL_OK;
  });
}

racl_status racl_config_set_seed(racl_config* cfg, uint64_t seed) {
  return guarded([&]() {
    if (!cfg) throw racl::Error(racl::ErrorCode::kConfig, "null config");
    reinterpret_cast<racl::RunConfig*>(cfg)->seed = seed;
    return RACL_OK;
  });
}

char* racl_config_dump(const racl_config* cfg) {
  if (!cfg) return nullptr;
  char* out = nullptr;
  guarded([&]() {
    const std::string json = unwrap(cfg).to_json();
    out = static_cast<char*>(std::malloc(json.size() + 1));
    if (out) std::memcpy(out, json.c_str(), json.size() + 1);
    return RACL_OK;
  });
  return out;
}

uint64_t racl_config_hash(const racl_config* cfg) {
  return cfg ? unwrap(cfg).hash() : 0;
}

void racl_config_destroy(racl_config* cfg) {
  delete reinterpret_cast<racl::RunConfig*>(cfg);
}

void racl_string_free(char* s) { std::free(s); }

const char* racl_last_error(void) { return g_last_error.c_str(); }

racl_status racl_cmd_synth(const racl_config* cfg, const char* out_dir, int workers,
                           int overwrite) {
  return guarded([&]() {
    if (!cfg || !out_dir) throw racl::Error(racl::ErrorCode::kConfig, "null argument");
    racl::cmd_synth(unwrap(cfg), out_dir, make_opts(workers, overwrite));
    return RACL_OK;
  });
}

racl_status racl_cmd_reconstruct(const racl_config* cfg, const char* manifest_path,
                                 const char* out_dir, int workers, int overwrite) {
  return guarded([&]() {
    if (!cfg || !manifest_path || !out_dir)
      throw racl::Error(racl::ErrorCode::kConfig, "null argument");
    racl::cmd_reconstruct(unwrap(cfg), manifest_path, out_dir, make_opts(workers, overwrite));
    return RACL_OK;
  });
}

racl_status racl_cmd_train(const racl_config* cfg, const char* train_manifest,
                           const char* dev_manifest, const char* out_dir, int workers,
                           int overwrite) {
  return guarded([&]() {
    if (!cfg || !train_manifest || !dev_manifest || !out_dir)
      throw racl::Error(racl::ErrorCode::kConfig, "null argument");
    racl::cmd_train(unwrap(cfg), train_manifest, dev_manifest, out_dir,
                    make_opts(workers, overwrite));
    return RACL_OK;
  });
}

racl_status racl_cmd_eval(const racl_config* cfg, const char* manifest_path,
                          const char* checkpoint_path, const char* out_dir, int workers,
                          int overwrite, int use_subsets) {
  return guarded([&]() {
    if (!cfg || !manifest_path || !checkpoint_path || !out_dir)
      throw racl::Error(racl::ErrorCode::kConfig, "null argument");
    racl::CommandOptions opts = make_opts(workers, overwrite);
    opts.use_subsets = use_subsets != 0;
    racl::cmd_eval(unwrap(cfg), manifest_path, checkpoint_path, out_dir, opts);
    return RACL_OK;
  });
}

racl_status racl_cmd_verify(const racl_config* cfg, int inject_gradient_bug) {
  return guarded([&]() {
    if (!cfg) throw racl::Error(racl::ErrorCode::kConfig, "null config");
    const racl::CommandStatus st = racl::cmd_verify(unwrap(cfg), inject_gradient_bug != 0);
    return static_cast<racl_status>(st);
  });
}

}  // extern "C"
