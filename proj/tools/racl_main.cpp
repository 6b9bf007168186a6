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

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "racl.h"

namespace {

struct ConfigDeleter {
  void operator()(racl_config* c) const { racl_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<racl_config, ConfigDeleter>;

int fail(racl_status st) {
  std::fprintf(stderr, "error: %s\n", racl_last_error());
  return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audio anti-spoofing pipeline: synthetic corpora, mel round-trip "
               "reconstruction, contrastive training, and EER evaluation"};
  app.require_subcommand(1);

  std::string config_path;
  uint64_t seed = 0;
  bool seed_set = false;
  std::vector<std::string> overrides;
  int workers = 1;
  bool overwrite = false;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "Override the config seed")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--set", overrides, "Inline JSON override, e.g. '{\"losses\":{\"alpha\":0}}'");
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--overwrite", overwrite, "Replace a non-empty output directory");

  auto* synth = app.add_subcommand("synth", "Generate the synthetic corpus");
  std::string synth_out;
  int synth_n = 0;
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--n", synth_n, "Clips per class")->check(CLI::PositiveNumber);

  auto* rec = app.add_subcommand("reconstruct", "Analysis-resynthesis copies of a manifest");
  std::string rec_manifest, rec_out;
  rec->add_option("--manifest", rec_manifest, "Input manifest TSV")->required();
  rec->add_option("--out-dir", rec_out, "Output directory")->required();

  auto* train = app.add_subcommand("train", "Train the aggregation kernel and head");
  std::string train_manifest, dev_manifest, train_out;
  std::vector<std::string> ablate;
  train->add_option("--train", train_manifest, "Training manifest TSV")->required();
  train->add_option("--dev", dev_manifest, "Development manifest TSV")->required();
  train->add_option("--out-dir", train_out, "Output directory")->required();
  train->add_option("--ablate", ablate, "Zero a loss term: std, enh, reg")
      ->check(CLI::IsMember({"std", "enh", "reg"}));

  auto* eval = app.add_subcommand("eval", "Score a manifest with a checkpoint");
  std::string eval_manifest, eval_ckpt, eval_out;
  eval->add_option("--manifest", eval_manifest, "Manifest TSV")->required();
  eval->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required();
  eval->add_option("--out-dir", eval_out, "Output directory")->required();
  bool subset_col = false;
  eval->add_flag("--subset-col", subset_col, "Break the report down by the manifest subset column");

  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  bool inject_bug = false;
  verify->add_flag("--inject-gradient-bug", inject_bug,
                   "Perturb one analytic gradient (the suite must then fail)");

  // Global options may appear after the subcommand as well.
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  ConfigPtr cfg(racl_config_create(config_path.c_str()));
  if (!cfg) return fail(RACL_CONFIG_ERROR);

  for (const std::string& json : overrides)
    if (racl_status st = racl_config_apply_json(cfg.get(), json.c_str()); st != RACL_OK)
      return fail(st);
  if (seed_set)
    if (racl_status st = racl_config_set_seed(cfg.get(), seed); st != RACL_OK) return fail(st);
  if (synth->parsed() && synth_n > 0) {
    const std::string json = "{\"corpus\":{\"n_per_class\":" + std::to_string(synth_n) + "}}";
    if (racl_status st = racl_config_apply_json(cfg.get(), json.c_str()); st != RACL_OK)
      return fail(st);
  }
  for (const std::string& term : ablate) {
    const char* key = term == "std" ? "alpha" : term == "enh" ? "beta" : "gamma";
    const std::string json = std::string("{\"losses\":{\"") + key + "\":0.0}}";
    if (racl_status st = racl_config_apply_json(cfg.get(), json.c_str()); st != RACL_OK)
      return fail(st);
  }

  racl_status st = RACL_OK;
  if (synth->parsed()) {
    st = racl_cmd_synth(cfg.get(), synth_out.c_str(), workers, overwrite);
  } else if (rec->parsed()) {
    st = racl_cmd_reconstruct(cfg.get(), rec_manifest.c_str(), rec_out.c_str(), workers,
                              overwrite);
  } else if (train->parsed()) {
    st = racl_cmd_train(cfg.get(), train_manifest.c_str(), dev_manifest.c_str(),
                        train_out.c_str(), workers, overwrite);
  } else if (eval->parsed()) {
    st = racl_cmd_eval(cfg.get(), eval_manifest.c_str(), eval_ckpt.c_str(), eval_out.c_str(),
                       workers, overwrite, subset_col ? 1 : 0);
  } else if (verify->parsed()) {
    st = racl_cmd_verify(cfg.get(), inject_bug ? 1 : 0);
  }

  if (st != RACL_OK && st != RACL_VERIFY_FAILURE) return fail(st);
  if (st == RACL_VERIFY_FAILURE) std::fprintf(stderr, "verification failed\n");
  return static_cast<int>(st);
}
