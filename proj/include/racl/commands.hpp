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

#ifndef RACL_COMMANDS_HPP
#define RACL_COMMANDS_HPP

#include <string>

#include "racl/config.hpp"

namespace racl {

// Exit statuses shared by the CLI and the C API.
enum class CommandStatus : int {
  kOk = 0,
  kRuntimeError = 1,
  kConfigError = 2,
  kVerifyFailure = 3,
};

struct CommandOptions {
  int workers = 1;
  bool overwrite = false;
  bool use_subsets = false;  // eval only: group the report by the manifest subset column
};

// synth: writes WAVs + manifest.tsv + resolved config under out_dir.
void cmd_synth(const RunConfig& cfg, const std::string& out_dir, const CommandOptions& opts);

// reconstruct: analysis-resynthesis of every manifest row into out_dir;
// writes rec WAVs, manifest_rec.tsv (reconstructed rows only) and
// manifest_merged.tsv (originals + reconstructions). Rows whose input is
// unreadable are listed in errors.tsv; throws kIo after a partial failure.
void cmd_reconstruct(const RunConfig& cfg, const std::string& manifest_path,
                     const std::string& out_dir, const CommandOptions& opts);

// train: full training run into out_dir (checkpoints, final.ckpt,
// train_log.tsv, resolved config).
void cmd_train(const RunConfig& cfg, const std::string& train_manifest,
               const std::string& dev_manifest, const std::string& out_dir,
               const CommandOptions& opts);

// eval: scores a manifest with a checkpoint; writes scores.tsv,
// embeddings.tsv and report.json under out_dir.
void cmd_eval(const RunConfig& cfg, const std::string& manifest_path,
              const std::string& checkpoint_path, const std::string& out_dir,
              const CommandOptions& opts);

// verify: runs the invariant suite, printing one line per check to stdout.
// Returns kOk or kVerifyFailure.
CommandStatus cmd_verify(const RunConfig& cfg, bool inject_gradient_bug = false);

// Refuses artifacts whose embedded config hash disagrees with the expected
// one (manifests carry the data hash, checkpoints the full config hash).
void check_artifact_hash(uint64_t expected, uint64_t artifact_hash, const std::string& what);

}  // namespace racl

#endif  // RACL_COMMANDS_HPP
