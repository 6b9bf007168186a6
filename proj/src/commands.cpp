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

#include "racl/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "racl/parallel.hpp"
#include "racl/pipeline.hpp"
#include "racl/reconstruct.hpp"
#include "racl/synthcorpus.hpp"
#include "racl/verify.hpp"

namespace racl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string hash_hex(uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void prepare_out_dir(const std::string& out_dir, bool overwrite) {
  if (fs::exists(out_dir) && !fs::is_directory(out_dir))
    throw Error(ErrorCode::kIo, "output path exists and is not a directory: " + out_dir);
  if (fs::is_directory(out_dir) && !fs::is_empty(out_dir)) {
    if (!overwrite)
      throw Error(ErrorCode::kConfig, "output directory not empty (use --overwrite): " + out_dir);
    fs::remove_all(out_dir);
  }
  fs::create_directories(out_dir);
}

void write_resolved_config(const RunConfig& cfg, const std::string& out_dir) {
  std::ofstream out(fs::path(out_dir) / "config.json");
  out << cfg.to_json() << "\n";
}

}  // namespace

void check_artifact_hash(uint64_t expected, uint64_t artifact_hash, const std::string& what) {
  if (artifact_hash != 0 && artifact_hash != expected)
    throw Error(ErrorCode::kConfig, what + " was produced under config " + hash_hex(artifact_hash) +
                                        " but the active config is " + hash_hex(expected));
}

void cmd_synth(const RunConfig& cfg, const std::string& out_dir, const CommandOptions& opts) {
  cfg.validate();
  prepare_out_dir(out_dir, opts.overwrite);
  CorpusSpec spec;
  spec.n_per_class = cfg.corpus.n_per_class;
  spec.duration_s = cfg.corpus.duration_s;
  spec.sample_rate = cfg.sample_rate;
  spec.seed = cfg.seed;
  generate_corpus(spec, out_dir, cfg.data_hash());
  write_resolved_config(cfg, out_dir);
}

void cmd_reconstruct(const RunConfig& cfg, const std::string& manifest_path,
                     const std::string& out_dir, const CommandOptions& opts) {
  cfg.validate();
  const Manifest input = read_manifest(manifest_path);
  check_artifact_hash(cfg.data_hash(), input.config_hash, "manifest " + manifest_path);
  prepare_out_dir(out_dir, opts.overwrite);

  struct RowResult {
    ManifestRow rec_row;
    bool ok = false;
    std::string error;
  };
  std::vector<RowResult> results(input.rows.size());

  parallel_for(input.rows.size(), opts.workers, [&](size_t i) {
    const ManifestRow& row = input.rows[i];
    RowResult& r = results[i];
    try {
      AudioClip clip = read_wav(row.path);
      clip.label = row.provenance;
      if (clip.sample_rate != cfg.sample_rate) clip = resample(clip, cfg.sample_rate);
      clip = fix_length(clip, cfg.fixed_len);
      const AudioClip rec =
          reconstruct_clip(clip, cfg.spectrogram, Rng::derive(cfg.seed, "reconstruct", i));
      const std::string name = "rec_" + fs::path(row.path).stem().string() + ".wav";
      const std::string path = (fs::path(out_dir) / name).string();
      write_wav(path, rec);
      r.rec_row = {path, rec.label, row.subset};
      r.ok = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });

  Manifest rec_manifest, merged;
  rec_manifest.config_hash = merged.config_hash = cfg.data_hash();
  merged.rows = input.rows;
  std::vector<std::pair<std::string, std::string>> failures;
  for (size_t i = 0; i < results.size(); ++i) {
    if (results[i].ok) {
      rec_manifest.rows.push_back(results[i].rec_row);
      merged.rows.push_back(results[i].rec_row);
    } else {
      failures.emplace_back(input.rows[i].path, results[i].error);
    }
  }
  write_manifest((fs::path(out_dir) / "manifest_rec.tsv").string(), rec_manifest);
  write_manifest((fs::path(out_dir) / "manifest_merged.tsv").string(), merged);
  write_resolved_config(cfg, out_dir);

  if (!failures.empty()) {
    std::ofstream err(fs::path(out_dir) / "errors.tsv");
    for (const auto& [path, msg] : failures) err << path << '\t' << msg << '\n';
    throw Error(ErrorCode::kIo, std::to_string(failures.size()) + " of " +
                                    std::to_string(input.rows.size()) +
                                    " rows failed to reconstruct (see errors.tsv in " + out_dir + ")");
  }
}

void cmd_train(const RunConfig& cfg, const std::string& train_manifest,
               const std::string& dev_manifest, const std::string& out_dir,
               const CommandOptions& opts) {
  cfg.validate();
  const Manifest train_m = read_manifest(train_manifest);
  const Manifest dev_m = read_manifest(dev_manifest);
  check_artifact_hash(cfg.data_hash(), train_m.config_hash, "manifest " + train_manifest);
  check_artifact_hash(cfg.data_hash(), dev_m.config_hash, "manifest " + dev_manifest);
  prepare_out_dir(out_dir, opts.overwrite);
  write_resolved_config(cfg, out_dir);

  const Pipeline pipeline(cfg);
  train(pipeline, train_m, dev_m, out_dir, opts.workers);
}

void cmd_eval(const RunConfig& cfg, const std::string& manifest_path,
              const std::string& checkpoint_path, const std::string& out_dir,
              const CommandOptions& opts) {
  cfg.validate();
  Manifest manifest = read_manifest(manifest_path);
  check_artifact_hash(cfg.data_hash(), manifest.config_hash, "manifest " + manifest_path);
  if (!opts.use_subsets)
    for (auto& row : manifest.rows) row.subset.clear();
  const Checkpoint ckpt = load_checkpoint(checkpoint_path);
  check_artifact_hash(cfg.hash(), ckpt.config_hash, "checkpoint " + checkpoint_path);
  prepare_out_dir(out_dir, opts.overwrite);
  write_resolved_config(cfg, out_dir);

  const Pipeline pipeline(cfg);
  const std::vector<ScoredRow> rows = score_manifest(pipeline, manifest, ckpt.params, opts.workers);

  const std::string hash = hash_hex(cfg.hash());
  size_t failed = 0;
  std::vector<ScoreRecord> records;
  std::vector<Eigen::VectorXd> embeddings;
  std::vector<Provenance> provenance;
  {
    std::ofstream scores(fs::path(out_dir) / "scores.tsv");
    std::ofstream emb_out(fs::path(out_dir) / "embeddings.tsv");
    scores << "# racl-config " << hash << "\n";
    emb_out << "# racl-config " << hash << "\n";
    for (const auto& r : rows) {
      if (!r.ok) {
        ++failed;
        continue;
      }
      char line[512];
      std::snprintf(line, sizeof line, "%s\t%s\t%d\t%.12g\n", r.record.source_id.c_str(),
                    r.record.subset.c_str(), r.record.binary_label, r.record.score);
      scores << line;
      emb_out << r.record.source_id << '\t' << provenance_name(r.provenance);
      for (long j = 0; j < r.embedding.size(); ++j) {
        std::snprintf(line, sizeof line, "\t%.12g", r.embedding(j));
        emb_out << line;
      }
      emb_out << '\n';
      records.push_back(r.record);
      embeddings.push_back(r.embedding);
      provenance.push_back(r.provenance);
    }
  }
  if (records.empty()) throw Error(ErrorCode::kIo, "eval: no rows could be scored");

  const EvalReport report = subset_report(records);
  const DistanceReport dist = embedding_distances(embeddings, provenance);

  json j;
  j["config_hash"] = hash;
  j["pooled_eer"] = report.pooled_eer;
  j["average_eer"] = report.average_eer;
  j["subsets"] = json::object();
  for (const auto& [tag, value] : report.subset_eer) {
    const std::string key = tag.empty() ? "(default)" : tag;
    if (value)
      j["subsets"][key] = *value;
    else
      j["subsets"][key] = nullptr;
  }
  j["warnings"] = report.warnings;
  j["distance_matrix"] = json::object();
  const Provenance classes[4] = {Provenance::kBonaFide, Provenance::kSpoof,
                                 Provenance::kRecBonaFide, Provenance::kRecSpoof};
  for (Provenance a : classes) {
    json row = json::object();
    for (Provenance b : classes) {
      const auto& entry = dist.matrix[static_cast<int>(a)][static_cast<int>(b)];
      if (entry)
        row[provenance_name(b)] = *entry;
      else
        row[provenance_name(b)] = nullptr;
    }
    j["distance_matrix"][provenance_name(a)] = row;
  }
  if (dist.bona_vs_others)
    j["bona_vs_others_distance"] = *dist.bona_vs_others;
  else
    j["bona_vs_others_distance"] = nullptr;
  j["rows_scored"] = records.size();
  j["rows_failed"] = failed;

  std::ofstream report_out(fs::path(out_dir) / "report.json");
  report_out << j.dump(2) << "\n";
  report_out.close();

  if (failed > 0)
    throw Error(ErrorCode::kIo, std::to_string(failed) + " rows could not be scored");
}

CommandStatus cmd_verify(const RunConfig& cfg, bool inject_gradient_bug) {
  cfg.validate();
  VerifyOptions opts;
  opts.inject_gradient_bug = inject_gradient_bug;
  const auto results = run_verification(cfg, opts);
  for (const auto& r : results)
    std::printf("[%s] %-28s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
  return all_passed(results) ? CommandStatus::kOk : CommandStatus::kVerifyFailure;
}

}  // namespace racl
