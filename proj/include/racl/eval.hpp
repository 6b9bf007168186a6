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

#ifndef RACL_EVAL_HPP
#define RACL_EVAL_HPP

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "racl/common.hpp"

namespace racl {

struct ScoreRecord {
  std::string source_id;
  std::string subset;
  int binary_label = 0;         // 0 bona fide, 1 non-bona-fide
  double score = 0.5;           // spoof probability
};

// EER in percent. Threshold convention: FAR(tau) = fraction of bona scores
// >= tau, FRR(tau) = fraction of spoof scores < tau; the crossing is
// linearly interpolated between the bracketing operating points.
double eer(std::vector<double> bona_scores, std::vector<double> spoof_scores);

// O(n^2) brute-force reference: every candidate threshold (scores plus
// midpoints) evaluated by direct counting, crossing found by scan. Must
// agree with eer() within 1e-9 everywhere.
double eer_oracle(const std::vector<double>& bona_scores, const std::vector<double>& spoof_scores);

struct EvalReport {
  std::map<std::string, std::optional<double>> subset_eer;  // nullopt = single-class subset
  double pooled_eer = 0.0;
  double average_eer = 0.0;  // unweighted mean over defined subsets
  std::vector<std::string> warnings;
};

EvalReport subset_report(const std::vector<ScoreRecord>& records);

struct DistanceReport {
  // mean pairwise Euclidean distance per provenance pair; indexed by the
  // Provenance enum values. Entries with too few samples are undefined.
  std::optional<double> matrix[4][4];
  std::optional<double> bona_vs_others;  // mean over all bona/non-bona pairs
};

DistanceReport embedding_distances(const std::vector<Eigen::VectorXd>& embeddings,
                                   const std::vector<Provenance>& provenance);

}  // namespace racl

#endif  // RACL_EVAL_HPP
