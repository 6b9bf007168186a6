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

#include "racl/eval.hpp"

#include <algorithm>
#include <cmath>

namespace racl {

namespace {

// Interpolated FAR at the sign change of (FAR - FRR) over operating points.
double crossing(const std::vector<double>& far, const std::vector<double>& frr) {
  for (size_t i = 0; i + 1 < far.size(); ++i) {
    const double d0 = far[i] - frr[i];
    const double d1 = far[i + 1] - frr[i + 1];
    if (d0 >= 0.0 && d1 <= 0.0) {
      if (std::abs(d0 - d1) < 1e-15) return far[i];
      const double t = d0 / (d0 - d1);
      return far[i] + t * (far[i + 1] - far[i]);
    }
  }
  // FAR - FRR runs from 1 to -1 over the sentinel-padded sweep
  throw Error(ErrorCode::kNumeric, "eer: no FAR/FRR crossing found");
}

}  // namespace

double eer(std::vector<double> bona_scores, std::vector<double> spoof_scores) {
  if (bona_scores.empty() || spoof_scores.empty())
    throw Error(ErrorCode::kDegenerate, "eer: both score lists must be non-empty");
  std::sort(bona_scores.begin(), bona_scores.end());
  std::sort(spoof_scores.begin(), spoof_scores.end());

  std::vector<double> thresholds;
  thresholds.reserve(bona_scores.size() + spoof_scores.size() + 2);
  thresholds.push_back(std::min(bona_scores.front(), spoof_scores.front()) - 1.0);
  std::merge(bona_scores.begin(), bona_scores.end(), spoof_scores.begin(), spoof_scores.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  thresholds.push_back(std::max(bona_scores.back(), spoof_scores.back()) + 1.0);

  const double nb = static_cast<double>(bona_scores.size());
  const double ns = static_cast<double>(spoof_scores.size());
  std::vector<double> far, frr;
  far.reserve(thresholds.size());
  frr.reserve(thresholds.size());
  for (double tau : thresholds) {
    const auto b = std::lower_bound(bona_scores.begin(), bona_scores.end(), tau);
    const auto s = std::lower_bound(spoof_scores.begin(), spoof_scores.end(), tau);
    far.push_back(static_cast<double>(bona_scores.end() - b) / nb);  // bona >= tau
    frr.push_back(static_cast<double>(s - spoof_scores.begin()) / ns);  // spoof < tau
  }
  return 100.0 * crossing(far, frr);
}

double eer_oracle(const std::vector<double>& bona_scores, const std::vector<double>& spoof_scores) {
  if (bona_scores.empty() || spoof_scores.empty())
    throw Error(ErrorCode::kDegenerate, "eer_oracle: both score lists must be non-empty");

  std::vector<double> candidates;
  candidates.insert(candidates.end(), bona_scores.begin(), bona_scores.end());
  candidates.insert(candidates.end(), spoof_scores.begin(), spoof_scores.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<double> thresholds;
  thresholds.push_back(candidates.front() - 1.0);
  for (size_t i = 0; i < candidates.size(); ++i) {
    thresholds.push_back(candidates[i]);
    if (i + 1 < candidates.size())
      thresholds.push_back(0.5 * (candidates[i] + candidates[i + 1]));
  }
  thresholds.push_back(candidates.back() + 1.0);

  std::vector<double> far, frr;
  for (double tau : thresholds) {
    size_t fa = 0, fr = 0;
    for (double b : bona_scores)
      if (b >= tau) ++fa;
    for (double s : spoof_scores)
      if (s < tau) ++fr;
    far.push_back(static_cast<double>(fa) / static_cast<double>(bona_scores.size()));
    frr.push_back(static_cast<double>(fr) / static_cast<double>(spoof_scores.size()));
  }
  return 100.0 * crossing(far, frr);
}

EvalReport subset_report(const std::vector<ScoreRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::kDegenerate, "subset_report: no records");

  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_subset;
  std::vector<double> all_bona, all_spoof;
  for (const auto& r : records) {
    auto& bucket = by_subset[r.subset];
    (r.binary_label == 0 ? bucket.first : bucket.second).push_back(r.score);
    (r.binary_label == 0 ? all_bona : all_spoof).push_back(r.score);
  }
  if (all_bona.empty() || all_spoof.empty())
    throw Error(ErrorCode::kDegenerate, "subset_report: need both classes pooled");

  EvalReport report;
  report.pooled_eer = eer(all_bona, all_spoof);
  double sum = 0.0;
  int defined = 0;
  for (auto& [tag, bucket] : by_subset) {
    if (bucket.first.empty() || bucket.second.empty()) {
      report.subset_eer[tag] = std::nullopt;
      report.warnings.push_back("subset '" + tag + "' has a single class; EER undefined, excluded");
      continue;
    }
    const double e = eer(bucket.first, bucket.second);
    report.subset_eer[tag] = e;
    sum += e;
    ++defined;
  }
  report.average_eer = defined > 0 ? sum / defined : report.pooled_eer;
  return report;
}

DistanceReport embedding_distances(const std::vector<Eigen::VectorXd>& embeddings,
                                   const std::vector<Provenance>& provenance) {
  if (embeddings.size() != provenance.size())
    throw Error(ErrorCode::kShape, "embedding_distances: length mismatch");
  const size_t n = embeddings.size();

  double sum[4][4] = {};
  long count[4][4] = {};
  double bona_sum = 0.0;
  long bona_count = 0;

  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double dist = (embeddings[i] - embeddings[j]).norm();
      const int a = static_cast<int>(provenance[i]);
      const int b = static_cast<int>(provenance[j]);
      sum[a][b] += dist;
      ++count[a][b];
      if (a != b) {
        sum[b][a] += dist;
        ++count[b][a];
      }
      const bool bona_i = provenance[i] == Provenance::kBonaFide;
      const bool bona_j = provenance[j] == Provenance::kBonaFide;
      if (bona_i != bona_j) {
        bona_sum += dist;
        ++bona_count;
      }
    }
  }

  DistanceReport report;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (count[a][b] > 0) report.matrix[a][b] = sum[a][b] / static_cast<double>(count[a][b]);
  if (bona_count > 0) report.bona_vs_others = bona_sum / static_cast<double>(bona_count);
  return report;
}

}  // namespace racl
