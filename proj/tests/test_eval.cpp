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

#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "racl/eval.hpp"
#include "racl/rng.hpp"

namespace {

using racl::Provenance;

std::vector<double> random_scores(int n, racl::Rng& rng, double lo, double hi) {
  std::vector<double> out(static_cast<size_t>(n));
  for (auto& v : out) v = rng.uniform(lo, hi);
  return out;
}

}  // namespace

TEST_CASE("eer closed-form cases") {
  // perfect separation (bona low, spoof high under the spoof-probability
  // convention)
  CHECK(racl::eer({0.1, 0.2}, {0.8, 0.9}) == doctest::Approx(0.0));
  // perfectly inverted scores
  CHECK(racl::eer({0.8, 0.9}, {0.1, 0.2}) == doctest::Approx(100.0));
  // fully interleaved: chance
  CHECK(racl::eer({0.1, 0.3, 0.5, 0.7}, {0.2, 0.4, 0.6, 0.8}) == doctest::Approx(50.0));
  // all scores tied
  CHECK(racl::eer({0.5, 0.5}, {0.5, 0.5}) == doctest::Approx(50.0));
}

TEST_CASE("eer rejects empty classes") {
  CHECK_THROWS_AS(racl::eer({}, {0.5}), racl::Error);
  CHECK_THROWS_AS(racl::eer({0.5}, {}), racl::Error);
}

TEST_CASE("eer agrees with the brute-force oracle") {
  racl::Rng rng(55);
  for (int trial = 0; trial < 300; ++trial) {
    const int nb = 1 + static_cast<int>(rng.uniform(0.0, 12.0));
    const int ns = 1 + static_cast<int>(rng.uniform(0.0, 12.0));
    auto bona = random_scores(nb, rng, 0.0, 1.0);
    auto spoof = random_scores(ns, rng, 0.0, 1.0);
    // inject ties between and within classes
    if (trial % 3 == 0 && nb > 1) bona[1] = bona[0];
    if (trial % 4 == 0) spoof[0] = bona[0];
    CHECK(std::abs(racl::eer(bona, spoof) - racl::eer_oracle(bona, spoof)) <= 1e-9);
  }
}

TEST_CASE("eer is invariant under monotone score transforms") {
  racl::Rng rng(56);
  const auto bona = random_scores(15, rng, 0.0, 1.0);
  const auto spoof = random_scores(11, rng, 0.0, 1.0);
  const double base = racl::eer(bona, spoof);

  auto warp = [](std::vector<double> v) {
    for (auto& x : v) x = std::tanh(3.0 * x - 1.0);
    return v;
  };
  CHECK(racl::eer(warp(bona), warp(spoof)) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("subset_report pools, averages, and flags single-class subsets") {
  std::vector<racl::ScoreRecord> records;
  auto add = [&records](const std::string& subset, int label, double score) {
    racl::ScoreRecord r;
    r.source_id = "u" + std::to_string(records.size());
    r.subset = subset;
    r.binary_label = label;
    r.score = score;
    records.push_back(r);
  };

  // subset a: EER 0, subset b: EER 100, subset c: spoof only
  add("a", 0, 0.1);
  add("a", 0, 0.2);
  add("a", 1, 0.8);
  add("a", 1, 0.9);
  add("b", 0, 0.8);
  add("b", 0, 0.9);
  add("b", 1, 0.1);
  add("b", 1, 0.2);
  add("c", 1, 0.7);

  const racl::EvalReport report = racl::subset_report(records);
  REQUIRE(report.subset_eer.count("a") == 1);
  REQUIRE(report.subset_eer.count("b") == 1);
  REQUIRE(report.subset_eer.count("c") == 1);
  CHECK(report.subset_eer.at("a").value() == doctest::Approx(0.0));
  CHECK(report.subset_eer.at("b").value() == doctest::Approx(100.0));
  CHECK_FALSE(report.subset_eer.at("c").has_value());
  CHECK(report.average_eer == doctest::Approx(50.0));
  CHECK_FALSE(report.warnings.empty());

  // pooled EER computed over all records together, against the oracle
  std::vector<double> bona, spoof;
  for (const auto& r : records) (r.binary_label == 0 ? bona : spoof).push_back(r.score);
  CHECK(report.pooled_eer == doctest::Approx(racl::eer_oracle(bona, spoof)).epsilon(1e-12));
}

TEST_CASE("subset_report averages defined subsets only") {
  std::vector<racl::ScoreRecord> records;
  auto add = [&records](const std::string& subset, int label, double score) {
    racl::ScoreRecord r;
    r.subset = subset;
    r.binary_label = label;
    r.score = score;
    records.push_back(r);
  };
  // three subsets with EERs 0, 50, 100 -> average 50
  add("x", 0, 0.0);
  add("x", 1, 1.0);
  add("y", 0, 0.5);
  add("y", 1, 0.5);
  add("z", 0, 1.0);
  add("z", 1, 0.0);
  const racl::EvalReport report = racl::subset_report(records);
  CHECK(report.average_eer == doctest::Approx((0.0 + 50.0 + 100.0) / 3.0));
}

TEST_CASE("embedding_distances on a 3-4-5 construction") {
  // two bona at distance 2, two spoof at distance 2, cross pairs vary
  std::vector<Eigen::VectorXd> emb;
  std::vector<Provenance> prov;
  auto add = [&](double x, double y, Provenance p) {
    Eigen::VectorXd v(2);
    v << x, y;
    emb.push_back(v);
    prov.push_back(p);
  };
  add(0.0, 0.0, Provenance::kBonaFide);
  add(3.0, 0.0, Provenance::kBonaFide);
  add(0.0, 4.0, Provenance::kSpoof);
  add(3.0, 4.0, Provenance::kSpoof);

  const racl::DistanceReport r = racl::embedding_distances(emb, prov);
  const int b = static_cast<int>(Provenance::kBonaFide);
  const int s = static_cast<int>(Provenance::kSpoof);
  CHECK(r.matrix[b][b].value() == doctest::Approx(3.0));
  CHECK(r.matrix[s][s].value() == doctest::Approx(3.0));
  // cross pairs: two at distance 4, two at distance 5
  CHECK(r.matrix[b][s].value() == doctest::Approx(4.5));
  CHECK(r.matrix[s][b].value() == doctest::Approx(4.5));
  CHECK(r.bona_vs_others.value() == doctest::Approx(4.5));
  // no reconstructed samples present
  const int rb = static_cast<int>(Provenance::kRecBonaFide);
  CHECK_FALSE(r.matrix[rb][rb].has_value());
  CHECK_FALSE(r.matrix[b][rb].has_value());
}

TEST_CASE("embedding_distances of coincident points is zero") {
  std::vector<Eigen::VectorXd> emb(3, Eigen::VectorXd::Zero(4));
  std::vector<Provenance> prov(3, Provenance::kBonaFide);
  const racl::DistanceReport r = racl::embedding_distances(emb, prov);
  CHECK(r.matrix[0][0].value() == 0.0);
}

TEST_CASE("embedding_distances matches a brute-force oracle and scales linearly") {
  racl::Rng rng(57);
  std::vector<Eigen::VectorXd> emb;
  std::vector<Provenance> prov;
  const Provenance classes[4] = {Provenance::kBonaFide, Provenance::kSpoof,
                                 Provenance::kRecBonaFide, Provenance::kRecSpoof};
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd v(3);
    for (int j = 0; j < 3; ++j) v(j) = rng.normal();
    emb.push_back(v);
    prov.push_back(classes[i % 4]);
  }
  const racl::DistanceReport r = racl::embedding_distances(emb, prov);

  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      double sum = 0.0;
      long count = 0;
      for (size_t i = 0; i < emb.size(); ++i) {
        for (size_t j = 0; j < emb.size(); ++j) {
          if (i == j) continue;
          if (static_cast<int>(prov[i]) != a || static_cast<int>(prov[j]) != b) continue;
          if (a == b && j < i) continue;  // unordered within a class
          sum += (emb[i] - emb[j]).norm();
          ++count;
        }
      }
      REQUIRE(r.matrix[a][b].has_value());
      CHECK(r.matrix[a][b].value() == doctest::Approx(sum / static_cast<double>(count)));
    }
  }

  // doubling every embedding doubles every mean distance
  auto scaled = emb;
  for (auto& v : scaled) v *= 2.0;
  const racl::DistanceReport r2 = racl::embedding_distances(scaled, prov);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      CHECK(r2.matrix[a][b].value() == doctest::Approx(2.0 * r.matrix[a][b].value()));
  CHECK(r2.bona_vs_others.value() == doctest::Approx(2.0 * r.bona_vs_others.value()));
}
