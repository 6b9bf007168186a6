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

#include "racl/common.hpp"

#include "racl/rng.hpp"

namespace racl {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kBonaFide: return "bonafide";
    case Provenance::kSpoof: return "spoof";
    case Provenance::kRecBonaFide: return "rec_bonafide";
    case Provenance::kRecSpoof: return "rec_spoof";
  }
  return "unknown";
}

std::optional<Provenance> parse_provenance(std::string_view s) {
  if (s == "bonafide") return Provenance::kBonaFide;
  if (s == "spoof") return Provenance::kSpoof;
  if (s == "rec_bonafide") return Provenance::kRecBonaFide;
  if (s == "rec_spoof") return Provenance::kRecSpoof;
  return std::nullopt;
}

uint64_t Rng::derive(uint64_t seed, std::string_view stream, uint64_t index) {
  // FNV-1a over (seed, stream, index), then a splitmix64 finalizer.
  uint64_t h = 14695981039346656037ull;
  auto mix_byte = [&h](unsigned char b) {
    h ^= b;
    h *= 1099511628211ull;
  };
  for (int i = 0; i < 8; ++i) mix_byte(static_cast<unsigned char>(seed >> (8 * i)));
  for (char c : stream) mix_byte(static_cast<unsigned char>(c));
  for (int i = 0; i < 8; ++i) mix_byte(static_cast<unsigned char>(index >> (8 * i)));
  h += 0x9e3779b97f4a7c15ull;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
  return h ^ (h >> 31);
}

}  // namespace racl
