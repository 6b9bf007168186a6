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

#ifndef RACL_COMMON_HPP
#define RACL_COMMON_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace racl {

enum class ErrorCode {
  kIo,          // missing files, unreadable paths
  kFormat,      // malformed or unsupported file contents
  kConfig,      // invalid configuration or arguments
  kShape,       // dimension mismatches
  kNumeric,     // non-finite values where finite required
  kDegenerate,  // zero-power signals, empty inputs
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Four-way provenance of an utterance. The binary classification label is
// 0 for bona fide only; every other variant (including reconstructed bona
// fide) is 1.
enum class Provenance { kBonaFide = 0, kSpoof = 1, kRecBonaFide = 2, kRecSpoof = 3 };

inline int binary_label(Provenance p) { return p == Provenance::kBonaFide ? 0 : 1; }

const char* provenance_name(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view s);

// Provenance of the analysis-resynthesis copy of a clip. Never bona fide.
inline Provenance reconstructed_of(Provenance p) {
  switch (p) {
    case Provenance::kBonaFide: return Provenance::kRecBonaFide;
    case Provenance::kSpoof: return Provenance::kRecSpoof;
    default: return p;
  }
}

struct AudioClip {
  std::vector<double> samples;  // amplitudes in [-1, 1]
  int sample_rate = 16000;
  Provenance label = Provenance::kBonaFide;
  std::string source_id;
};

}  // namespace racl

#endif  // RACL_COMMON_HPP
