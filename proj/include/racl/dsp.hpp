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

#ifndef RACL_DSP_HPP
#define RACL_DSP_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "racl/common.hpp"

namespace racl {

struct SpectrogramConfig {
  int fft_size = 1024;   // power of two
  int hop = 256;
  int mel_bins = 80;
  double fmin = 0.0;
  double fmax = 8000.0;
  int griffin_lim_iters = 32;

  int bins() const { return fft_size / 2 + 1; }
  void validate(int sample_rate) const;
};

// In-place iterative radix-2 FFT; size must be a power of two.
void fft(std::vector<std::complex<double>>& x, bool inverse);

std::vector<double> hann_window(int size);  // periodic

// One-sided STFT, frames x bins. With center = true the signal is
// reflection-padded by fft_size/2 on each side (frame t centered at t*hop);
// with center = false frames start at t*hop and T = (len - fft)/hop + 1.
Eigen::MatrixXcd stft(const std::vector<double>& samples, const SpectrogramConfig& cfg,
                      bool center = true);

// Weighted overlap-add inverse; exact for COLA-satisfying hop (fft/4 with Hann).
std::vector<double> istft(const Eigen::MatrixXcd& spec, const SpectrogramConfig& cfg,
                          size_t out_len, bool center = true);

// Triangular mel filterbank on the HTK mel scale, mel_bins x bins.
Eigen::MatrixXd mel_filterbank(const SpectrogramConfig& cfg, int sample_rate);

// mag (frames x bins) -> mel (frames x mel_bins).
Eigen::MatrixXd mel_project(const Eigen::MatrixXd& mag, const Eigen::MatrixXd& filterbank);

// Moore-Penrose pseudo-inverse recovery with nonnegativity clamp.
Eigen::MatrixXd mel_invert(const Eigen::MatrixXd& mel, const Eigen::MatrixXd& filterbank);

// Alternating-projection phase retrieval from a magnitude spectrogram.
// Initial phase is random (seeded). If errors != nullptr it receives the
// spectral-convergence error after each iteration.
std::vector<double> griffin_lim(const Eigen::MatrixXd& mag, const SpectrogramConfig& cfg,
                                size_t out_len, uint64_t seed,
                                std::vector<double>* errors = nullptr);

}  // namespace racl

#endif  // RACL_DSP_HPP
