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

#include "racl/dsp.hpp"

#include <cmath>

#include "racl/rng.hpp"

namespace racl {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

// Reflection-padded sample lookup (librosa-style 'reflect' without edge repeat).
double reflect_at(const std::vector<double>& x, long i) {
  const long n = static_cast<long>(x.size());
  if (n == 1) return x[0];
  const long period = 2 * (n - 1);
  long j = i % period;
  if (j < 0) j += period;
  if (j >= n) j = period - j;
  return x[static_cast<size_t>(j)];
}

}  // namespace

void SpectrogramConfig::validate(int sample_rate) const {
  if (!is_pow2(fft_size)) throw Error(ErrorCode::kConfig, "fft_size must be a power of two");
  if (hop <= 0 || hop > fft_size) throw Error(ErrorCode::kConfig, "hop must be in (0, fft_size]");
  if (mel_bins <= 0 || mel_bins >= fft_size / 2 + 1)
    throw Error(ErrorCode::kConfig, "mel_bins must be in (0, fft_size/2 + 1)");
  if (!(fmin < fmax && fmax <= sample_rate / 2.0))
    throw Error(ErrorCode::kConfig, "require fmin < fmax <= sample_rate/2");
  if (griffin_lim_iters < 1) throw Error(ErrorCode::kConfig, "griffin_lim_iters must be >= 1");
}

void fft(std::vector<std::complex<double>>& x, bool inverse) {
  const size_t n = x.size();
  if (!is_pow2(static_cast<int>(n))) throw Error(ErrorCode::kShape, "fft size must be a power of two");
  // bit reversal
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const auto u = x[i + k];
        const auto v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (auto& v : x) v /= static_cast<double>(n);
  }
}

std::vector<double> hann_window(int size) {
  std::vector<double> w(static_cast<size_t>(size));
  for (int i = 0; i < size; ++i)
    w[static_cast<size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / size);
  return w;
}

Eigen::MatrixXcd stft(const std::vector<double>& samples, const SpectrogramConfig& cfg, bool center) {
  const int fft_size = cfg.fft_size;
  const long n = static_cast<long>(samples.size());
  if (n < fft_size)
    throw Error(ErrorCode::kShape, "stft: clip shorter than one frame (" + std::to_string(n) + " < " +
                                       std::to_string(fft_size) + ")");
  const long frames = center ? n / cfg.hop + 1 : (n - fft_size) / cfg.hop + 1;
  const auto window = hann_window(fft_size);
  const int bins = cfg.bins();

  Eigen::MatrixXcd out(frames, bins);
  std::vector<std::complex<double>> buf(static_cast<size_t>(fft_size));
  for (long t = 0; t < frames; ++t) {
    const long start = center ? t * cfg.hop - fft_size / 2 : t * cfg.hop;
    for (int i = 0; i < fft_size; ++i) {
      const long idx = start + i;
      const double s = center ? reflect_at(samples, idx) : samples[static_cast<size_t>(idx)];
      buf[static_cast<size_t>(i)] = s * window[static_cast<size_t>(i)];
    }
    fft(buf, false);
    for (int b = 0; b < bins; ++b) out(t, b) = buf[static_cast<size_t>(b)];
  }
  return out;
}

std::vector<double> istft(const Eigen::MatrixXcd& spec, const SpectrogramConfig& cfg, size_t out_len,
                          bool center) {
  const int fft_size = cfg.fft_size;
  const int bins = cfg.bins();
  if (spec.cols() != bins) throw Error(ErrorCode::kShape, "istft: wrong number of frequency bins");
  const long frames = spec.rows();
  const auto window = hann_window(fft_size);

  const long pad = center ? fft_size / 2 : 0;
  const long total = (frames - 1) * cfg.hop + fft_size;
  std::vector<double> acc(static_cast<size_t>(total), 0.0);
  std::vector<double> wsum(static_cast<size_t>(total), 0.0);
  std::vector<std::complex<double>> buf(static_cast<size_t>(fft_size));

  for (long t = 0; t < frames; ++t) {
    for (int b = 0; b < bins; ++b) buf[static_cast<size_t>(b)] = spec(t, b);
    for (int b = bins; b < fft_size; ++b) buf[static_cast<size_t>(b)] = std::conj(spec(t, fft_size - b));
    fft(buf, true);
    const long start = t * cfg.hop;
    for (int i = 0; i < fft_size; ++i) {
      const double w = window[static_cast<size_t>(i)];
      acc[static_cast<size_t>(start + i)] += buf[static_cast<size_t>(i)].real() * w;
      wsum[static_cast<size_t>(start + i)] += w * w;
    }
  }

  std::vector<double> out(out_len, 0.0);
  for (size_t i = 0; i < out_len; ++i) {
    const long j = static_cast<long>(i) + pad;
    if (j < total && wsum[static_cast<size_t>(j)] > 1e-11)
      out[i] = acc[static_cast<size_t>(j)] / wsum[static_cast<size_t>(j)];
  }
  return out;
}

Eigen::MatrixXd mel_filterbank(const SpectrogramConfig& cfg, int sample_rate) {
  cfg.validate(sample_rate);
  const int bins = cfg.bins();
  const double mel_lo = hz_to_mel(cfg.fmin);
  const double mel_hi = hz_to_mel(cfg.fmax);
  std::vector<double> edges(static_cast<size_t>(cfg.mel_bins) + 2);
  for (int i = 0; i < cfg.mel_bins + 2; ++i)
    edges[static_cast<size_t>(i)] =
        mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (cfg.mel_bins + 1));

  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(cfg.mel_bins, bins);
  for (int m = 0; m < cfg.mel_bins; ++m) {
    const double left = edges[static_cast<size_t>(m)];
    const double peak = edges[static_cast<size_t>(m) + 1];
    const double right = edges[static_cast<size_t>(m) + 2];
    for (int b = 0; b < bins; ++b) {
      const double f = static_cast<double>(b) * sample_rate / cfg.fft_size;
      double w = 0.0;
      if (f > left && f < peak)
        w = (f - left) / (peak - left);
      else if (f >= peak && f < right)
        w = (right - f) / (right - peak);
      fb(m, b) = w;
    }
  }
  return fb;
}

Eigen::MatrixXd mel_project(const Eigen::MatrixXd& mag, const Eigen::MatrixXd& filterbank) {
  if (mag.cols() != filterbank.cols())
    throw Error(ErrorCode::kShape, "mel_project: magnitude/filterbank bin mismatch");
  if ((mag.array() < 0.0).any()) throw Error(ErrorCode::kNumeric, "mel_project: negative magnitudes");
  return mag * filterbank.transpose();
}

Eigen::MatrixXd mel_invert(const Eigen::MatrixXd& mel, const Eigen::MatrixXd& filterbank) {
  if (mel.cols() != filterbank.rows())
    throw Error(ErrorCode::kShape, "mel_invert: mel/filterbank size mismatch");
  Eigen::MatrixXd pinv = filterbank.completeOrthogonalDecomposition().pseudoInverse();
  Eigen::MatrixXd mag = mel * pinv.transpose();
  return mag.cwiseMax(0.0);
}

std::vector<double> griffin_lim(const Eigen::MatrixXd& mag, const SpectrogramConfig& cfg,
                                size_t out_len, uint64_t seed, std::vector<double>* errors) {
  if ((mag.array() < 0.0).any()) throw Error(ErrorCode::kNumeric, "griffin_lim: negative magnitudes");
  const double mag_norm = mag.norm();
  Rng rng(seed);
  Eigen::MatrixXcd spec(mag.rows(), mag.cols());
  for (long t = 0; t < mag.rows(); ++t) {
    for (long b = 0; b < mag.cols(); ++b) {
      const double phi = rng.uniform(0.0, 2.0 * M_PI);
      spec(t, b) = mag(t, b) * std::complex<double>(std::cos(phi), std::sin(phi));
    }
  }

  std::vector<double> y;
  if (errors) errors->clear();
  for (int it = 0; it < cfg.griffin_lim_iters; ++it) {
    y = istft(spec, cfg, out_len, true);
    Eigen::MatrixXcd est = stft(y, cfg, true);
    if (errors) {
      const double err = (est.cwiseAbs() - mag).norm() / (mag_norm > 0 ? mag_norm : 1.0);
      errors->push_back(err);
    }
    // keep estimated phase, impose the target magnitude
    for (long t = 0; t < mag.rows(); ++t) {
      for (long b = 0; b < mag.cols(); ++b) {
        const double a = std::abs(est(t, b));
        spec(t, b) = a > 1e-16 ? est(t, b) / a * mag(t, b)
                               : std::complex<double>(mag(t, b), 0.0);
      }
    }
  }
  return istft(spec, cfg, out_len, true);
}

}  // namespace racl
