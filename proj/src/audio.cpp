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

#include "racl/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace racl {

namespace {

uint32_t read_u32le(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16le(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32le(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u16le(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

// Zeroth-order modified Bessel function, power series.
double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double half_x = x / 2.0;
  for (int k = 1; k < 64; ++k) {
    term *= (half_x / k) * (half_x / k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

}  // namespace

AudioClip read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open WAV file: " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  const size_t n = data.size();

  auto malformed = [&path](const char* what) {
    return Error(ErrorCode::kFormat, std::string("malformed WAV header (") + what + "): " + path);
  };
  if (n < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0)
    throw malformed("not RIFF/WAVE");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* pcm = nullptr;
  size_t pcm_len = 0;

  size_t off = 12;
  while (off + 8 <= n) {
    const uint32_t chunk_len = read_u32le(p + off + 4);
    if (off + 8 + chunk_len > n) throw malformed("chunk overruns file");
    if (std::memcmp(p + off, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw malformed("short fmt chunk");
      format = read_u16le(p + off + 8);
      channels = read_u16le(p + off + 10);
      rate = read_u32le(p + off + 12);
      bits = read_u16le(p + off + 22);
      have_fmt = true;
    } else if (std::memcmp(p + off, "data", 4) == 0) {
      pcm = p + off + 8;
      pcm_len = chunk_len;
    }
    off += 8 + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }
  if (!have_fmt || pcm == nullptr) throw malformed("missing fmt or data chunk");
  if (channels == 0 || rate == 0) throw malformed("zero channels or rate");

  const bool pcm16 = (format == 1 && bits == 16);
  const bool float32 = (format == 3 && bits == 32);
  if (!pcm16 && !float32)
    throw Error(ErrorCode::kFormat, "unsupported WAV encoding (format " + std::to_string(format) +
                                        ", " + std::to_string(bits) + " bit): " + path);

  const size_t bytes_per_sample = bits / 8;
  const size_t frame_bytes = bytes_per_sample * channels;
  const size_t frames = pcm_len / frame_bytes;

  AudioClip clip;
  clip.sample_rate = static_cast<int>(rate);
  clip.source_id = path;
  clip.samples.resize(frames);
  for (size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (uint16_t c = 0; c < channels; ++c) {
      const unsigned char* s = pcm + f * frame_bytes + c * bytes_per_sample;
      if (pcm16) {
        int16_t v;
        std::memcpy(&v, s, 2);
        acc += static_cast<double>(v) / 32768.0;
      } else {
        float v;
        std::memcpy(&v, s, 4);
        acc += static_cast<double>(v);
      }
    }
    clip.samples[f] = acc / channels;
  }
  for (double& v : clip.samples) v = std::clamp(v, -1.0, 1.0);
  return clip;
}

void write_wav(const std::string& path, const AudioClip& clip) {
  const uint32_t n = static_cast<uint32_t>(clip.samples.size());
  const uint32_t data_bytes = n * 2;
  std::string out;
  out.reserve(44 + data_bytes);
  out.append("RIFF");
  put_u32le(out, 36 + data_bytes);
  out.append("WAVE");
  out.append("fmt ");
  put_u32le(out, 16);
  put_u16le(out, 1);  // PCM
  put_u16le(out, 1);  // mono
  put_u32le(out, static_cast<uint32_t>(clip.sample_rate));
  put_u32le(out, static_cast<uint32_t>(clip.sample_rate) * 2);
  put_u16le(out, 2);
  put_u16le(out, 16);
  out.append("data");
  put_u32le(out, data_bytes);
  for (double v : clip.samples) {
    double scaled = v * 32768.0;
    // round half away from zero
    double r = scaled >= 0.0 ? std::floor(scaled + 0.5) : std::ceil(scaled - 0.5);
    int32_t q = static_cast<int32_t>(std::clamp(r, -32768.0, 32767.0));
    put_u16le(out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot write WAV file: " + path);
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw Error(ErrorCode::kIo, "short write on WAV file: " + path);
}

AudioClip resample(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0) throw Error(ErrorCode::kConfig, "resample: target rate must be positive");
  if (clip.sample_rate == target_rate) return clip;

  const double ratio = static_cast<double>(target_rate) / clip.sample_rate;
  const double cutoff = std::min(1.0, ratio);  // in units of input Nyquist
  const double half_width = 32.0 / cutoff;     // widen when downsampling
  const double beta = 8.0;
  const double i0_beta = bessel_i0(beta);

  const size_t in_len = clip.samples.size();
  const size_t out_len = static_cast<size_t>(std::llround(static_cast<double>(in_len) * ratio));

  AudioClip out = clip;
  out.sample_rate = target_rate;
  out.samples.assign(out_len, 0.0);

  for (size_t m = 0; m < out_len; ++m) {
    const double t = static_cast<double>(m) / ratio;  // position in input samples
    const long j0 = static_cast<long>(std::ceil(t - half_width));
    const long j1 = static_cast<long>(std::floor(t + half_width));
    double acc = 0.0;
    for (long j = std::max(0l, j0); j <= std::min(static_cast<long>(in_len) - 1, j1); ++j) {
      const double d = t - static_cast<double>(j);
      const double u = d / half_width;  // in [-1, 1]
      const double w = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - u * u))) / i0_beta;
      acc += clip.samples[static_cast<size_t>(j)] * cutoff * sinc(cutoff * d) * w;
    }
    out.samples[m] = acc;
  }
  return out;
}

AudioClip fix_length(const AudioClip& clip, size_t target_len) {
  if (clip.samples.empty()) throw Error(ErrorCode::kDegenerate, "fix_length: empty clip " + clip.source_id);
  if (target_len == 0) throw Error(ErrorCode::kConfig, "fix_length: target length must be positive");
  AudioClip out = clip;
  out.samples.resize(target_len);
  const size_t n = clip.samples.size();
  if (target_len > n) {
    for (size_t i = n; i < target_len; ++i) out.samples[i] = clip.samples[i % n];
  }
  return out;
}

Manifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest: " + path);
  Manifest m;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string tag, hex;
      hs >> tag >> hex;
      if (tag == "racl-config") m.config_hash = std::stoull(hex, nullptr, 16);
      continue;
    }
    std::vector<std::string> cols;
    size_t start = 0;
    while (true) {
      size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() < 2)
      throw Error(ErrorCode::kFormat,
                  "manifest " + path + " line " + std::to_string(lineno) + ": expected path<TAB>provenance");
    auto prov = parse_provenance(cols[1]);
    if (!prov)
      throw Error(ErrorCode::kFormat, "manifest " + path + " line " + std::to_string(lineno) +
                                          ": unknown provenance '" + cols[1] + "'");
    ManifestRow row;
    row.path = cols[0];
    row.provenance = *prov;
    if (cols.size() >= 3) row.subset = cols[2];
    m.rows.push_back(std::move(row));
  }
  return m;
}

void write_manifest(const std::string& path, const Manifest& manifest) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write manifest: " + path);
  if (manifest.config_hash != 0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(manifest.config_hash));
    out << "# racl-config " << buf << "\n";
  }
  for (const auto& row : manifest.rows) {
    out << row.path << '\t' << provenance_name(row.provenance);
    if (!row.subset.empty()) out << '\t' << row.subset;
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "short write on manifest: " + path);
}

}  // namespace racl
