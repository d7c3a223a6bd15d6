// f0reg/data.cpp
//
// Copyright 2026  The f0reg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "f0reg/data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "f0reg/error.hpp"
#include "f0reg/seed.hpp"

namespace f0reg {

namespace fs = std::filesystem;

namespace {

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::ostream& os, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                              static_cast<char>((v >> 16) & 0xff),
                              static_cast<char>((v >> 24) & 0xff)};
  os.write(b.data(), 4);
}

void put_u16(std::ostream& os, std::uint16_t v) {
  const std::array<char, 2> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  os.write(b.data(), 2);
}

std::string resolve(const fs::path& base, const std::string& p) {
  if (p.empty() || p == "-") return {};
  const fs::path path(p);
  return path.is_absolute() ? p : (base / path).lexically_normal().string();
}

}  // namespace

Waveform read_wav(std::istream& is) {
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw IngestError("not a RIFF/WAVE file");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::size_t len = read_u32(chunk + 4);
    const std::size_t avail = std::min(len, bytes.size() - pos - 8);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw IngestError("truncated fmt chunk");
      format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_len = avail;
    }
    pos += 8 + len + (len & 1);
  }
  if (!have_fmt || data == nullptr) throw IngestError("missing fmt or data chunk");
  if (format != 1 || bits != 16)
    throw IngestError(fmt::format("unsupported encoding (format {}, {} bits); need 16-bit PCM",
                                  format, bits));
  if (channels != 1) throw IngestError(fmt::format("{} channels; need mono", channels));
  if (rate != static_cast<std::uint32_t>(kDefaultSampleRate))
    throw IngestError(fmt::format("sample rate {} Hz; need {} Hz (no resampling)", rate,
                                  kDefaultSampleRate));

  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  w.samples.resize(data_len / 2);
  for (std::size_t i = 0; i < w.samples.size(); ++i)
    w.samples[i] = static_cast<std::int16_t>(read_u16(data + 2 * i)) / 32768.0;
  return w;
}

void write_wav(std::ostream& os, const Waveform& w) {
  const auto data_len = static_cast<std::uint32_t>(2 * w.samples.size());
  os.write("RIFF", 4);
  put_u32(os, 36 + data_len);
  os.write("WAVEfmt ", 8);
  put_u32(os, 16);
  put_u16(os, 1);
  put_u16(os, 1);
  put_u32(os, static_cast<std::uint32_t>(w.sample_rate));
  put_u32(os, static_cast<std::uint32_t>(w.sample_rate) * 2);
  put_u16(os, 2);
  put_u16(os, 16);
  os.write("data", 4);
  put_u32(os, data_len);
  for (double s : w.samples) {
    const double code = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    put_u16(os, static_cast<std::uint16_t>(static_cast<std::int16_t>(code)));
  }
}

Waveform load_audio(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IngestError(fmt::format("cannot open {}", path.string()));
  try {
    return read_wav(is);
  } catch (const IngestError& e) {
    throw IngestError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void save_audio(const fs::path& path, const Waveform& w) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IngestError(fmt::format("cannot write {}", path.string()));
  write_wav(os, w);
}

GroundTruthF0 read_ground_truth(std::istream& is, const FramingConfig& framing,
                                int sample_rate, std::size_t column) {
  GroundTruthF0 truth;
  truth.framing = framing;
  truth.sample_rate = sample_rate;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string token;
    for (std::size_t c = 0; c <= column; ++c)
      if (!(fields >> token))
        throw ParseError(fmt::format("line {}: no column {}", line_no, column));
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ParseError(fmt::format("line {}: '{}' is not a number", line_no, token));
    }
    if (!std::isfinite(value) || value < 0.0)
      throw ParseError(fmt::format("line {}: invalid f0 {}", line_no, token));
    truth.f0.push_back(value);
  }
  return truth;
}

GroundTruthF0 load_ground_truth(const fs::path& path, const FramingConfig& framing,
                                int sample_rate, std::size_t column) {
  std::ifstream is(path);
  if (!is) throw ParseError(fmt::format("cannot open {}", path.string()));
  try {
    return read_ground_truth(is, framing, sample_rate, column);
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void save_ground_truth(const fs::path& path, const GroundTruthF0& truth) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ParseError(fmt::format("cannot write {}", path.string()));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double t = (static_cast<double>(i * truth.framing.hop) +
                      0.5 * static_cast<double>(truth.framing.frame_len)) /
                     truth.sample_rate;
    os << fmt::format("{:.6f}\t{:.6f}\n", truth.f0[i], t);
  }
}

std::size_t reconcile_frame_counts(std::size_t estimates, std::size_t truth,
                                   std::size_t tolerance) {
  const std::size_t diff = estimates > truth ? estimates - truth : truth - estimates;
  if (diff > tolerance)
    throw AlignmentError(fmt::format("{} estimated frames vs {} reference frames", estimates,
                                     truth));
  return std::min(estimates, truth);
}

std::optional<GroundTruthF0> trim_edges(const GroundTruthF0& truth, std::size_t n_head,
                                        std::size_t n_tail) {
  auto kept = trim_edges(std::span<const double>(truth.f0), n_head, n_tail);
  if (!kept) return std::nullopt;
  GroundTruthF0 out = truth;
  out.f0 = std::move(*kept);
  return out;
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kCv: return "cv";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "cv") return Split::kCv;
  if (name == "test") return Split::kTest;
  throw ParseError(fmt::format("unknown split '{}'", name));
}

std::string UtteranceRecord::snr_label() const {
  return snr_db ? fmt::format("{:g}", *snr_db) : std::string("clean");
}

void write_manifest(std::ostream& os, const Manifest& m) {
  os << "# f0reg manifest v1\n";
  os << "# seed " << m.seed << '\n';
  for (const UtteranceRecord& r : m.records)
    os << fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\n", r.audio, r.truth, r.speaker,
                      to_string(r.split), r.noise, r.snr_label(),
                      r.reference.empty() ? std::string("-") : r.reference);
}

Manifest read_manifest(std::istream& is) {
  Manifest m;
  std::string line;
  std::size_t line_no = 0;
  bool versioned = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# f0reg manifest v1", 0) == 0) versioned = true;
      std::istringstream hdr(line.substr(1));
      std::string key;
      if (hdr >> key && key == "seed" && !(hdr >> m.seed))
        throw ParseError(fmt::format("manifest line {}: bad seed header", line_no));
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
    if (cols.size() != 6 && cols.size() != 7)
      throw ParseError(fmt::format("manifest line {}: expected 6 or 7 tab-separated fields, got {}",
                                   line_no, cols.size()));
    UtteranceRecord r;
    r.audio = cols[0];
    r.truth = cols[1];
    r.speaker = cols[2];
    r.split = parse_split(cols[3]);
    r.noise = cols[4];
    if (cols[5] != "clean") {
      try {
        r.snr_db = std::stod(cols[5]);
      } catch (const std::exception&) {
        throw ParseError(fmt::format("manifest line {}: bad SNR '{}'", line_no, cols[5]));
      }
    }
    if (cols.size() == 7 && cols[6] != "-") r.reference = cols[6];
    m.records.push_back(std::move(r));
  }
  if (!versioned) throw ParseError("missing '# f0reg manifest v1' header");
  return m;
}

void save_manifest(const fs::path& path, const Manifest& m) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ParseError(fmt::format("cannot write {}", path.string()));
  write_manifest(os, m);
}

Manifest load_manifest(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError(fmt::format("cannot open {}", path.string()));
  Manifest m = read_manifest(is);
  const fs::path base = path.parent_path();
  for (UtteranceRecord& r : m.records) {
    r.audio = resolve(base, r.audio);
    r.truth = resolve(base, r.truth);
    r.reference = resolve(base, r.reference);
  }
  return m;
}

Manifest build_noisy_set(std::span<const UtteranceRecord> records,
                         std::span<const NoiseSource> noises,
                         std::span<const double> snrs_db, std::uint64_t seed,
                         const fs::path& output_dir) {
  if (!snrs_db.empty() && noises.empty()) throw ConfigError("noise bank is empty");
  for (const NoiseSource& n : noises) {
    if (!n.path.empty() && !fs::exists(n.path))
      throw IngestError(fmt::format("noise file {} does not exist", n.path));
    if (n.length == 0) throw DegenerateInputError(fmt::format("noise '{}' is empty", n.name));
  }

  Manifest m;
  m.seed = seed;
  m.records.reserve(expanded_count(records.size(), noises.size(), snrs_db.size()));
  for (std::size_t u = 0; u < records.size(); ++u) {
    const UtteranceRecord& clean = records[u];
    m.records.push_back(clean);
    const std::string stem = fs::path(clean.audio).stem().string();
    for (std::size_t k = 0; k < noises.size() && !snrs_db.empty(); ++k) {
      for (std::size_t s = 0; s < snrs_db.size(); ++s) {
        UtteranceRecord r = clean;
        r.noise = noises[k].name;
        r.snr_db = snrs_db[s];
        r.reference = clean.reference.empty() ? clean.audio : clean.reference;
        r.source_audio = clean.audio;
        r.noise_path = noises[k].path;
        r.noise_offset = random_noise_offset(noises[k].length, derive_seed(seed, {u, k, s}));
        r.audio = (output_dir / fmt::format("{}_{}_{}dB.wav", stem, r.noise, r.snr_label()))
                      .string();
        m.records.push_back(std::move(r));
      }
    }
  }
  return m;
}

void render_mixture(const UtteranceRecord& record, const Waveform& noise) {
  if (record.source_audio.empty() || !record.snr_db)
    throw ConfigError(fmt::format("record {} has no mixing plan", record.audio));
  const Waveform clean = load_audio(record.source_audio);
  MixOptions opts;
  opts.noise_offset = record.noise_offset;
  save_audio(record.audio, mix_at_snr(clean, noise, *record.snr_db, opts));
}

}  // namespace f0reg
