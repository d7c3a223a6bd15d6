// f0reg/data.hpp
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

#ifndef F0REG_DATA_HPP_
#define F0REG_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "f0reg/signal.hpp"
#include "f0reg/targets.hpp"

namespace f0reg {

// ---------------------------------------------------------------------------
// Audio.  Only 16-bit PCM mono RIFF/WAVE at 16 kHz is accepted.

Waveform read_wav(std::istream& is);
void write_wav(std::ostream& os, const Waveform& w);

/// Samples are scaled by 1/32768.  Throws IngestError for other encodings,
/// channel counts or sample rates.
Waveform load_audio(const std::filesystem::path& path);
/// Samples are rounded to the nearest 16-bit code and clipped.
void save_audio(const std::filesystem::path& path, const Waveform& w);

// ---------------------------------------------------------------------------
// Reference F0 files: one frame per line, whitespace separated, F0 in
// `column` (0-based), 0 meaning unvoiced.  '#' starts a comment line.

GroundTruthF0 read_ground_truth(std::istream& is, const FramingConfig& framing,
                                int sample_rate = kDefaultSampleRate,
                                std::size_t column = 0);
GroundTruthF0 load_ground_truth(const std::filesystem::path& path,
                                const FramingConfig& framing,
                                int sample_rate = kDefaultSampleRate,
                                std::size_t column = 0);
/// Writes "f0_hz<TAB>centre_time_sec" per frame.
void save_ground_truth(const std::filesystem::path& path, const GroundTruthF0& truth);

/// Common frame count of an estimate track and its reference.  Mismatches of
/// up to `tolerance` frames are resolved by truncating the longer one; larger
/// ones throw AlignmentError.
std::size_t reconcile_frame_counts(std::size_t estimates, std::size_t truth,
                                   std::size_t tolerance = 2);

/// Drops n_head leading and n_tail trailing frames.  Returns nullopt (skip)
/// unless the sequence has more than n_head + n_tail frames.
template <typename T>
std::optional<std::vector<T>> trim_edges(std::span<const T> frames,
                                         std::size_t n_head = 400,
                                         std::size_t n_tail = 200) {
  if (frames.size() <= n_head + n_tail) return std::nullopt;
  return std::vector<T>(frames.begin() + static_cast<std::ptrdiff_t>(n_head),
                        frames.end() - static_cast<std::ptrdiff_t>(n_tail));
}

/// Trims a track and its reference together; nullopt when too short.
std::optional<GroundTruthF0> trim_edges(const GroundTruthF0& truth, std::size_t n_head = 400,
                                        std::size_t n_tail = 200);

// ---------------------------------------------------------------------------
// Manifests.

enum class Split : std::uint8_t { kTrain, kCv, kTest };

std::string_view to_string(Split split);
Split parse_split(std::string_view name);

struct UtteranceRecord {
  std::string audio;
  std::string truth;
  std::string speaker = "-";
  Split split = Split::kTrain;
  std::string noise = "clean";
  std::optional<double> snr_db;  ///< nullopt for clean
  /// Clean recording behind a mixed one; phase reference for training.
  std::string reference;

  // Mixing plan, filled by build_noisy_set and not serialized.
  std::string source_audio;
  std::string noise_path;
  std::size_t noise_offset = 0;

  std::string snr_label() const;
};

/// Line-oriented manifest:
///
///   # f0reg manifest v1
///   # seed <n>
///   audio  truth  speaker  split  noise  snr  [reference]
///
/// Tab separated; snr is "clean" or dB; reference is optional ("-" = none).
/// Relative paths are resolved against the manifest's directory on load.
struct Manifest {
  std::uint64_t seed = 0;
  std::vector<UtteranceRecord> records;
};

void write_manifest(std::ostream& os, const Manifest& m);
Manifest read_manifest(std::istream& is);
void save_manifest(const std::filesystem::path& path, const Manifest& m);
Manifest load_manifest(const std::filesystem::path& path);

struct NoiseSource {
  std::string name;
  std::string path;
  std::size_t length = 0;  ///< samples, for drawing offsets
};

/// Expands every record into itself (clean) followed by one record per
/// (noise, SNR) pair, with noise offsets derived from `seed`.  Mixed audio
/// paths are placed in `output_dir`.
Manifest build_noisy_set(std::span<const UtteranceRecord> records,
                         std::span<const NoiseSource> noises,
                         std::span<const double> snrs_db, std::uint64_t seed,
                         const std::filesystem::path& output_dir);

/// utterances * (noises * snrs + 1)
constexpr std::size_t expanded_count(std::size_t utterances, std::size_t noises,
                                     std::size_t snrs) {
  return utterances * (noises * snrs + 1);
}

/// Writes the mixed audio for a record produced by build_noisy_set.
void render_mixture(const UtteranceRecord& record, const Waveform& noise);

}  // namespace f0reg

#endif  // F0REG_DATA_HPP_
