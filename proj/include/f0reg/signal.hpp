// f0reg/signal.hpp
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

#ifndef F0REG_SIGNAL_HPP_
#define F0REG_SIGNAL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace f0reg {

inline constexpr int kDefaultSampleRate = 16000;

/// Mono waveform with its sampling rate in Hz.
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;

  std::size_t size() const { return samples.size(); }
  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  /// Throws DomainError on a non-positive rate or non-finite samples.
  void validate() const;
};

/// Frame length and hop in samples.  The defaults are 25 ms / 5 ms at 16 kHz.
struct FramingConfig {
  std::size_t frame_len = 400;
  std::size_t hop = 80;

  void validate() const;
  std::size_t frame_count(std::size_t num_samples) const;
};

/// Overlapping rectangular frames.  Frame i occupies column i of `frames`
/// and covers samples [start_offsets[i], start_offsets[i] + frame_len).
struct FrameSequence {
  Eigen::MatrixXd frames;
  std::size_t frame_len = 0;
  std::size_t hop = 0;
  int sample_rate = kDefaultSampleRate;
  std::vector<std::size_t> start_offsets;

  std::size_t size() const { return start_offsets.size(); }
  std::span<const double> frame(std::size_t i) const {
    return {frames.col(static_cast<Eigen::Index>(i)).data(), frame_len};
  }
  /// Time of the frame centre in seconds.
  double center_time(std::size_t i) const;
};

/// Slices `w` into frames; trailing samples that do not fill a frame are
/// dropped.  Throws EmptyInputError if `w` is shorter than one frame.
FrameSequence frame_signal(const Waveform& w, std::size_t frame_len,
                           std::size_t hop);
FrameSequence frame_signal(const Waveform& w, const FramingConfig& cfg);

/// cos(2*pi*f0*m/sample_rate + phase) for m = 0..n-1.
std::vector<double> synth_cosine(double f0, double phase, std::size_t n,
                                 int sample_rate);

/// Normalized product of x[0, n-lag) and x[lag, n), divided by the product of
/// the two segment norms.  Zero-energy segments give 0.
double normalized_autocorrelation(std::span<const double> x, std::size_t lag);

/// Zero-lag normalized correlation <x,y> / (|x| |y|).  Zero energy gives 0.
double normalized_crosscorrelation(std::span<const double> x,
                                   std::span<const double> y);

/// Mean-square value.
double mean_power(std::span<const double> x);

struct MixOptions {
  /// Repeat the noise cyclically when it is shorter than the clean signal;
  /// otherwise a short noise signal is an error.
  bool tile_noise = true;
  /// First noise sample used (modulo the noise length).
  std::size_t noise_offset = 0;
};

/// clean + g * noise, with g chosen so the power ratio over the clean extent
/// equals snr_db.
Waveform mix_at_snr(const Waveform& clean, const Waveform& noise, double snr_db,
                    const MixOptions& opts = {});

/// Noise gain applied by mix_at_snr for the given segment powers.
double snr_gain(double clean_power, double noise_power, double snr_db);

/// Uniform random start offset in [0, noise_len) drawn from `seed`.
std::size_t random_noise_offset(std::size_t noise_len, std::uint64_t seed);

}  // namespace f0reg

#endif  // F0REG_SIGNAL_HPP_
