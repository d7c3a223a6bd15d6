// f0reg/signal.cpp
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

#include "f0reg/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "f0reg/error.hpp"

namespace f0reg {

void Waveform::validate() const {
  if (sample_rate <= 0)
    throw DomainError("sample rate must be positive, got " +
                      std::to_string(sample_rate));
  for (double s : samples)
    if (!std::isfinite(s)) throw DomainError("waveform has non-finite samples");
}

void FramingConfig::validate() const {
  if (frame_len < 1) throw DomainError("frame length must be at least 1");
  if (hop < 1 || hop > frame_len)
    throw DomainError("hop must lie in [1, frame_len], got " +
                      std::to_string(hop));
}

std::size_t FramingConfig::frame_count(std::size_t num_samples) const {
  if (num_samples < frame_len) return 0;
  return (num_samples - frame_len) / hop + 1;
}

double FrameSequence::center_time(std::size_t i) const {
  return (static_cast<double>(start_offsets.at(i)) + 0.5 * frame_len) /
         sample_rate;
}

FrameSequence frame_signal(const Waveform& w, std::size_t frame_len,
                           std::size_t hop) {
  return frame_signal(w, FramingConfig{frame_len, hop});
}

FrameSequence frame_signal(const Waveform& w, const FramingConfig& cfg) {
  cfg.validate();
  const std::size_t count = cfg.frame_count(w.size());
  if (count == 0)
    throw EmptyInputError("signal of " + std::to_string(w.size()) +
                          " samples is shorter than one frame of " +
                          std::to_string(cfg.frame_len));
  FrameSequence seq;
  seq.frame_len = cfg.frame_len;
  seq.hop = cfg.hop;
  seq.sample_rate = w.sample_rate;
  seq.frames.resize(static_cast<Eigen::Index>(cfg.frame_len),
                    static_cast<Eigen::Index>(count));
  seq.start_offsets.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t start = i * cfg.hop;
    seq.start_offsets[i] = start;
    seq.frames.col(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::VectorXd>(w.samples.data() + start,
                                          static_cast<Eigen::Index>(cfg.frame_len));
  }
  return seq;
}

std::vector<double> synth_cosine(double f0, double phase, std::size_t n,
                                 int sample_rate) {
  if (sample_rate <= 0) throw DomainError("sample rate must be positive");
  if (!(f0 > 0.0) || !(f0 < 0.5 * sample_rate))
    throw DomainError("f0 " + std::to_string(f0) +
                      " Hz outside (0, Nyquist)");
  if (n < 1) throw DomainError("cosine length must be at least 1");
  std::vector<double> out(n);
  const double omega = 2.0 * std::numbers::pi * f0 / sample_rate;
  for (std::size_t m = 0; m < n; ++m)
    out[m] = std::cos(omega * static_cast<double>(m) + phase);
  return out;
}

namespace {

double correlate(const double* a, const double* b, std::size_t n) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa <= 0.0 || bb <= 0.0) return 0.0;
  const double r = ab / std::sqrt(aa * bb);
  // Rounding can push |r| a hair past 1 for parallel vectors.
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

double normalized_autocorrelation(std::span<const double> x, std::size_t lag) {
  if (lag < 1 || lag >= x.size())
    throw DomainError("lag " + std::to_string(lag) + " outside [1, " +
                      std::to_string(x.size()) + ")");
  return correlate(x.data(), x.data() + lag, x.size() - lag);
}

double normalized_crosscorrelation(std::span<const double> x,
                                   std::span<const double> y) {
  if (x.size() != y.size())
    throw DomainError("cross-correlation of vectors with lengths " +
                      std::to_string(x.size()) + " and " +
                      std::to_string(y.size()));
  if (x.size() < 2) throw DomainError("cross-correlation needs >= 2 samples");
  return correlate(x.data(), y.data(), x.size());
}

double mean_power(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

double snr_gain(double clean_power, double noise_power, double snr_db) {
  if (!(clean_power > 0.0)) throw DegenerateInputError("clean signal has zero power");
  if (!(noise_power > 0.0)) throw DegenerateInputError("noise segment has zero power");
  return std::sqrt(clean_power / (noise_power * std::pow(10.0, snr_db / 10.0)));
}

Waveform mix_at_snr(const Waveform& clean, const Waveform& noise, double snr_db,
                    const MixOptions& opts) {
  if (clean.sample_rate != noise.sample_rate)
    throw DomainError("sample rates differ: " + std::to_string(clean.sample_rate) +
                      " vs " + std::to_string(noise.sample_rate));
  if (noise.samples.empty()) throw DegenerateInputError("noise signal is empty");
  if (!opts.tile_noise && noise.size() < clean.size() + opts.noise_offset)
    throw DomainError("noise shorter than clean signal and tiling disabled");

  const std::size_t n = clean.size();
  std::vector<double> segment(n);
  std::size_t pos = opts.noise_offset % noise.size();
  for (std::size_t i = 0; i < n; ++i) {
    segment[i] = noise.samples[pos];
    if (++pos == noise.size()) pos = 0;
  }
  const double g = snr_gain(mean_power(clean.samples), mean_power(segment), snr_db);
  Waveform out{clean.samples, clean.sample_rate};
  for (std::size_t i = 0; i < n; ++i) out.samples[i] += g * segment[i];
  return out;
}

std::size_t random_noise_offset(std::size_t noise_len, std::uint64_t seed) {
  if (noise_len == 0) return 0;
  std::mt19937_64 rng(seed);
  return static_cast<std::size_t>(rng() % noise_len);
}

}  // namespace f0reg
