// f0reg/synth.cpp
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

#include "f0reg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <fmt/format.h>

#include "f0reg/error.hpp"
#include "f0reg/seed.hpp"

namespace f0reg {

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kNone: return "none";
    case NoiseKind::kWhite: return "white";
    case NoiseKind::kPink: return "pink";
  }
  return "none";
}

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "none" || name == "clean") return NoiseKind::kNone;
  if (name == "white") return NoiseKind::kWhite;
  if (name == "pink") return NoiseKind::kPink;
  throw ConfigError(fmt::format("unknown noise type '{}'", name));
}

Waveform generate_noise(NoiseKind kind, std::size_t n, int sample_rate,
                        std::uint64_t seed) {
  Waveform w{std::vector<double>(n, 0.0), sample_rate};
  if (kind == NoiseKind::kNone || n == 0) return w;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double white = gauss(rng);
    if (kind == NoiseKind::kWhite) {
      w.samples[i] = white;
      continue;
    }
    b0 = 0.99765 * b0 + white * 0.0990460;
    b1 = 0.96300 * b1 + white * 0.2965164;
    b2 = 0.57000 * b2 + white * 1.0526913;
    w.samples[i] = b0 + b1 + b2 + white * 0.1848;
  }
  const double rms = std::sqrt(mean_power(w.samples));
  if (rms > 0.0)
    for (double& s : w.samples) s /= rms;
  return w;
}

void SynthSpec::validate() const {
  if (!(duration > 0.0)) throw DomainError("synthetic duration must be positive");
  if (sample_rate <= 0) throw DomainError("sample rate must be positive");
  if (f0_contour.empty()) throw DomainError("f0 contour needs at least one point");
  if (harmonics < 1) throw DomainError("at least one harmonic is required");
  if (!harmonic_weights.empty() && harmonic_weights.size() != harmonics)
    throw DomainError("harmonic weights must match the harmonic count");
  const double nyquist = 0.5 * sample_rate;
  for (std::size_t i = 0; i < f0_contour.size(); ++i) {
    const ContourPoint& p = f0_contour[i];
    if (!(p.f0 > 0.0) || !(p.f0 < nyquist))
      throw DomainError(fmt::format("contour f0 {} Hz outside (0, Nyquist)", p.f0));
    if (p.f0 * static_cast<double>(harmonics) >= nyquist)
      throw DomainError(fmt::format("{} harmonics of {} Hz reach the Nyquist frequency",
                                    harmonics, p.f0));
    if (i > 0 && !(p.time_sec > f0_contour[i - 1].time_sec))
      throw DomainError("contour times must increase");
  }
  for (const VoicingSegment& s : schedule)
    if (!(s.end_sec > s.start_sec)) throw DomainError("empty voicing segment");
  if (noise != NoiseKind::kNone && !std::isfinite(snr_db))
    throw DomainError("SNR must be finite");
}

double SynthSpec::f0_at(double t) const {
  if (t <= f0_contour.front().time_sec) return f0_contour.front().f0;
  if (t >= f0_contour.back().time_sec) return f0_contour.back().f0;
  const auto hi = std::upper_bound(
      f0_contour.begin(), f0_contour.end(), t,
      [](double v, const ContourPoint& p) { return v < p.time_sec; });
  const auto lo = hi - 1;
  const double a = (t - lo->time_sec) / (hi->time_sec - lo->time_sec);
  return lo->f0 + a * (hi->f0 - lo->f0);
}

SegmentKind SynthSpec::segment_at(double t) const {
  for (const VoicingSegment& s : schedule)
    if (t >= s.start_sec && t < s.end_sec) return s.kind;
  return SegmentKind::kSilence;
}

namespace {

// Raised-cosine onset/offset gain inside [start, end).
double ramp_gain(double t, const VoicingSegment& s, double ramp) {
  if (t < s.start_sec || t >= s.end_sec) return 0.0;
  if (ramp <= 0.0) return 1.0;
  const double r = std::min({1.0, (t - s.start_sec) / ramp, (s.end_sec - t) / ramp});
  return 0.5 - 0.5 * std::cos(std::numbers::pi * r);
}

}  // namespace

SynthResult synth_utterance(const SynthSpec& spec, const FramingConfig& framing) {
  spec.validate();
  framing.validate();
  const int fs = spec.sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(spec.duration * fs));

  std::mt19937_64 rng(derive_seed(spec.seed, {1}));
  std::uniform_real_distribution<double> uniform_phase(-std::numbers::pi, std::numbers::pi);
  std::vector<double> amp(spec.harmonics), offset(spec.harmonics);
  double power = 0.0;
  for (std::size_t k = 0; k < spec.harmonics; ++k) {
    amp[k] = std::pow(static_cast<double>(k + 1), -spec.rolloff);
    if (!spec.harmonic_weights.empty()) amp[k] *= spec.harmonic_weights[k];
    offset[k] = uniform_phase(rng);
    power += 0.5 * amp[k] * amp[k];
  }
  const double voiced_scale = power > 0.0 ? spec.voiced_rms / std::sqrt(power) : 0.0;

  const Waveform breath = generate_noise(NoiseKind::kWhite, n + 1, fs, derive_seed(spec.seed, {2}));

  SynthResult out;
  out.clean = Waveform{std::vector<double>(n, 0.0), fs};
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    double value = 0.0;
    for (const VoicingSegment& s : spec.schedule) {
      const double g = ramp_gain(t, s, spec.ramp_sec);
      if (g == 0.0) continue;
      if (s.kind == SegmentKind::kVoiced) {
        double h = 0.0;
        for (std::size_t k = 0; k < spec.harmonics; ++k)
          h += amp[k] * std::cos(static_cast<double>(k + 1) * phase + offset[k]);
        value += g * voiced_scale * h;
      } else if (s.kind == SegmentKind::kUnvoiced) {
        // First difference tilts the noise towards high frequencies.
        value += g * spec.unvoiced_rms * (breath.samples[i + 1] - breath.samples[i]) /
                 std::numbers::sqrt2;
      }
    }
    out.clean.samples[i] = value;
    phase += 2.0 * std::numbers::pi * spec.f0_at(t) / fs;
    if (phase > 2.0 * std::numbers::pi) phase -= 2.0 * std::numbers::pi;
  }

  out.truth.framing = framing;
  out.truth.sample_rate = fs;
  out.truth.f0.resize(framing.frame_count(n), 0.0);
  for (std::size_t i = 0; i < out.truth.f0.size(); ++i) {
    const double center =
        (static_cast<double>(i * framing.hop) + 0.5 * framing.frame_len) / fs;
    if (spec.segment_at(center) == SegmentKind::kVoiced) out.truth.f0[i] = spec.f0_at(center);
  }

  if (spec.noise == NoiseKind::kNone) {
    out.noisy = out.clean;
  } else {
    const Waveform noise = generate_noise(spec.noise, n, fs, derive_seed(spec.seed, {3}));
    out.noisy = mix_at_snr(out.clean, noise, spec.snr_db);
  }
  return out;
}

SynthSpec random_synth_spec(const SynthCorpusOptions& opts, std::uint64_t seed) {
  if (!(opts.f0_min > 0.0 && opts.f0_min < opts.f0_max))
    throw DomainError("synthetic f0 range must satisfy 0 < min < max");
  std::mt19937_64 rng(derive_seed(seed, {0x5e}));
  auto uniform = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  SynthSpec spec;
  spec.seed = seed;
  spec.duration = opts.duration;

  const double base = std::exp(uniform(std::log(opts.f0_min), std::log(opts.f0_max)));
  double f_hi = 0.0;
  for (double t = 0.0;; t += uniform(0.2, 0.4)) {
    const double f = std::clamp(base * std::exp(uniform(-0.2, 0.2)), opts.f0_min, opts.f0_max);
    spec.f0_contour.push_back({t, f});
    f_hi = std::max(f_hi, f);
    if (t >= opts.duration) break;
  }

  double t = uniform(0.03, 0.12);
  while (t < opts.duration - 0.1) {
    const double end = std::min(t + uniform(0.15, 0.45), opts.duration);
    spec.schedule.push_back({t, end, SegmentKind::kVoiced});
    t = end;
    const double gap = uniform(0.04, 0.15);
    if (uniform(0.0, 1.0) < 0.6 && t + gap <= opts.duration)
      spec.schedule.push_back({t, t + gap, SegmentKind::kUnvoiced});
    t += gap;
  }

  const double nyquist = 0.5 * spec.sample_rate;
  const auto limit = static_cast<std::size_t>(std::ceil(nyquist / f_hi)) - 1;
  spec.harmonics = std::max<std::size_t>(1, std::min(opts.max_harmonics, limit));
  spec.rolloff = uniform(opts.rolloff_min, opts.rolloff_max);
  spec.harmonic_weights.resize(spec.harmonics);
  for (double& w : spec.harmonic_weights) w = uniform(0.5, 1.5);
  spec.voiced_rms = uniform(0.1, 0.5);
  spec.unvoiced_rms = spec.voiced_rms * uniform(0.05, 0.3);
  return spec;
}

}  // namespace f0reg
