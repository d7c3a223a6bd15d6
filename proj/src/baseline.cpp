// f0reg/baseline.cpp
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

#include "f0reg/baseline.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "f0reg/error.hpp"

namespace f0reg {

void YinConfig::validate(int sample_rate) const {
  framing.validate();
  const double nyquist = 0.5 * sample_rate;
  if (!(f0_min > 0.0 && f0_min < f0_max && f0_max < nyquist))
    throw ConfigError(fmt::format("need 0 < f0_min < f0_max < {} Hz, got [{}, {}]",
                                  nyquist, f0_min, f0_max));
  if (!(yin_threshold > 0.0 && yin_threshold < 1.0))
    throw ConfigError("YIN threshold must lie in (0, 1)");
  const auto max_lag = static_cast<std::size_t>(std::floor(sample_rate / f0_min));
  if (max_lag + 1 > framing.frame_len)
    throw ConfigError(fmt::format("frame of {} samples too short for lags up to {}",
                                  framing.frame_len, max_lag));
}

F0Estimate yin_frame(std::span<const double> x, const YinConfig& cfg, int sample_rate) {
  const auto tau_min = static_cast<std::size_t>(std::ceil(sample_rate / cfg.f0_max));
  const auto tau_max = static_cast<std::size_t>(std::floor(sample_rate / cfg.f0_min));
  if (x.size() < tau_max + 1)
    throw DimensionError("frame too short for the YIN lag range");
  const std::size_t window = x.size() - tau_max;

  std::vector<double> d(tau_max + 1, 0.0);
  for (std::size_t tau = 1; tau <= tau_max; ++tau) {
    double acc = 0.0;
    for (std::size_t j = 0; j < window; ++j) {
      const double delta = x[j] - x[j + tau];
      acc += delta * delta;
    }
    d[tau] = acc;
  }
  std::vector<double> cmnd(tau_max + 1, 1.0);
  double running = 0.0;
  for (std::size_t tau = 1; tau <= tau_max; ++tau) {
    running += d[tau];
    cmnd[tau] = running > 0.0 ? d[tau] * static_cast<double>(tau) / running : 1.0;
  }

  F0Estimate est;
  std::size_t period = 0;
  for (std::size_t tau = tau_min; tau <= tau_max; ++tau) {
    if (cmnd[tau] < cfg.yin_threshold) {
      while (tau + 1 <= tau_max && cmnd[tau + 1] < cmnd[tau]) ++tau;
      period = tau;
      break;
    }
  }
  if (period == 0) {
    const double best = *std::min_element(cmnd.begin() + static_cast<std::ptrdiff_t>(tau_min),
                                          cmnd.end());
    est.confidence = std::clamp(1.0 - best, 0.0, 1.0);
    return est;
  }

  double refined = static_cast<double>(period);
  if (period > 1 && period < tau_max) {
    const double a = cmnd[period - 1], b = cmnd[period], c = cmnd[period + 1];
    const double curvature = a - 2.0 * b + c;
    if (curvature > 0.0) refined += std::clamp(0.5 * (a - c) / curvature, -0.5, 0.5);
  }
  est.voiced = true;
  est.f0 = sample_rate / refined;
  est.confidence = std::clamp(1.0 - cmnd[period], 0.0, 1.0);
  return est;
}

std::vector<F0Estimate> yin_track(const Waveform& w, const YinConfig& cfg) {
  cfg.validate(w.sample_rate);
  const FrameSequence frames = frame_signal(w, cfg.framing);
  std::vector<F0Estimate> out(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    out[i] = yin_frame(frames.frame(i), cfg, w.sample_rate);
    out[i].frame_index = i;
    out[i].time_sec = frames.center_time(i);
  }
  return out;
}

std::vector<F0Estimate> acf_track(const Waveform& w, const DecoderConfig& cfg,
                                  const FramingConfig& framing) {
  const FrameSequence frames = frame_signal(w, framing);
  cfg.validate(w.sample_rate, frames.frame_len);
  std::vector<F0Estimate> out(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    out[i] = decode_frame(frames.frame(i), cfg, w.sample_rate);
    out[i].frame_index = i;
    out[i].time_sec = frames.center_time(i);
  }
  return out;
}

}  // namespace f0reg
