// f0reg/tracker.cpp
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

#include "f0reg/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "f0reg/error.hpp"

namespace f0reg {

void DecoderConfig::validate(int sample_rate, std::size_t frame_len) const {
  const double nyquist = 0.5 * sample_rate;
  if (!(f0_min > 0.0 && f0_min < f0_max && f0_max < nyquist))
    throw ConfigError(fmt::format("need 0 < f0_min < f0_max < {} Hz, got [{}, {}]",
                                  nyquist, f0_min, f0_max));
  if (!(lambda > 0.0 && lambda < 1.0))
    throw ConfigError(fmt::format("lambda must lie in (0, 1), got {}", lambda));
  if (!(octave_cost >= 0.0)) throw ConfigError("octave cost must be non-negative");
  const std::size_t lo = min_lag(sample_rate), hi = max_lag(sample_rate);
  if (lo < 1 || lo > hi || hi >= frame_len)
    throw ConfigError(fmt::format("lag range [{}, {}] empty or not below frame length {}",
                                  lo, hi, frame_len));
}

std::size_t DecoderConfig::min_lag(int sample_rate) const {
  return static_cast<std::size_t>(std::ceil(sample_rate / f0_max));
}

std::size_t DecoderConfig::max_lag(int sample_rate) const {
  return static_cast<std::size_t>(std::floor(sample_rate / f0_min));
}

LagEstimate decode_f0(std::span<const double> y, const DecoderConfig& cfg,
                      int sample_rate) {
  cfg.validate(sample_rate, y.size());
  const std::size_t lo = cfg.min_lag(sample_rate), hi = cfg.max_lag(sample_rate);

  auto score = [&](std::size_t lag) {
    return normalized_autocorrelation(y, lag) -
           cfg.octave_cost * std::log2(static_cast<double>(lag));
  };

  LagEstimate est;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t lag = lo; lag <= hi; ++lag) {
    const double s = score(lag);
    if (s > best) {
      best = s;
      est.peak_lag = lag;
    }
  }
  est.correlation = normalized_autocorrelation(y, est.peak_lag);
  est.lag = static_cast<double>(est.peak_lag);

  if (cfg.interpolation == LagInterpolation::kParabolic && est.peak_lag > 1 &&
      est.peak_lag + 1 < y.size()) {
    const double left = score(est.peak_lag - 1);
    const double right = score(est.peak_lag + 1);
    const double curvature = left - 2.0 * best + right;
    if (curvature < 0.0) {
      const double delta = std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
      est.lag += delta;
    }
  }
  est.f0 = sample_rate / est.lag;
  return est;
}

VoicingDecision detect_voicing(std::span<const double> y, double f0_hat,
                               const DecoderConfig& cfg, int sample_rate) {
  const SinusoidFit fit = fit_sinusoid(y, f0_hat, sample_rate);
  return {passes_voicing_gate(fit.correlation, cfg.lambda), fit.correlation};
}

F0Estimate decode_frame(std::span<const double> y, const DecoderConfig& cfg,
                        int sample_rate) {
  const LagEstimate lag = decode_f0(y, cfg, sample_rate);
  const VoicingDecision v = detect_voicing(y, lag.f0, cfg, sample_rate);
  F0Estimate est;
  est.voiced = v.voiced;
  est.confidence = v.confidence;
  est.f0 = v.voiced ? lag.f0 : 0.0;
  return est;
}

Eigen::MatrixXd posteriors(const FrameSequence& frames, const RecurrentModel& model,
                           const TrackerConfig& cfg) {
  const Architecture& arch = model.arch;
  if (frames.frame_len != arch.frame_len)
    throw DimensionError(fmt::format("frames have {} samples, model expects {}",
                                     frames.frame_len, arch.frame_len));
  if (frames.size() < arch.steps())
    throw EmptyInputError(fmt::format("{} frames, need at least one full {}-frame window",
                                      frames.size(), arch.steps()));
  const std::size_t steps = arch.steps();
  const std::size_t p = arch.context_radius;
  const std::size_t chunk = std::max<std::size_t>(cfg.chunk, 1);
  const auto m = static_cast<Eigen::Index>(arch.frame_len);

  Eigen::MatrixXd out(m, static_cast<Eigen::Index>(frames.size()));
  for (std::size_t first = 0; first < frames.size(); first += chunk) {
    const std::size_t count = std::min(chunk, frames.size() - first);
    Eigen::MatrixXd inputs(m, static_cast<Eigen::Index>(count * steps));
    for (std::size_t k = 0; k < count; ++k) {
      Eigen::MatrixXd window = context_window(frames, first + k, p);
      normalize_window(window, cfg.normalization);
      for (std::size_t t = 0; t < steps; ++t)
        inputs.col(static_cast<Eigen::Index>(t * count + k)) =
            window.col(static_cast<Eigen::Index>(t));
    }
    const Eigen::MatrixXd y = forward(model, inputs, count);
    out.middleCols(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(count)) =
        y.middleCols(static_cast<Eigen::Index>(p * count), static_cast<Eigen::Index>(count));
  }
  return out;
}

std::vector<F0Estimate> track(const Waveform& w, const RecurrentModel& model,
                              const TrackerConfig& cfg) {
  const FrameSequence frames = frame_signal(w, cfg.framing);
  cfg.decoder.validate(w.sample_rate, frames.frame_len);
  const Eigen::MatrixXd y = posteriors(frames, model, cfg);

  std::vector<F0Estimate> out(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto col = y.col(static_cast<Eigen::Index>(i));
    out[i] = decode_frame({col.data(), frames.frame_len}, cfg.decoder, w.sample_rate);
    out[i].frame_index = i;
    out[i].time_sec = frames.center_time(i);
  }
  return out;
}

void write_estimates(std::ostream& os, std::span<const F0Estimate> estimates) {
  for (const F0Estimate& e : estimates)
    os << fmt::format("{:.6f}\t{:.6f}\t{}\t{:.6f}\n", e.time_sec, e.f0,
                      e.voiced ? 1 : 0, e.confidence);
}

std::vector<F0Estimate> read_estimates(std::istream& is) {
  std::vector<F0Estimate> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    F0Estimate e;
    int voiced = -1;
    if (!(fields >> e.time_sec >> e.f0 >> voiced >> e.confidence) ||
        (voiced != 0 && voiced != 1) || e.f0 < 0.0)
      throw ParseError(fmt::format("estimate line {}: cannot parse '{}'", line_no, line));
    e.voiced = voiced == 1;
    e.frame_index = out.size();
    out.push_back(e);
  }
  return out;
}

}  // namespace f0reg
