// f0reg/targets.cpp
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

#include "f0reg/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "f0reg/error.hpp"

namespace f0reg {

namespace {

constexpr double kNormFloor = 1e-12;

void check_frequency(double f0, int sample_rate) {
  if (!(f0 > 0.0) || !(f0 < 0.5 * sample_rate))
    throw DomainError("f0 " + std::to_string(f0) + " Hz outside (0, Nyquist)");
}

}  // namespace

void GroundTruthF0::validate() const {
  const double nyquist = 0.5 * sample_rate;
  for (std::size_t i = 0; i < f0.size(); ++i) {
    const double v = f0[i];
    if (!std::isfinite(v) || v < 0.0 || (v > 0.0 && v >= nyquist))
      throw DomainError("ground truth frame " + std::to_string(i) +
                        " has invalid f0 " + std::to_string(v));
  }
}

SinusoidFit fit_sinusoid(std::span<const double> x, double f0, int sample_rate) {
  check_frequency(f0, sample_rate);
  if (x.empty()) throw DomainError("cannot fit a sinusoid to an empty frame");

  const double omega = 2.0 * std::numbers::pi * f0 / sample_rate;
  double xc = 0.0, xs = 0.0, cc = 0.0, ss = 0.0, cs = 0.0, xx = 0.0;
  for (std::size_t m = 0; m < x.size(); ++m) {
    const double c = std::cos(omega * static_cast<double>(m));
    const double s = std::sin(omega * static_cast<double>(m));
    xc += x[m] * c;
    xs += x[m] * s;
    cc += c * c;
    ss += s * s;
    cs += c * s;
    xx += x[m] * x[m];
  }
  SinusoidFit fit;
  if (xx <= 0.0) {
    fit.degenerate = true;
    return fit;
  }

  // cos(wm + phi) = cos(phi) c - sin(phi) s.  With u = (cos phi, -sin phi)
  // the correlation is (a.u) / sqrt(u' G u |x|^2), maximized by u ~ G^-1 a.
  double u1 = 0.0, u2 = 0.0;
  const double det = cc * ss - cs * cs;
  if (det > 1e-12 * cc * std::max(ss, 1e-300)) {
    u1 = (ss * xc - cs * xs) / det;
    u2 = (cc * xs - cs * xc) / det;
  } else {
    // Quadrature component vanishes (single-sample frames).
    u1 = xc / cc;
    u2 = 0.0;
  }
  const double proj = u1 * xc + u2 * xs;  // a' G^-1 a
  fit.correlation = std::clamp(std::sqrt(std::max(proj, 0.0) / xx), 0.0, 1.0);
  if (u1 == 0.0 && u2 == 0.0) return fit;
  double phase = std::atan2(-u2, u1);
  if (phase <= -std::numbers::pi) phase = std::numbers::pi;
  fit.phase = phase;
  return fit;
}

SinusoidFit align_phase(std::span<const double> frame, double f0, int sample_rate) {
  return fit_sinusoid(frame, f0, sample_rate);
}

SinusoidTarget build_target(std::span<const double> frame, double f0,
                            int sample_rate, std::span<const double> reference) {
  if (!std::isfinite(f0) || f0 < 0.0)
    throw DomainError("target f0 must be finite and non-negative");
  SinusoidTarget target;
  if (f0 == 0.0) {
    target.kind = TargetKind::kIdentity;
    target.samples.assign(frame.begin(), frame.end());
    return target;
  }
  check_frequency(f0, sample_rate);
  if (reference.empty()) reference = frame;
  if (reference.size() != frame.size())
    throw DimensionError("reference frame length differs from input frame");
  const SinusoidFit fit = align_phase(reference, f0, sample_rate);
  target.kind = TargetKind::kVoiced;
  target.f0 = f0;
  target.phase = fit.phase;
  target.samples = synth_cosine(f0, fit.phase, frame.size(), sample_rate);
  return target;
}

Eigen::MatrixXd context_window(const FrameSequence& frames, std::size_t center,
                               std::size_t context_radius) {
  if (frames.size() == 0) throw EmptyInputError("empty frame sequence");
  if (center >= frames.size())
    throw DimensionError("window centre " + std::to_string(center) +
                         " beyond frame count " + std::to_string(frames.size()));
  const auto steps = static_cast<Eigen::Index>(2 * context_radius + 1);
  Eigen::MatrixXd window(frames.frames.rows(), steps);
  const auto last = static_cast<std::ptrdiff_t>(frames.size()) - 1;
  for (Eigen::Index n = 0; n < steps; ++n) {
    const std::ptrdiff_t idx =
        static_cast<std::ptrdiff_t>(center) - static_cast<std::ptrdiff_t>(context_radius) + n;
    window.col(n) = frames.frames.col(std::clamp<std::ptrdiff_t>(idx, 0, last));
  }
  return window;
}

std::string_view to_string(InputNormalization mode) {
  switch (mode) {
    case InputNormalization::kNone: return "none";
    case InputNormalization::kFrameRms: return "frame";
    case InputNormalization::kWindowRms: return "window";
  }
  return "none";
}

InputNormalization parse_input_normalization(std::string_view name) {
  if (name == "none") return InputNormalization::kNone;
  if (name == "frame") return InputNormalization::kFrameRms;
  if (name == "window") return InputNormalization::kWindowRms;
  throw ConfigError("unknown normalization '" + std::string(name) + "'");
}

void normalize_window(Eigen::MatrixXd& window, InputNormalization mode) {
  switch (mode) {
    case InputNormalization::kNone:
      return;
    case InputNormalization::kFrameRms:
      for (Eigen::Index n = 0; n < window.cols(); ++n) {
        const double rms = std::sqrt(window.col(n).squaredNorm() / window.rows());
        if (rms > kNormFloor) window.col(n) /= rms;
      }
      return;
    case InputNormalization::kWindowRms: {
      const double rms = std::sqrt(window.squaredNorm() / window.size());
      if (rms > kNormFloor) window /= rms;
      return;
    }
  }
}

TrainingSequence build_sequence(const FrameSequence& input,
                                const FrameSequence* reference,
                                const GroundTruthF0& truth, std::size_t center,
                                const WindowConfig& cfg) {
  if (truth.size() != input.size())
    throw DimensionError("ground truth has " + std::to_string(truth.size()) +
                         " frames, input has " + std::to_string(input.size()));
  if (reference != nullptr &&
      (reference->size() != input.size() || reference->frame_len != input.frame_len))
    throw DimensionError("reference frames do not match input frames");

  TrainingSequence seq;
  seq.inputs = context_window(input, center, cfg.context_radius);
  normalize_window(seq.inputs, cfg.normalization);
  seq.targets.resize(seq.inputs.rows(), seq.inputs.cols());
  seq.voiced.resize(cfg.steps());

  const auto last = static_cast<std::ptrdiff_t>(input.size()) - 1;
  for (std::size_t n = 0; n < cfg.steps(); ++n) {
    const auto idx = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
        static_cast<std::ptrdiff_t>(center + n) -
            static_cast<std::ptrdiff_t>(cfg.context_radius),
        0, last));
    const auto col = static_cast<Eigen::Index>(n);
    const double f0 = truth.f0[idx];
    if (f0 > 0.0) {
      const auto ref = reference != nullptr ? reference->frame(idx) : input.frame(idx);
      const SinusoidFit fit = align_phase(ref, f0, input.sample_rate);
      const auto wave = synth_cosine(f0, fit.phase, input.frame_len, input.sample_rate);
      seq.targets.col(col) = Eigen::Map<const Eigen::VectorXd>(wave.data(), seq.targets.rows());
      seq.voiced[n] = 1;
    } else {
      seq.targets.col(col) = seq.inputs.col(col);
      seq.voiced[n] = 0;
    }
  }
  return seq;
}

}  // namespace f0reg
