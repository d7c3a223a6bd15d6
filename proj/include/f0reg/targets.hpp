// f0reg/targets.hpp
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

#ifndef F0REG_TARGETS_HPP_
#define F0REG_TARGETS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "f0reg/signal.hpp"

namespace f0reg {

/// Reference F0 per frame; 0 marks unvoiced or silent frames.
struct GroundTruthF0 {
  std::vector<double> f0;
  FramingConfig framing;
  int sample_rate = kDefaultSampleRate;

  std::size_t size() const { return f0.size(); }
  bool voiced(std::size_t i) const { return f0.at(i) > 0.0; }
  /// Throws DomainError for negative, non-finite or super-Nyquist values.
  void validate() const;
};

/// Best-fitting unit sinusoid at a known frequency.
struct SinusoidFit {
  double phase = 0.0;        ///< radians in (-pi, pi]
  double correlation = 0.0;  ///< peak normalized cross-correlation, in [0, 1]
  bool degenerate = false;   ///< zero-energy input; phase defaults to 0
};

/// Maximizes the normalized cross-correlation between `x` and
/// cos(2*pi*f0*m/fs + phase) over the phase.  The maximizer is found in
/// closed form by projecting `x` onto the in-phase / quadrature pair, with the
/// 2x2 Gram matrix accounting for non-integer numbers of periods.
SinusoidFit fit_sinusoid(std::span<const double> x, double f0, int sample_rate);

/// Phase of the best-aligned cosine; see fit_sinusoid.
SinusoidFit align_phase(std::span<const double> frame, double f0, int sample_rate);

enum class TargetKind : std::uint8_t { kVoiced, kIdentity };

struct SinusoidTarget {
  TargetKind kind = TargetKind::kIdentity;
  double f0 = 0.0;
  double phase = 0.0;
  std::vector<double> samples;
};

/// Voiced frames (f0 > 0) map to a unit cosine at f0 whose phase is aligned
/// to `reference`; unvoiced frames map to `frame` itself.  `reference`
/// defaults to `frame` when empty.
SinusoidTarget build_target(std::span<const double> frame, double f0,
                            int sample_rate,
                            std::span<const double> reference = {});

enum class InputNormalization : std::uint8_t { kNone, kFrameRms, kWindowRms };

std::string_view to_string(InputNormalization mode);
InputNormalization parse_input_normalization(std::string_view name);

struct WindowConfig {
  std::size_t context_radius = 7;
  InputNormalization normalization = InputNormalization::kWindowRms;

  std::size_t steps() const { return 2 * context_radius + 1; }
};

/// Frames center-p .. center+p as columns; indices outside the sequence
/// repeat the edge frame.
Eigen::MatrixXd context_window(const FrameSequence& frames, std::size_t center,
                               std::size_t context_radius);

/// Scales `window` in place to unit RMS (per frame or over the whole window).
/// All-zero columns are left untouched.
void normalize_window(Eigen::MatrixXd& window, InputNormalization mode);

/// One supervised sequence: network inputs and per-step targets.
struct TrainingSequence {
  Eigen::MatrixXd inputs;   ///< frame_len x steps
  Eigen::MatrixXd targets;  ///< frame_len x steps
  std::vector<std::uint8_t> voiced;
};

/// Builds the sequence centred on frame `center`.  Identity targets copy the
/// normalized inputs.  Voiced phases are aligned against `reference` frames
/// when given (e.g. the clean signal behind a noisy input), else the inputs.
TrainingSequence build_sequence(const FrameSequence& input,
                                const FrameSequence* reference,
                                const GroundTruthF0& truth, std::size_t center,
                                const WindowConfig& cfg);

}  // namespace f0reg

#endif  // F0REG_TARGETS_HPP_
