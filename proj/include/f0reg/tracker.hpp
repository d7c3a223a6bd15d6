// f0reg/tracker.hpp
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

#ifndef F0REG_TRACKER_HPP_
#define F0REG_TRACKER_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "f0reg/neural.hpp"
#include "f0reg/signal.hpp"
#include "f0reg/targets.hpp"

namespace f0reg {

enum class LagInterpolation : std::uint8_t { kNone, kParabolic };

/// Autocorrelation decoder settings.
///
/// The lag search runs over [ceil(fs / f0_max), floor(fs / f0_min)].  Each
/// lag is scored by its normalized autocorrelation minus
/// octave_cost * log2(lag), which breaks the near-ties between a period and
/// its multiples in favour of the shortest one.  Exact ties go to the
/// smaller lag.
struct DecoderConfig {
  double f0_min = 50.0;
  double f0_max = 400.0;
  double lambda = 0.15;
  LagInterpolation interpolation = LagInterpolation::kNone;
  double octave_cost = 0.01;

  /// Throws ConfigError unless 0 < f0_min < f0_max < Nyquist, 0 < lambda < 1
  /// and the lag range is nonempty and shorter than the frame.
  void validate(int sample_rate, std::size_t frame_len) const;
  std::size_t min_lag(int sample_rate) const;
  std::size_t max_lag(int sample_rate) const;
};

struct LagEstimate {
  double f0 = 0.0;
  double lag = 0.0;             ///< refined lag in samples
  std::size_t peak_lag = 0;     ///< integer lag with the best score
  double correlation = 0.0;     ///< normalized autocorrelation at peak_lag
};

/// F0 candidate of a posterior (or raw) frame.  Always returns a candidate.
LagEstimate decode_f0(std::span<const double> y, const DecoderConfig& cfg,
                      int sample_rate);

struct VoicingDecision {
  bool voiced = false;
  double confidence = 0.0;
};

/// The gate is inclusive: confidence == lambda counts as voiced.
constexpr bool passes_voicing_gate(double confidence, double lambda) {
  return confidence >= lambda;
}

/// Confidence is the phase-maximized normalized cross-correlation between
/// `y` and a unit cosine at f0_hat.
VoicingDecision detect_voicing(std::span<const double> y, double f0_hat,
                               const DecoderConfig& cfg, int sample_rate);

struct F0Estimate {
  std::size_t frame_index = 0;
  double time_sec = 0.0;
  double f0 = 0.0;  ///< 0 when unvoiced
  bool voiced = false;
  double confidence = 0.0;
};

/// decode_f0 followed by detect_voicing.
F0Estimate decode_frame(std::span<const double> y, const DecoderConfig& cfg,
                        int sample_rate);

struct TrackerConfig {
  FramingConfig framing;
  DecoderConfig decoder;
  InputNormalization normalization = InputNormalization::kWindowRms;
  /// Windows per forward pass; affects speed only.
  std::size_t chunk = 256;
};

/// Runs the model over every frame's context window (edge frames repeated)
/// and decodes the centre-step posterior.  One estimate per frame.
std::vector<F0Estimate> track(const Waveform& w, const RecurrentModel& model,
                              const TrackerConfig& cfg);

/// Centre-step posteriors for every frame (frame_len x frames).
Eigen::MatrixXd posteriors(const FrameSequence& frames, const RecurrentModel& model,
                           const TrackerConfig& cfg);

/// "time_sec<TAB>f0_hz<TAB>voiced<TAB>confidence" per line, 6 decimals.
void write_estimates(std::ostream& os, std::span<const F0Estimate> estimates);
std::vector<F0Estimate> read_estimates(std::istream& is);

}  // namespace f0reg

#endif  // F0REG_TRACKER_HPP_
