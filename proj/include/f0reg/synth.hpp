// f0reg/synth.hpp
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

#ifndef F0REG_SYNTH_HPP_
#define F0REG_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "f0reg/signal.hpp"
#include "f0reg/targets.hpp"

namespace f0reg {

enum class NoiseKind : std::uint8_t { kNone, kWhite, kPink };

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view name);

/// Unit-RMS noise.  Pink-like noise is white noise through a three-pole
/// 1/f approximation filter.
Waveform generate_noise(NoiseKind kind, std::size_t n, int sample_rate,
                        std::uint64_t seed);

struct ContourPoint {
  double time_sec = 0.0;
  double f0 = 0.0;
};

enum class SegmentKind : std::uint8_t { kVoiced, kUnvoiced, kSilence };

struct VoicingSegment {
  double start_sec = 0.0;
  double end_sec = 0.0;
  SegmentKind kind = SegmentKind::kSilence;
};

/// Recipe for one synthetic utterance.  Time not covered by `schedule` is
/// silent.
struct SynthSpec {
  std::vector<ContourPoint> f0_contour;  ///< piecewise linear, held at the ends
  std::size_t harmonics = 10;
  double rolloff = 1.0;                  ///< harmonic k has amplitude k^-rolloff
  std::vector<double> harmonic_weights;  ///< optional extra per-harmonic gains
  std::vector<VoicingSegment> schedule;
  double duration = 1.0;
  int sample_rate = kDefaultSampleRate;
  double voiced_rms = 0.3;
  double unvoiced_rms = 0.03;
  double ramp_sec = 0.01;
  NoiseKind noise = NoiseKind::kNone;
  double snr_db = 0.0;
  std::uint64_t seed = 0;

  /// Throws DomainError for bad durations, contours or harmonics >= Nyquist.
  void validate() const;
  double f0_at(double time_sec) const;
  SegmentKind segment_at(double time_sec) const;
};

struct SynthResult {
  Waveform clean;
  Waveform noisy;  ///< equals `clean` when spec.noise is kNone
  GroundTruthF0 truth;
};

/// Phase-continuous harmonic synthesis along the contour.  The truth of
/// frame i is the contour value at the frame centre when the centre lies in
/// a voiced segment, else 0.
SynthResult synth_utterance(const SynthSpec& spec, const FramingConfig& framing = {});

/// Ranges for random_synth_spec.
struct SynthCorpusOptions {
  double f0_min = 80.0;
  double f0_max = 300.0;
  double duration = 1.5;
  std::size_t max_harmonics = 20;
  double rolloff_min = 0.5;
  double rolloff_max = 1.5;
};

/// Randomized voice: contour, spectrum and voiced/unvoiced/silence schedule.
SynthSpec random_synth_spec(const SynthCorpusOptions& opts, std::uint64_t seed);

}  // namespace f0reg

#endif  // F0REG_SYNTH_HPP_
