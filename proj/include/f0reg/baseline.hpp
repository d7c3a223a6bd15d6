// f0reg/baseline.hpp
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

#ifndef F0REG_BASELINE_HPP_
#define F0REG_BASELINE_HPP_

#include <span>
#include <vector>

#include "f0reg/signal.hpp"
#include "f0reg/tracker.hpp"

namespace f0reg {

struct YinConfig {
  double f0_min = 50.0;
  double f0_max = 400.0;
  double yin_threshold = 0.1;
  FramingConfig framing;

  /// Same range rules as DecoderConfig; the difference window
  /// frame_len - fs/f0_min must be at least one sample.
  void validate(int sample_rate) const;
};

/// YIN on one frame: difference function over a window of
/// frame_len - max_lag samples, cumulative-mean normalization, first dip
/// below the threshold (followed down to its local minimum), parabolic
/// refinement.  No dip means unvoiced.  Confidence is 1 - d'(period).
F0Estimate yin_frame(std::span<const double> frame, const YinConfig& cfg, int sample_rate);

std::vector<F0Estimate> yin_track(const Waveform& w, const YinConfig& cfg);

/// The model-free control: decode_frame applied to the raw frames.
std::vector<F0Estimate> acf_track(const Waveform& w, const DecoderConfig& cfg,
                                  const FramingConfig& framing = {});

}  // namespace f0reg

#endif  // F0REG_BASELINE_HPP_
