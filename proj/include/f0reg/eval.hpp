// f0reg/eval.hpp
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

#ifndef F0REG_EVAL_HPP_
#define F0REG_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "f0reg/targets.hpp"
#include "f0reg/tracker.hpp"

namespace f0reg {

struct ScoreConfig {
  /// Gross error threshold on the pitch period; 10 samples at 16 kHz.
  double gross_threshold_ms = 0.625;
  /// Count "unvoiced" estimates at voiced reference frames as gross errors.
  /// When false those frames are left out of every count.
  bool unvoiced_is_gross = true;
};

/// GPE rate and fine pitch error statistics.  FPE values are period errors
/// 1/f_hat - 1/f in milliseconds.  sigma_fpe_ms is the population standard
/// deviation.
struct EvalReport {
  std::string method = "-";
  std::string noise = "-";
  std::string snr = "-";  ///< "clean", a number in dB, or "-"
  std::size_t n_voiced = 0;
  std::size_t n_gpe = 0;
  std::size_t n_fpe = 0;
  std::size_t n_voicing_miss = 0;  ///< excluded frames when !unvoiced_is_gross
  double gpe_rate = 0.0;
  bool gpe_defined = false;  ///< false when there are no voiced frames
  double mu_fpe_ms = 0.0;
  double sigma_fpe_ms = 0.0;
  int sample_rate = kDefaultSampleRate;
  double gross_threshold_ms = 0.625;
};

/// Scores a track against the reference.  Frame counts must match.
EvalReport score(std::span<const F0Estimate> estimates, const GroundTruthF0& truth,
                 const ScoreConfig& cfg = {});

/// True when the period error exceeds the gross threshold.  Errors within
/// 1e-9 samples of the threshold count as fine.
bool is_gross_error(double f0_est, double f0_ref, int sample_rate,
                    double gross_threshold_ms);

enum GroupKey : std::uint8_t {
  kGroupNone = 0,
  kGroupMethod = 1,
  kGroupNoise = 2,
  kGroupSnr = 4,
};

/// Pools counts (not rates) over reports sharing the selected labels.
/// Labels not grouped on become "*".  Rows are sorted by method, noise, then
/// SNR with "clean" first.
std::vector<EvalReport> aggregate(std::span<const EvalReport> reports, unsigned group_by);

/// Parses "method,noise,snr" (any subset) into a GroupKey mask.
unsigned parse_group_keys(const std::string& spec);

void write_report_table(std::ostream& os, std::span<const EvalReport> rows);
std::vector<EvalReport> read_report_table(std::istream& is);
/// One JSON object per line.
void write_report_records(std::ostream& os, std::span<const EvalReport> rows);
/// (mu_fpe, sigma_fpe) per condition for plotting.
void write_scatter(std::ostream& os, std::span<const EvalReport> rows);

}  // namespace f0reg

#endif  // F0REG_EVAL_HPP_
