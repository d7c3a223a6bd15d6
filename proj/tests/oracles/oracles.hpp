// tests/oracles/oracles.hpp
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

// Independent reference implementations used by the unit and acceptance
// tests.  They are written for clarity with scalar loops and share no code
// with the library beyond the data types.

#ifndef F0REG_TESTS_ORACLES_HPP_
#define F0REG_TESTS_ORACLES_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "f0reg/eval.hpp"
#include "f0reg/neural.hpp"
#include "f0reg/tracker.hpp"

namespace f0reg::oracle {

/// Step-by-step inference-mode forward pass over one sequence
/// (frame_len x steps), using running batch-norm statistics.
Eigen::MatrixXd naive_forward(const RecurrentModel& model, const Eigen::MatrixXd& sequence);

/// Central finite-difference gradient of evaluate_loss, same layout as the
/// analytic gradient.
Parameters numeric_gradient(const RecurrentModel& model, const SequenceBatch& batch,
                            const PassOptions& opts, double h = 1e-5);

struct GradientMismatch {
  std::size_t checked = 0;
  std::size_t failed = 0;
  double worst_rel = 0.0;
};

/// Compares every entry: |a - n| <= max(abs_floor, rel * max(|a|, |n|)).
GradientMismatch compare_gradients(const Parameters& analytic, const Parameters& numeric,
                                   double rel = 1e-4, double abs_floor = 1e-6);

enum class FrameClass { kUnvoicedTruth, kGross, kFine };

/// Per-frame classification written directly from the definitions, with
/// long double period arithmetic.
FrameClass classify(double f0_est, bool voiced_est, double f0_ref, int sample_rate,
                    double threshold_samples, bool unvoiced_is_gross);

struct BruteScore {
  std::size_t n_voiced = 0;
  std::size_t n_gpe = 0;
  std::size_t n_fpe = 0;
  long double mu_ms = 0.0L;
  long double sigma_ms = 0.0L;
};

BruteScore brute_force_score(std::span<const F0Estimate> est, std::span<const double> ref,
                             int sample_rate, double threshold_ms, bool unvoiced_is_gross);

/// Lag maximizing the raw normalized autocorrelation (with the same
/// octave penalty as the decoder) by exhaustive search.
std::size_t exhaustive_best_lag(std::span<const double> y, std::size_t min_lag,
                                std::size_t max_lag, double octave_cost);

/// Phase maximizing the normalized correlation with cos(w m + phase),
/// searched on a uniform grid of `points` values in [-pi, pi).
double grid_search_phase(std::span<const double> x, double f0, int sample_rate,
                         std::size_t points = 20000);

/// Fills every parameter and running statistic of `model` with seeded
/// random values (variances kept positive).
void randomize(RecurrentModel& model, std::uint64_t seed, double scale = 0.5);

/// Random inputs and targets for `batch` sequences of `arch.steps()` steps.
SequenceBatch random_batch(const Architecture& arch, std::size_t batch, std::uint64_t seed);

}  // namespace f0reg::oracle

#endif  // F0REG_TESTS_ORACLES_HPP_
