// tests/unit/tracker_test.cpp
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

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "f0reg/error.hpp"
#include "f0reg/tracker.hpp"
#include "oracles.hpp"

namespace f0reg {
namespace {

TEST(DecoderTest, IntegerPeriodsExact) {
  const DecoderConfig cfg;
  for (double f0 : {100.0, 125.0, 160.0, 200.0, 250.0, 320.0}) {
    const auto x = synth_cosine(f0, 0.4, 400, 16000);
    const LagEstimate e = decode_f0(x, cfg, 16000);
    EXPECT_EQ(e.f0, f0);
    EXPECT_EQ(e.peak_lag, static_cast<std::size_t>(16000 / f0));
  }
}

TEST(DecoderTest, WorkedExamples) {
  const DecoderConfig cfg;
  EXPECT_EQ(cfg.min_lag(16000), 40u);
  EXPECT_EQ(cfg.max_lag(16000), 320u);
  // 150 Hz: period 106.67 samples, nearest lag 107.
  EXPECT_EQ(decode_f0(synth_cosine(150.0, 0.0, 400, 16000), cfg, 16000).peak_lag, 107u);
  // 220 Hz: period 72.73 samples, nearest lag 73.
  EXPECT_EQ(decode_f0(synth_cosine(220.0, 0.0, 400, 16000), cfg, 16000).peak_lag, 73u);
}

TEST(DecoderTest, NonIntegerPeriodsWithinOneLagQuantum) {
  const DecoderConfig cfg;
  for (double f0 = 52.0; f0 < 400.0; f0 += 3.7) {
    const auto x = synth_cosine(f0, 1.0, 400, 16000);
    const LagEstimate e = decode_f0(x, cfg, 16000);
    const double period = 16000.0 / f0;
    const double lag = std::round(period);
    const double quantum = 16000.0 / (lag - 1) - 16000.0 / lag;
    EXPECT_LE(std::abs(e.f0 - f0), quantum) << f0;
  }
}

TEST(DecoderTest, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  const DecoderConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> y(400);
    for (double& v : y) v = n(rng);
    const LagEstimate e = decode_f0(y, cfg, 16000);
    EXPECT_EQ(e.peak_lag, oracle::exhaustive_best_lag(y, 40, 320, cfg.octave_cost));
  }
}

TEST(DecoderTest, ParabolicRefinesTowardTruePeriod) {
  DecoderConfig cfg;
  cfg.interpolation = LagInterpolation::kParabolic;
  const auto x = synth_cosine(150.0, 0.0, 400, 16000);
  const LagEstimate e = decode_f0(x, cfg, 16000);
  EXPECT_EQ(e.peak_lag, 107u);
  EXPECT_LT(std::abs(e.lag - 16000.0 / 150.0), std::abs(107.0 - 16000.0 / 150.0));
}

TEST(DecoderTest, ConfigValidation) {
  DecoderConfig cfg;
  cfg.f0_min = 400;
  cfg.f0_max = 50;
  EXPECT_THROW(cfg.validate(16000, 400), Error);
  cfg = DecoderConfig{};
  cfg.lambda = 1.5;
  EXPECT_THROW(cfg.validate(16000, 400), Error);
  cfg = DecoderConfig{};
  cfg.f0_max = 9000;
  EXPECT_THROW(cfg.validate(16000, 400), Error);
}

TEST(VoicingTest, GateIsInclusive) {
  static_assert(passes_voicing_gate(0.15, 0.15));
  static_assert(!passes_voicing_gate(0.1499, 0.15));
  const DecoderConfig cfg;
  const auto x = synth_cosine(200.0, 0.0, 400, 16000);
  const VoicingDecision v = detect_voicing(x, 200.0, cfg, 16000);
  EXPECT_TRUE(v.voiced);
  EXPECT_NEAR(v.confidence, 1.0, 1e-12);
}

TEST(VoicingTest, WhiteNoiseFalseAlarmRateAtFixedFrequency) {
  // For Gaussian white noise the squared best-fit correlation at a fixed
  // frequency is chi-square with 2 degrees of freedom over the frame energy,
  // so P(confidence >= 0.15) is close to exp(-400 * 0.15^2 / 2).
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 1.0);
  const DecoderConfig cfg;
  const int trials = 20000;
  int voiced = 0;
  std::vector<double> y(400);
  for (int i = 0; i < trials; ++i) {
    for (double& v : y) v = n(rng);
    voiced += detect_voicing(y, 200.0, cfg, 16000).voiced;
  }
  const double p = std::exp(-400 * 0.15 * 0.15 / 2);
  const double sd = std::sqrt(p * (1 - p) / trials);
  EXPECT_NEAR(static_cast<double>(voiced) / trials, p, 4 * sd);
}

RecurrentModel passthrough_model(std::size_t radius) {
  // Plain RNN whose tiny tanh layer and scaled readout approximate identity.
  Architecture a;
  a.cell = CellType::kPlainRnn;
  a.frame_len = 400;
  a.hidden = {400};
  a.context_radius = radius;
  a.batch_norm = false;
  RecurrentModel m{a, Parameters::zeros(a), NormStats::identity(a)};
  m.params.layers[0].feedforward.rightCols(400) = 1e-4 * Eigen::MatrixXd::Identity(400, 400);
  m.params.output.feedforward.rightCols(400) = 1e4 * Eigen::MatrixXd::Identity(400, 400);
  return m;
}

TEST(TrackTest, PassthroughModelTracksTone) {
  Waveform w;
  w.samples = synth_cosine(200.0, 0.0, 16000, 16000);
  TrackerConfig cfg;
  const auto est = track(w, passthrough_model(2), cfg);
  ASSERT_EQ(est.size(), 196u);
  for (const F0Estimate& e : est) {
    EXPECT_TRUE(e.voiced);
    EXPECT_EQ(e.f0, 200.0);
  }
  EXPECT_DOUBLE_EQ(est[3].time_sec, (3 * 80 + 200) / 16000.0);
  EXPECT_EQ(est[3].frame_index, 3u);
}

TEST(TrackTest, ChunkingDoesNotChangeOutput) {
  Waveform w;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 0.1);
  w.samples = synth_cosine(130.0, 0.0, 8000, 16000);
  for (double& v : w.samples) v += n(rng);
  RecurrentModel m = init_model([] {
    Architecture a;
    a.hidden = {6};
    a.context_radius = 2;
    return a;
  }());
  TrackerConfig a, b;
  a.chunk = 7;
  b.chunk = 1000;
  const auto ea = track(w, m, a), eb = track(w, m, b);
  ASSERT_EQ(ea.size(), eb.size());
  for (std::size_t i = 0; i < ea.size(); ++i) {
    EXPECT_EQ(ea[i].f0, eb[i].f0);
    EXPECT_NEAR(ea[i].confidence, eb[i].confidence, 1e-12);
  }
}

TEST(TrackTest, Errors) {
  Waveform short_w;
  short_w.samples.assign(400 + 80 * 3, 0.1);
  EXPECT_THROW(track(short_w, passthrough_model(2), {}), EmptyInputError);
  Waveform w;
  w.samples = synth_cosine(200.0, 0.0, 4000, 16000);
  RecurrentModel m = passthrough_model(1);
  m.arch.frame_len = 300;
  EXPECT_THROW(track(w, m, {}), DimensionError);
}

TEST(EstimateIoTest, RoundTrip) {
  std::vector<F0Estimate> est = {{0, 0.0125, 200.0, true, 0.9}, {1, 0.0175, 0.0, false, 0.05}};
  std::stringstream ss;
  write_estimates(ss, est);
  EXPECT_EQ(ss.str(), "0.012500\t200.000000\t1\t0.900000\n0.017500\t0.000000\t0\t0.050000\n");
  std::stringstream in("# method x\n" + ss.str());
  const auto back = read_estimates(in);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].f0, 200.0);
  EXPECT_TRUE(back[0].voiced);
  EXPECT_FALSE(back[1].voiced);
  EXPECT_EQ(back[1].frame_index, 1u);
}

}  // namespace
}  // namespace f0reg
