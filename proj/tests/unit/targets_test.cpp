// tests/unit/targets_test.cpp
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
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "f0reg/error.hpp"
#include "f0reg/targets.hpp"
#include "oracles.hpp"

namespace f0reg {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double a) {
  while (a > kPi) a -= 2 * kPi;
  while (a <= -kPi) a += 2 * kPi;
  return a;
}

TEST(FitSinusoidTest, RecoversPhaseOfCleanCosine) {
  for (double f0 : {100.0, 133.3, 200.0, 371.0}) {
    for (double phase : {-3.0, -1.0, 0.0, 0.5, 2.9}) {
      const auto x = synth_cosine(f0, phase, 400, 16000);
      const SinusoidFit fit = fit_sinusoid(x, f0, 16000);
      EXPECT_NEAR(wrap(fit.phase - phase), 0.0, 1e-9) << f0 << " " << phase;
      EXPECT_NEAR(fit.correlation, 1.0, 1e-12);
      EXPECT_FALSE(fit.degenerate);
    }
  }
}

TEST(FitSinusoidTest, MatchesGridSearchOnNoisyFrames) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> f0_dist(60.0, 400.0), ph(-kPi, kPi);
  std::normal_distribution<double> noise(0.0, 0.5);
  const double step = 2 * kPi / 20000;
  for (int trial = 0; trial < 20; ++trial) {
    const double f0 = f0_dist(rng);
    auto x = synth_cosine(f0, ph(rng), 400, 16000);
    for (double& v : x) v += noise(rng);
    const SinusoidFit fit = fit_sinusoid(x, f0, 16000);
    const double grid = oracle::grid_search_phase(x, f0, 16000);
    EXPECT_LE(std::abs(wrap(fit.phase - grid)), step) << "f0 " << f0;
    const auto best = synth_cosine(f0, fit.phase, 400, 16000);
    EXPECT_NEAR(normalized_crosscorrelation(x, best), fit.correlation, 1e-12);
    EXPECT_GT(fit.phase, -kPi);
    EXPECT_LE(fit.phase, kPi);
  }
}

TEST(FitSinusoidTest, ZeroFrameIsDegenerate) {
  const std::vector<double> zeros(400, 0.0);
  const SinusoidFit fit = fit_sinusoid(zeros, 200.0, 16000);
  EXPECT_TRUE(fit.degenerate);
  EXPECT_EQ(fit.correlation, 0.0);
  EXPECT_EQ(fit.phase, 0.0);
}

TEST(BuildTargetTest, UnvoicedIsIdentity) {
  std::vector<double> frame(400);
  for (std::size_t i = 0; i < frame.size(); ++i) frame[i] = std::sin(0.01 * i * i);
  const SinusoidTarget t = build_target(frame, 0.0, 16000);
  EXPECT_EQ(t.kind, TargetKind::kIdentity);
  EXPECT_EQ(t.samples, frame);
}

TEST(BuildTargetTest, VoicedIsUnitCosineAlignedToReference) {
  const auto clean = synth_cosine(150.0, 1.1, 400, 16000);
  std::vector<double> noisy = clean;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 2.0);
  for (double& v : noisy) v = 0.2 * v + n(rng);
  const SinusoidTarget t = build_target(noisy, 150.0, 16000, clean);
  EXPECT_EQ(t.kind, TargetKind::kVoiced);
  EXPECT_NEAR(wrap(t.phase - 1.1), 0.0, 1e-9);
  for (std::size_t i = 0; i < 400; ++i) EXPECT_NEAR(t.samples[i], clean[i], 1e-9);
}

TEST(BuildTargetTest, RejectsInvalidF0) {
  const std::vector<double> frame(400, 1.0);
  EXPECT_THROW(build_target(frame, -1.0, 16000), DomainError);
  EXPECT_THROW(build_target(frame, 8000.0, 16000), DomainError);
}

FrameSequence numbered_frames(std::size_t n) {
  Waveform w;
  for (std::size_t i = 0; i < 400 + 80 * (n - 1); ++i) w.samples.push_back(1.0 + i / 80);
  return frame_signal(w, 400, 80);
}

TEST(ContextWindowTest, ReplicatesEdges) {
  const FrameSequence fs = numbered_frames(6);
  const Eigen::MatrixXd win = context_window(fs, 0, 2);
  ASSERT_EQ(win.cols(), 5);
  EXPECT_EQ(win(0, 0), fs.frames(0, 0));
  EXPECT_EQ(win(0, 1), fs.frames(0, 0));
  EXPECT_EQ(win(0, 2), fs.frames(0, 0));
  EXPECT_EQ(win(0, 3), fs.frames(0, 1));
  const Eigen::MatrixXd tail = context_window(fs, 5, 2);
  EXPECT_EQ(tail(0, 4), fs.frames(0, 5));
  EXPECT_EQ(tail(0, 3), fs.frames(0, 5));
  EXPECT_EQ(tail(0, 0), fs.frames(0, 3));
}

TEST(NormalizeWindowTest, Modes) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Random(400, 5);
  w.col(2) *= 10.0;
  Eigen::MatrixXd whole = w;
  normalize_window(whole, InputNormalization::kWindowRms);
  EXPECT_NEAR(std::sqrt(whole.squaredNorm() / whole.size()), 1.0, 1e-12);
  EXPECT_NEAR(whole(7, 2) / whole(7, 1), w(7, 2) / w(7, 1), 1e-12);

  Eigen::MatrixXd per = w;
  normalize_window(per, InputNormalization::kFrameRms);
  for (Eigen::Index c = 0; c < per.cols(); ++c)
    EXPECT_NEAR(per.col(c).norm() / std::sqrt(400.0), 1.0, 1e-12);

  Eigen::MatrixXd raw = w;
  normalize_window(raw, InputNormalization::kNone);
  EXPECT_EQ(raw, w);

  Eigen::MatrixXd zeros = Eigen::MatrixXd::Zero(400, 3);
  normalize_window(zeros, InputNormalization::kWindowRms);
  EXPECT_EQ(zeros.norm(), 0.0);
}

TEST(NormalizationNames, RoundTrip) {
  for (auto m : {InputNormalization::kNone, InputNormalization::kFrameRms,
                 InputNormalization::kWindowRms})
    EXPECT_EQ(parse_input_normalization(to_string(m)), m);
  EXPECT_THROW(parse_input_normalization("loud"), ConfigError);
}

TEST(BuildSequenceTest, PerStepTargets) {
  Waveform w;
  w.samples = synth_cosine(125.0, 0.0, 400 + 80 * 9, 16000);
  for (double& v : w.samples) v *= 0.3;
  const FrameSequence fs = frame_signal(w, 400, 80);
  GroundTruthF0 truth;
  truth.f0 = {0, 0, 125, 125, 125, 125, 125, 125, 0, 0};
  WindowConfig cfg;
  cfg.context_radius = 2;
  const TrainingSequence seq = build_sequence(fs, nullptr, truth, 2, cfg);
  ASSERT_EQ(seq.inputs.cols(), 5);
  ASSERT_EQ(seq.voiced, (std::vector<std::uint8_t>{0, 0, 1, 1, 1}));
  EXPECT_NEAR(std::sqrt(seq.inputs.squaredNorm() / seq.inputs.size()), 1.0, 1e-12);
  EXPECT_EQ(seq.targets.col(0), seq.inputs.col(0));
  EXPECT_EQ(seq.targets.col(1), seq.inputs.col(1));
  for (Eigen::Index c = 2; c < 5; ++c) {
    EXPECT_NEAR(seq.targets.col(c).cwiseAbs().maxCoeff(), 1.0, 1e-3);
    const Eigen::VectorXd in = seq.inputs.col(c);
    const Eigen::VectorXd tg = seq.targets.col(c);
    EXPECT_NEAR(normalized_crosscorrelation({in.data(), 400}, {tg.data(), 400}), 1.0, 1e-9);
  }
}

TEST(GroundTruthTest, Validate) {
  GroundTruthF0 t;
  t.f0 = {0.0, 100.0};
  EXPECT_NO_THROW(t.validate());
  t.f0.push_back(-1.0);
  EXPECT_THROW(t.validate(), DomainError);
  t.f0.back() = 9000.0;
  EXPECT_THROW(t.validate(), DomainError);
}

}  // namespace
}  // namespace f0reg
