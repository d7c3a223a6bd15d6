// tests/unit/signal_test.cpp
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
#include "f0reg/signal.hpp"

namespace f0reg {
namespace {

Waveform ramp(std::size_t n) {
  Waveform w;
  for (std::size_t i = 0; i < n; ++i) w.samples.push_back(static_cast<double>(i));
  return w;
}

Waveform gaussian(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, scale);
  Waveform w;
  for (std::size_t i = 0; i < n; ++i) w.samples.push_back(dist(rng));
  return w;
}

TEST(FramingTest, FrameCount) {
  const FramingConfig cfg;
  EXPECT_EQ(cfg.frame_count(399), 0u);
  EXPECT_EQ(cfg.frame_count(400), 1u);
  EXPECT_EQ(cfg.frame_count(479), 1u);
  EXPECT_EQ(cfg.frame_count(480), 2u);
  // One second at 16 kHz: (16000 - 400) / 80 + 1.
  EXPECT_EQ(cfg.frame_count(16000), 196u);
}

TEST(FramingTest, FramesCopySamples) {
  const FrameSequence fs = frame_signal(ramp(1000), 400, 80);
  ASSERT_EQ(fs.size(), 8u);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    EXPECT_EQ(fs.start_offsets[i], 80 * i);
    const auto f = fs.frame(i);
    EXPECT_EQ(f.front(), static_cast<double>(80 * i));
    EXPECT_EQ(f.back(), static_cast<double>(80 * i + 399));
  }
  EXPECT_DOUBLE_EQ(fs.center_time(0), 200.0 / 16000.0);
  EXPECT_DOUBLE_EQ(fs.center_time(3), 440.0 / 16000.0);
}

TEST(FramingTest, ShortInputRejected) {
  EXPECT_THROW(frame_signal(ramp(399), 400, 80), EmptyInputError);
  EXPECT_THROW(frame_signal(ramp(1000), 0, 80), Error);
  EXPECT_THROW(frame_signal(ramp(1000), 400, 0), Error);
}

TEST(CosineTest, ValuesAndDomain) {
  const auto c = synth_cosine(1000.0, 0.25, 16, 16000);
  for (std::size_t m = 0; m < c.size(); ++m)
    EXPECT_NEAR(c[m], std::cos(2.0 * std::numbers::pi * m / 16.0 + 0.25), 1e-15);
  EXPECT_THROW(synth_cosine(0.0, 0.0, 10, 16000), DomainError);
  EXPECT_THROW(synth_cosine(8000.0, 0.0, 10, 16000), DomainError);
  EXPECT_THROW(synth_cosine(-5.0, 0.0, 10, 16000), DomainError);
}

TEST(CorrelationTest, AutocorrelationOfPeriodicSignal) {
  const auto c = synth_cosine(200.0, 0.3, 400, 16000);
  EXPECT_NEAR(normalized_autocorrelation(c, 80), 1.0, 1e-12);
  EXPECT_NEAR(normalized_autocorrelation(c, 160), 1.0, 1e-12);
  EXPECT_NEAR(normalized_autocorrelation(c, 40), -1.0, 1e-12);
  EXPECT_LT(normalized_autocorrelation(c, 20), 0.2);
}

TEST(CorrelationTest, DomainAndDegenerateCases) {
  const auto c = synth_cosine(200.0, 0.0, 400, 16000);
  EXPECT_THROW(normalized_autocorrelation(c, 0), DomainError);
  EXPECT_THROW(normalized_autocorrelation(c, 400), DomainError);
  const std::vector<double> zeros(400, 0.0);
  EXPECT_EQ(normalized_autocorrelation(zeros, 10), 0.0);

  std::vector<double> neg(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) neg[i] = -3.0 * c[i];
  EXPECT_NEAR(normalized_crosscorrelation(c, c), 1.0, 1e-14);
  EXPECT_NEAR(normalized_crosscorrelation(c, neg), -1.0, 1e-14);
  EXPECT_THROW(normalized_crosscorrelation(c, std::vector<double>(3)), DomainError);
  EXPECT_THROW(normalized_crosscorrelation(std::vector<double>{1.0}, std::vector<double>{1.0}),
               DomainError);
}

TEST(CorrelationTest, BoundedOnRandomInput) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Waveform w = gaussian(400, s);
    for (std::size_t lag : {1u, 17u, 200u, 399u}) {
      const double r = normalized_autocorrelation(w.samples, lag);
      EXPECT_GE(r, -1.0);
      EXPECT_LE(r, 1.0);
    }
  }
}

TEST(MixTest, HitsRequestedSnr) {
  const Waveform clean = gaussian(16000, 1, 0.3);
  const Waveform noise = gaussian(5000, 2, 2.0);
  for (double snr : {-10.0, -5.0, 0.0, 5.0, 20.0}) {
    MixOptions opts;
    opts.noise_offset = 1234;
    const Waveform mixed = mix_at_snr(clean, noise, snr, opts);
    ASSERT_EQ(mixed.size(), clean.size());
    std::vector<double> added(clean.size());
    for (std::size_t i = 0; i < clean.size(); ++i) added[i] = mixed.samples[i] - clean.samples[i];
    const double measured = 10.0 * std::log10(mean_power(clean.samples) / mean_power(added));
    EXPECT_NEAR(measured, snr, 1e-9);
  }
}

TEST(MixTest, TilesNoiseCyclicallyFromOffset) {
  Waveform clean;
  clean.samples.assign(10, 0.0);
  clean.samples[0] = 1.0;  // power 0.1
  Waveform noise;
  noise.samples = {1.0, -1.0, 2.0};
  MixOptions opts;
  opts.noise_offset = 4;  // wraps to index 1
  const Waveform mixed = mix_at_snr(clean, noise, 0.0, opts);
  std::vector<double> tiled;
  for (std::size_t i = 0; i < 10; ++i) tiled.push_back(noise.samples[(1 + i) % 3]);
  const double g = snr_gain(0.1, mean_power(tiled), 0.0);
  for (std::size_t i = 0; i < 10; ++i)
    EXPECT_NEAR(mixed.samples[i], clean.samples[i] + g * tiled[i], 1e-15);
}

TEST(MixTest, Errors) {
  const Waveform clean = gaussian(100, 1);
  Waveform silent;
  silent.samples.assign(50, 0.0);
  EXPECT_THROW(mix_at_snr(clean, silent, 0.0), DegenerateInputError);
  EXPECT_THROW(mix_at_snr(silent, clean, 0.0), DegenerateInputError);
  MixOptions no_tile;
  no_tile.tile_noise = false;
  EXPECT_THROW(mix_at_snr(clean, gaussian(50, 2), 0.0, no_tile), Error);
}

TEST(MixTest, GainFormula) {
  EXPECT_DOUBLE_EQ(snr_gain(1.0, 1.0, 0.0), 1.0);
  EXPECT_NEAR(snr_gain(1.0, 1.0, 20.0), 0.1, 1e-15);
  EXPECT_NEAR(snr_gain(4.0, 1.0, 0.0), 2.0, 1e-15);
}

TEST(MixTest, OffsetsDeterministicAndInRange) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t o = random_noise_offset(777, s);
    EXPECT_LT(o, 777u);
    EXPECT_EQ(o, random_noise_offset(777, s));
  }
}

}  // namespace
}  // namespace f0reg
