// tests/unit/eval_test.cpp
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
#include "f0reg/eval.hpp"
#include "oracles.hpp"

namespace f0reg {
namespace {

GroundTruthF0 truth_of(std::vector<double> f0) {
  GroundTruthF0 t;
  t.f0 = std::move(f0);
  return t;
}

std::vector<F0Estimate> estimates_of(const std::vector<double>& f0) {
  std::vector<F0Estimate> out;
  for (std::size_t i = 0; i < f0.size(); ++i) out.push_back({i, 0.0, f0[i], f0[i] > 0.0, 0.5});
  return out;
}

TEST(ScoreTest, BoundaryAtTenSamples) {
  // Truth 100 Hz is 160 samples; 170 samples sits exactly on the boundary.
  const auto t = truth_of({100.0, 100.0, 100.0});
  const auto e = estimates_of({16000.0 / 170.0, 16000.0 / 150.0, 16000.0 / (170.0 + 1e-6)});
  const EvalReport r = score(e, t);
  EXPECT_EQ(r.n_voiced, 3u);
  EXPECT_EQ(r.n_gpe, 1u);
  EXPECT_EQ(r.n_fpe, 2u);
  EXPECT_FALSE(is_gross_error(16000.0 / 170.0, 100.0, 16000, 0.625));
  EXPECT_TRUE(is_gross_error(16000.0 / (170.0 + 1e-6), 100.0, 16000, 0.625));
}

TEST(ScoreTest, WorkedExample) {
  const auto t = truth_of({0.0, 200.0, 200.0, 100.0, 100.0});
  const auto e = estimates_of({150.0, 200.0, 0.0, 16000.0 / 164.0, 50.0});
  const EvalReport r = score(e, t);
  EXPECT_EQ(r.n_voiced, 4u);
  EXPECT_EQ(r.n_gpe, 2u);  // unvoiced estimate and octave error
  EXPECT_EQ(r.n_fpe, 2u);
  EXPECT_DOUBLE_EQ(r.gpe_rate, 0.5);
  // Fine errors: 0 ms and 4 samples = 0.25 ms.
  EXPECT_NEAR(r.mu_fpe_ms, 0.125, 1e-12);
  EXPECT_NEAR(r.sigma_fpe_ms, 0.125, 1e-12);
}

TEST(ScoreTest, UnvoicedEstimatesCanBeExcluded) {
  const auto t = truth_of({200.0, 200.0});
  const auto e = estimates_of({0.0, 200.0});
  ScoreConfig cfg;
  cfg.unvoiced_is_gross = false;
  const EvalReport r = score(e, t, cfg);
  EXPECT_EQ(r.n_voiced, 1u);
  EXPECT_EQ(r.n_voicing_miss, 1u);
  EXPECT_EQ(r.n_gpe, 0u);
}

TEST(ScoreTest, NoVoicedFrames) {
  const EvalReport r = score(estimates_of({100.0, 0.0}), truth_of({0.0, 0.0}));
  EXPECT_FALSE(r.gpe_defined);
  EXPECT_EQ(r.n_voiced, 0u);
}

TEST(ScoreTest, LengthMismatch) {
  EXPECT_THROW(score(estimates_of({1.0}), truth_of({1.0, 2.0})), AlignmentError);
}

TEST(ScoreTest, MatchesBruteForceScorer) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> f(50.0, 400.0), jitter(-0.08, 0.08), u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> ref, est_f0;
    for (int i = 0; i < 500; ++i) {
      const double r = u(rng) < 0.2 ? 0.0 : f(rng);
      ref.push_back(r);
      double e = u(rng) < 0.1 ? 0.0 : (r > 0 ? r * (1.0 + jitter(rng)) : f(rng));
      if (u(rng) < 0.05) e = r / 2;
      est_f0.push_back(e);
    }
    const auto est = estimates_of(est_f0);
    for (bool gross_unvoiced : {true, false}) {
      ScoreConfig cfg;
      cfg.unvoiced_is_gross = gross_unvoiced;
      const EvalReport r = score(est, truth_of(ref), cfg);
      const oracle::BruteScore b = oracle::brute_force_score(est, ref, 16000, 0.625, gross_unvoiced);
      EXPECT_EQ(r.n_voiced, b.n_voiced);
      EXPECT_EQ(r.n_gpe, b.n_gpe);
      EXPECT_EQ(r.n_fpe, b.n_fpe);
      EXPECT_NEAR(r.mu_fpe_ms, static_cast<double>(b.mu_ms), 1e-12);
      EXPECT_NEAR(r.sigma_fpe_ms, static_cast<double>(b.sigma_ms), 1e-9);
    }
  }
}

EvalReport labelled(std::string method, std::string noise, std::string snr, std::size_t voiced,
                    std::size_t gpe) {
  EvalReport r;
  r.method = std::move(method);
  r.noise = std::move(noise);
  r.snr = std::move(snr);
  r.n_voiced = voiced;
  r.n_gpe = gpe;
  r.n_fpe = voiced - gpe;
  r.gpe_defined = voiced > 0;
  r.gpe_rate = voiced ? double(gpe) / voiced : 0.0;
  return r;
}

TEST(AggregateTest, PoolsCountsPerGroup) {
  const std::vector<EvalReport> reps = {
      labelled("m", "white", "0", 100, 10), labelled("m", "pink", "0", 50, 20),
      labelled("m", "white", "5", 100, 5), labelled("m", "clean", "clean", 80, 1),
      labelled("m", "pink", "5", 50, 0)};
  const auto by_snr = aggregate(reps, kGroupSnr);
  ASSERT_EQ(by_snr.size(), 3u);
  EXPECT_EQ(by_snr[0].snr, "clean");
  EXPECT_EQ(by_snr[1].snr, "0");
  EXPECT_EQ(by_snr[1].n_voiced, 150u);
  EXPECT_EQ(by_snr[1].n_gpe, 30u);
  EXPECT_DOUBLE_EQ(by_snr[1].gpe_rate, 0.2);
  EXPECT_EQ(by_snr[1].noise, "*");
  const auto all = aggregate(reps, kGroupNone);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0].n_voiced, 380u);
  EXPECT_EQ(aggregate(reps, kGroupNoise | kGroupSnr).size(), 5u);
}

TEST(AggregateTest, SingleReportPassesThrough) {
  const auto t = truth_of({100.0, 120.0, 130.0, 0.0});
  const auto e = estimates_of({101.0, 119.0, 60.0, 0.0});
  const EvalReport r = score(e, t);
  const auto agg = aggregate(std::vector<EvalReport>{r}, kGroupNone);
  ASSERT_EQ(agg.size(), 1u);
  EXPECT_EQ(agg[0].mu_fpe_ms, r.mu_fpe_ms);
  EXPECT_EQ(agg[0].sigma_fpe_ms, r.sigma_fpe_ms);
  EXPECT_EQ(agg[0].gpe_rate, r.gpe_rate);
}

TEST(AggregateTest, PooledMomentsEqualConcatenation) {
  const auto t1 = truth_of({100.0, 120.0, 130.0});
  const auto e1 = estimates_of({101.0, 119.0, 131.0});
  const auto t2 = truth_of({200.0, 210.0});
  const auto e2 = estimates_of({199.0, 212.0});
  const auto t12 = truth_of({100.0, 120.0, 130.0, 200.0, 210.0});
  const auto e12 = estimates_of({101.0, 119.0, 131.0, 199.0, 212.0});
  const auto agg = aggregate(std::vector<EvalReport>{score(e1, t1), score(e2, t2)}, kGroupNone);
  const EvalReport whole = score(e12, t12);
  EXPECT_NEAR(agg[0].mu_fpe_ms, whole.mu_fpe_ms, 1e-14);
  EXPECT_NEAR(agg[0].sigma_fpe_ms, whole.sigma_fpe_ms, 1e-14);
}

TEST(AggregateTest, MixedSampleRatesRejected) {
  EvalReport a = labelled("m", "white", "0", 10, 1), b = a;
  b.sample_rate = 8000;
  EXPECT_THROW(aggregate(std::vector<EvalReport>{a, b}, kGroupNone), ConfigError);
}

TEST(ReportIoTest, TableRoundTrip) {
  const std::vector<EvalReport> rows = {labelled("lstm", "white", "-5", 100, 40),
                                        labelled("lstm", "clean", "clean", 0, 0)};
  std::stringstream ss;
  write_report_table(ss, rows);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "method\tnoise\tsnr\tn_voiced\tn_gpe\tn_fpe\tgpe_rate\tmu_fpe_ms\tsigma_fpe_ms");
  EXPECT_NE(text.find("\tnan\t"), std::string::npos);
  const auto back = read_report_table(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].snr, "-5");
  EXPECT_EQ(back[0].n_gpe, 40u);
  EXPECT_DOUBLE_EQ(back[0].gpe_rate, 0.4);
  EXPECT_FALSE(back[1].gpe_defined);
}

TEST(ReportIoTest, GroupKeys) {
  EXPECT_EQ(parse_group_keys("noise,snr"), unsigned(kGroupNoise | kGroupSnr));
  EXPECT_EQ(parse_group_keys("none"), unsigned(kGroupNone));
  EXPECT_EQ(parse_group_keys(""), unsigned(kGroupNone));
  EXPECT_THROW(parse_group_keys("speaker"), ConfigError);
}

}  // namespace
}  // namespace f0reg
