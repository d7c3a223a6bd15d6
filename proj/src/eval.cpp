// f0reg/eval.cpp
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

#include "f0reg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "f0reg/error.hpp"

namespace f0reg {

namespace {

constexpr double kBoundarySlack = 1e-9;  // samples

void finish(EvalReport& r) {
  r.gpe_defined = r.n_voiced > 0;
  r.gpe_rate = r.gpe_defined ? static_cast<double>(r.n_gpe) / r.n_voiced : 0.0;
}

// Orders "clean" first, then numeric SNRs, then anything else.
std::tuple<int, double, std::string> snr_key(const std::string& snr) {
  if (snr == "clean") return {0, 0.0, snr};
  try {
    std::size_t used = 0;
    const double v = std::stod(snr, &used);
    if (used == snr.size()) return {1, v, snr};
  } catch (const std::exception&) {
  }
  return {2, 0.0, snr};
}

}  // namespace

bool is_gross_error(double f0_est, double f0_ref, int sample_rate,
                    double gross_threshold_ms) {
  const double threshold = gross_threshold_ms * 1e-3 * sample_rate;
  const double error = sample_rate / f0_est - sample_rate / f0_ref;
  return std::abs(error) > threshold + kBoundarySlack;
}

EvalReport score(std::span<const F0Estimate> estimates, const GroundTruthF0& truth,
                 const ScoreConfig& cfg) {
  if (estimates.size() != truth.size())
    throw AlignmentError(fmt::format("{} estimates for {} reference frames",
                                     estimates.size(), truth.size()));
  EvalReport r;
  r.sample_rate = truth.sample_rate;
  r.gross_threshold_ms = cfg.gross_threshold_ms;
  std::vector<double> fine;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double ref = truth.f0[i];
    if (!(ref > 0.0)) continue;
    const F0Estimate& e = estimates[i];
    const bool has_estimate = e.voiced && e.f0 > 0.0;
    if (!has_estimate && !cfg.unvoiced_is_gross) {
      ++r.n_voicing_miss;
      continue;
    }
    ++r.n_voiced;
    if (!has_estimate ||
        is_gross_error(e.f0, ref, truth.sample_rate, cfg.gross_threshold_ms)) {
      ++r.n_gpe;
      continue;
    }
    ++r.n_fpe;
    fine.push_back(1e3 / e.f0 - 1e3 / ref);
  }
  finish(r);
  if (!fine.empty()) {
    double sum = 0.0;
    for (double v : fine) sum += v;
    r.mu_fpe_ms = sum / static_cast<double>(fine.size());
    double ss = 0.0;
    for (double v : fine) ss += (v - r.mu_fpe_ms) * (v - r.mu_fpe_ms);
    r.sigma_fpe_ms = std::sqrt(ss / static_cast<double>(fine.size()));
  }
  return r;
}

std::vector<EvalReport> aggregate(std::span<const EvalReport> reports, unsigned group_by) {
  if (reports.empty()) throw EmptyInputError("nothing to aggregate");
  using Key = std::tuple<std::string, std::string, std::tuple<int, double, std::string>>;
  std::map<Key, std::vector<const EvalReport*>> groups;
  for (const EvalReport& r : reports) {
    if (r.sample_rate != reports[0].sample_rate ||
        r.gross_threshold_ms != reports[0].gross_threshold_ms)
      throw ConfigError("reports were scored with different sample rates or thresholds");
    const std::string method = (group_by & kGroupMethod) ? r.method : "*";
    const std::string noise = (group_by & kGroupNoise) ? r.noise : "*";
    const std::string snr = (group_by & kGroupSnr) ? r.snr : "*";
    groups[{method, noise, snr_key(snr)}].push_back(&r);
  }

  std::vector<EvalReport> out;
  for (const auto& [key, members] : groups) {
    EvalReport g;
    if (members.size() == 1) g = *members.front();
    g.method = std::get<0>(key);
    g.noise = std::get<1>(key);
    g.snr = std::get<2>(std::get<2>(key));
    if (members.size() > 1) {
      g.sample_rate = members.front()->sample_rate;
      g.gross_threshold_ms = members.front()->gross_threshold_ms;
      double sum = 0.0, second = 0.0;
      for (const EvalReport* r : members) {
        g.n_voiced += r->n_voiced;
        g.n_gpe += r->n_gpe;
        g.n_fpe += r->n_fpe;
        g.n_voicing_miss += r->n_voicing_miss;
        const auto n = static_cast<double>(r->n_fpe);
        sum += n * r->mu_fpe_ms;
        second += n * (r->sigma_fpe_ms * r->sigma_fpe_ms + r->mu_fpe_ms * r->mu_fpe_ms);
      }
      finish(g);
      if (g.n_fpe > 0) {
        const auto n = static_cast<double>(g.n_fpe);
        g.mu_fpe_ms = sum / n;
        g.sigma_fpe_ms = std::sqrt(std::max(0.0, second / n - g.mu_fpe_ms * g.mu_fpe_ms));
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

unsigned parse_group_keys(const std::string& spec) {
  unsigned mask = kGroupNone;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item == "none") continue;
    if (item == "method") mask |= kGroupMethod;
    else if (item == "noise") mask |= kGroupNoise;
    else if (item == "snr") mask |= kGroupSnr;
    else throw ConfigError(fmt::format("unknown group key '{}'", item));
  }
  return mask;
}

void write_report_table(std::ostream& os, std::span<const EvalReport> rows) {
  os << "method\tnoise\tsnr\tn_voiced\tn_gpe\tn_fpe\tgpe_rate\tmu_fpe_ms\tsigma_fpe_ms\n";
  for (const EvalReport& r : rows)
    os << fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.6f}\t{:.6f}\n", r.method, r.noise, r.snr,
                      r.n_voiced, r.n_gpe, r.n_fpe,
                      r.gpe_defined ? fmt::format("{:.6f}", r.gpe_rate) : std::string("nan"),
                      r.mu_fpe_ms, r.sigma_fpe_ms);
}

std::vector<EvalReport> read_report_table(std::istream& is) {
  std::vector<EvalReport> rows;
  std::string line;
  if (!std::getline(is, line) || line.rfind("method\t", 0) != 0)
    throw ParseError("report table lacks its header line");
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    EvalReport r;
    std::string rate;
    if (!(fields >> r.method >> r.noise >> r.snr >> r.n_voiced >> r.n_gpe >> r.n_fpe >> rate >>
          r.mu_fpe_ms >> r.sigma_fpe_ms))
      throw ParseError(fmt::format("report line {}: cannot parse '{}'", line_no, line));
    r.gpe_defined = rate != "nan";
    r.gpe_rate = r.gpe_defined ? std::stod(rate) : 0.0;
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_report_records(std::ostream& os, std::span<const EvalReport> rows) {
  for (const EvalReport& r : rows) {
    nlohmann::ordered_json j;
    j["method"] = r.method;
    j["noise"] = r.noise;
    j["snr"] = r.snr;
    j["n_voiced"] = r.n_voiced;
    j["n_gpe"] = r.n_gpe;
    j["n_fpe"] = r.n_fpe;
    j["gpe_rate"] = r.gpe_defined ? nlohmann::ordered_json(r.gpe_rate) : nullptr;
    j["mu_fpe_ms"] = r.mu_fpe_ms;
    j["sigma_fpe_ms"] = r.sigma_fpe_ms;
    os << j.dump() << '\n';
  }
}

void write_scatter(std::ostream& os, std::span<const EvalReport> rows) {
  os << "method\tnoise\tsnr\tmu_fpe_ms\tsigma_fpe_ms\n";
  for (const EvalReport& r : rows)
    if (r.n_fpe > 0)
      os << fmt::format("{}\t{}\t{}\t{:.6f}\t{:.6f}\n", r.method, r.noise, r.snr, r.mu_fpe_ms,
                        r.sigma_fpe_ms);
}

}  // namespace f0reg
