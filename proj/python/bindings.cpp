// python/bindings.cpp
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

#include <cstdint>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "f0reg/baseline.hpp"
#include "f0reg/checkpoint.hpp"
#include "f0reg/data.hpp"
#include "f0reg/error.hpp"
#include "f0reg/eval.hpp"
#include "f0reg/neural.hpp"
#include "f0reg/synth.hpp"
#include "f0reg/tracker.hpp"

namespace py = pybind11;

namespace f0reg {
namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw DimensionError("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

Waveform to_waveform(const Array& a, int sample_rate) {
  Waveform w;
  w.samples = to_vector(a);
  w.sample_rate = sample_rate;
  return w;
}

// Track as a dict of equal-length arrays.
py::dict track_dict(const std::vector<F0Estimate>& est) {
  std::vector<double> time, f0, conf;
  std::vector<std::uint8_t> flags;
  for (const F0Estimate& e : est) {
    time.push_back(e.time_sec);
    f0.push_back(e.f0);
    conf.push_back(e.confidence);
    flags.push_back(e.voiced);
  }
  py::array_t<bool> voiced(static_cast<py::ssize_t>(flags.size()),
                           reinterpret_cast<const bool*>(flags.data()));
  py::dict d;
  d["time"] = to_array(time);
  d["f0"] = to_array(f0);
  d["voiced"] = voiced;
  d["confidence"] = to_array(conf);
  return d;
}

DecoderConfig decoder(double f0_min, double f0_max, double lambda) {
  DecoderConfig c;
  c.f0_min = f0_min;
  c.f0_max = f0_max;
  c.lambda = lambda;
  return c;
}

py::dict report_dict(const EvalReport& r) {
  py::dict d;
  d["n_voiced"] = r.n_voiced;
  d["n_gpe"] = r.n_gpe;
  d["n_fpe"] = r.n_fpe;
  d["gpe_rate"] = r.gpe_defined ? py::cast(r.gpe_rate) : py::none();
  d["mu_fpe_ms"] = r.mu_fpe_ms;
  d["sigma_fpe_ms"] = r.sigma_fpe_ms;
  return d;
}

}  // namespace
}  // namespace f0reg

PYBIND11_MODULE(_core, m) {
  using namespace f0reg;
  m.doc() = "F0 tracking by waveform-to-sinusoid regression";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  static py::exception<ConfigError> config(m, "ConfigError", base.ptr());
  static py::exception<DomainError> domain(m, "DomainError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      PyErr_SetString(config.ptr(), e.what());
    } catch (const DomainError& e) {
      PyErr_SetString(domain.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(base.ptr(), e.what());
    }
  });

  m.attr("SAMPLE_RATE") = kDefaultSampleRate;

  m.def("load_audio", [](const std::filesystem::path& p) {
    const Waveform w = load_audio(p);
    return py::make_tuple(to_array(w.samples), w.sample_rate);
  }, py::arg("path"), "Returns (samples, sample_rate) for a 16-bit mono 16 kHz WAV file.");
  m.def("save_audio", [](const std::filesystem::path& p, const Array& x, int sr) {
    save_audio(p, to_waveform(x, sr));
  }, py::arg("path"), py::arg("samples"), py::arg("sample_rate") = kDefaultSampleRate);

  m.def("generate_noise", [](const std::string& kind, std::size_t n, std::uint64_t seed) {
    return to_array(generate_noise(parse_noise_kind(kind), n, kDefaultSampleRate, seed).samples);
  }, py::arg("kind"), py::arg("n"), py::arg("seed"), "Unit-RMS white or pink noise.");
  m.def("mix_at_snr", [](const Array& clean, const Array& noise, double snr_db,
                         std::size_t offset) {
    MixOptions o;
    o.noise_offset = offset;
    return to_array(mix_at_snr(to_waveform(clean, kDefaultSampleRate),
                               to_waveform(noise, kDefaultSampleRate), snr_db, o)
                        .samples);
  }, py::arg("clean"), py::arg("noise"), py::arg("snr_db"), py::arg("noise_offset") = 0);
  m.def("synth_utterance", [](std::uint64_t seed, double f0_min, double f0_max,
                              double duration) {
    SynthCorpusOptions o;
    o.f0_min = f0_min;
    o.f0_max = f0_max;
    o.duration = duration;
    const SynthResult r = synth_utterance(random_synth_spec(o, seed));
    return py::make_tuple(to_array(r.clean.samples), to_array(r.truth.f0));
  }, py::arg("seed"), py::arg("f0_min") = 80.0, py::arg("f0_max") = 300.0,
     py::arg("duration") = 1.5, "Returns (samples, per-frame reference F0).");
  m.def("decode_frame", [](const Array& y, double f0_min, double f0_max, double lambda) {
    const F0Estimate e = decode_frame(to_vector(y), decoder(f0_min, f0_max, lambda),
                                      kDefaultSampleRate);
    return py::make_tuple(e.f0, e.voiced, e.confidence);
  }, py::arg("frame"), py::arg("f0_min") = 50.0, py::arg("f0_max") = 400.0,
     py::arg("lam") = 0.15, "Returns (f0, voiced, confidence); f0 is 0 when unvoiced.");
  m.def("acf_track", [](const Array& x, double f0_min, double f0_max, double lambda) {
    return track_dict(acf_track(to_waveform(x, kDefaultSampleRate),
                                decoder(f0_min, f0_max, lambda)));
  }, py::arg("samples"), py::arg("f0_min") = 50.0, py::arg("f0_max") = 400.0,
     py::arg("lam") = 0.15);
  m.def("yin_track", [](const Array& x, double f0_min, double f0_max, double threshold) {
    YinConfig c;
    c.f0_min = f0_min;
    c.f0_max = f0_max;
    c.yin_threshold = threshold;
    return track_dict(yin_track(to_waveform(x, kDefaultSampleRate), c));
  }, py::arg("samples"), py::arg("f0_min") = 50.0, py::arg("f0_max") = 400.0,
     py::arg("threshold") = 0.1);

  py::class_<RecurrentModel>(m, "Model")
      .def(py::init([](const std::string& cell, const std::vector<std::size_t>& hidden,
                       std::size_t context_radius, bool batch_norm, std::uint64_t seed) {
             Architecture a;
             a.cell = parse_cell_type(cell);
             a.hidden = hidden;
             a.context_radius = context_radius;
             a.batch_norm = batch_norm;
             InitConfig ic;
             ic.seed = seed;
             return init_model(a, ic);
           }),
           py::arg("cell") = "lstm", py::arg("hidden") = std::vector<std::size_t>{64, 64},
           py::arg("context_radius") = 3, py::arg("batch_norm") = true, py::arg("seed") = 0)
      .def_static("load", [](const std::filesystem::path& p) { return load_checkpoint(p); })
      .def("save", [](const RecurrentModel& mdl, const std::filesystem::path& p) {
        save_checkpoint(mdl, p);
      })
      .def_property_readonly("cell", [](const RecurrentModel& mdl) {
        return std::string(to_string(mdl.arch.cell));
      })
      .def_property_readonly("hidden", [](const RecurrentModel& mdl) { return mdl.arch.hidden; })
      .def_property_readonly("context_radius",
                             [](const RecurrentModel& mdl) { return mdl.arch.context_radius; })
      .def_property_readonly("parameter_count",
                             [](const RecurrentModel& mdl) { return mdl.params.count(); })
      .def("track", [](const RecurrentModel& mdl, const Array& x, double f0_min, double f0_max,
                       double lambda) {
        TrackerConfig c;
        c.decoder = decoder(f0_min, f0_max, lambda);
        std::vector<F0Estimate> est;
        {
          py::gil_scoped_release release;
          est = track(to_waveform(x, kDefaultSampleRate), mdl, c);
        }
        return track_dict(est);
      }, py::arg("samples"), py::arg("f0_min") = 50.0, py::arg("f0_max") = 400.0,
         py::arg("lam") = 0.15);

  m.def("score", [](const Array& f0_est, const py::array_t<bool>& voiced, const Array& f0_ref,
                    double gross_threshold_ms, bool unvoiced_is_gross) {
    const auto est_f0 = to_vector(f0_est);
    const auto v = voiced.unchecked<1>();
    if (static_cast<std::size_t>(v.shape(0)) != est_f0.size())
      throw DimensionError("f0 and voiced arrays differ in length");
    std::vector<F0Estimate> est;
    for (std::size_t i = 0; i < est_f0.size(); ++i)
      est.push_back({i, 0.0, est_f0[i], v(static_cast<py::ssize_t>(i)), 0.0});
    GroundTruthF0 truth;
    truth.f0 = to_vector(f0_ref);
    ScoreConfig c;
    c.gross_threshold_ms = gross_threshold_ms;
    c.unvoiced_is_gross = unvoiced_is_gross;
    return report_dict(score(est, truth, c));
  }, py::arg("f0_est"), py::arg("voiced"), py::arg("f0_ref"),
     py::arg("gross_threshold_ms") = 0.625, py::arg("unvoiced_is_gross") = true);

  m.def("expanded_count", &expanded_count, py::arg("utterances"), py::arg("noises"),
        py::arg("snrs"));
}
