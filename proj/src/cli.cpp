// f0reg/cli.cpp
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

#include "f0reg/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "f0reg/baseline.hpp"
#include "f0reg/checkpoint.hpp"
#include "f0reg/corpus.hpp"
#include "f0reg/data.hpp"
#include "f0reg/error.hpp"
#include "f0reg/eval.hpp"
#include "f0reg/seed.hpp"
#include "f0reg/synth.hpp"
#include "f0reg/tracker.hpp"
#include "f0reg/train.hpp"

namespace f0reg::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Amplitude of the stored noise bank; keeps 16-bit files clear of clipping.
constexpr double kNoiseFileRms = 0.1;

std::string relative_to(const std::string& path, const fs::path& base) {
  const fs::path rel = fs::absolute(path).lexically_normal().lexically_relative(
      fs::absolute(base).lexically_normal());
  return rel.empty() ? fs::absolute(path).string() : rel.generic_string();
}

void require_file(const std::string& path, std::string_view what) {
  if (path.empty()) throw ConfigError(fmt::format("{} is required", what));
  if (!fs::is_regular_file(path))
    throw ConfigError(fmt::format("{} '{}' does not exist", what, path));
}

void require_parent_dir(const fs::path& path) {
  const fs::path parent = fs::absolute(path).parent_path();
  if (!fs::is_directory(parent))
    throw ConfigError(fmt::format("directory '{}' does not exist", parent.string()));
}

std::vector<UtteranceRecord> select_split(const Manifest& m, const std::string& split) {
  if (split == "all") return m.records;
  const Split want = parse_split(split);
  std::vector<UtteranceRecord> out;
  std::copy_if(m.records.begin(), m.records.end(), std::back_inserter(out),
               [&](const UtteranceRecord& r) { return r.split == want; });
  return out;
}

std::string estimate_name(const std::string& audio) {
  return fs::path(audio).stem().string() + ".f0";
}

// name=path pairs for noise files.
std::vector<std::pair<std::string, std::string>> parse_noise_specs(
    const std::vector<std::string>& specs) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& s : specs) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size())
      throw ConfigError(fmt::format("noise '{}' is not of the form name=path", s));
    out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  return out;
}

// Runs `fn(i)` for i in [0, n) on up to `jobs` threads.  The first failure in
// index order is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t count = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string out_dir;
  std::size_t count = 100;
  std::uint64_t seed = 0;
  double f0_min = 80.0;
  double f0_max = 300.0;
  double duration = 1.5;
  double noise_seconds = 20.0;
  double test_fraction = 0.2;
  double cv_fraction = 0.0;
  std::string speaker = "synth";
};

void add_synth(CLI::App& app, SynthArgs& a) {
  app.add_option("-o,--out", a.out_dir, "Output directory")->required();
  app.add_option("-n,--count", a.count, "Number of utterances")->capture_default_str();
  app.add_option("--seed", a.seed, "Random seed")->capture_default_str();
  app.add_option("--f0-min", a.f0_min, "Lowest base F0 in Hz")->capture_default_str();
  app.add_option("--f0-max", a.f0_max, "Highest base F0 in Hz")->capture_default_str();
  app.add_option("--duration", a.duration, "Utterance length in seconds")
      ->capture_default_str();
  app.add_option("--noise-seconds", a.noise_seconds, "Length of each noise file")
      ->capture_default_str();
  app.add_option("--test-fraction", a.test_fraction, "Share of utterances in the test split")
      ->capture_default_str();
  app.add_option("--cv-fraction", a.cv_fraction, "Share of utterances in the cv split")
      ->capture_default_str();
  app.add_option("--speaker", a.speaker, "Speaker label")->capture_default_str();
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const double nyquist = kDefaultSampleRate / 2.0;
  if (!(a.f0_min > 0.0 && a.f0_min < a.f0_max && a.f0_max < nyquist))
    throw ConfigError(fmt::format("invalid F0 range [{}, {}] Hz", a.f0_min, a.f0_max));
  if (a.count == 0) throw ConfigError("--count must be positive");
  if (!(a.duration > 0.0) || !(a.noise_seconds > 0.0))
    throw ConfigError("durations must be positive");
  if (!(a.test_fraction >= 0.0 && a.cv_fraction >= 0.0 &&
        a.test_fraction + a.cv_fraction <= 1.0))
    throw ConfigError("split fractions must be non-negative and sum to at most 1");

  SynthCorpusOptions opts;
  opts.f0_min = a.f0_min;
  opts.f0_max = a.f0_max;
  opts.duration = a.duration;

  const fs::path root(a.out_dir);
  fs::create_directories(root / "audio");
  fs::create_directories(root / "truth");
  fs::create_directories(root / "noise");

  const auto n_test = static_cast<std::size_t>(std::llround(a.test_fraction * a.count));
  const auto n_cv = static_cast<std::size_t>(std::llround(a.cv_fraction * a.count));
  Manifest m;
  m.seed = a.seed;
  for (std::size_t i = 0; i < a.count; ++i) {
    const SynthResult r = synth_utterance(random_synth_spec(opts, derive_seed(a.seed, {i})));
    const std::string name = fmt::format("utt{:05d}", i);
    UtteranceRecord rec;
    rec.audio = "audio/" + name + ".wav";
    rec.truth = "truth/" + name + ".f0";
    rec.speaker = a.speaker;
    rec.split = i + n_test >= a.count            ? Split::kTest
                : i + n_test + n_cv >= a.count ? Split::kCv
                                               : Split::kTrain;
    save_audio(root / rec.audio, r.clean);
    save_ground_truth(root / rec.truth, r.truth);
    m.records.push_back(std::move(rec));
  }

  const auto noise_len = static_cast<std::size_t>(a.noise_seconds * kDefaultSampleRate);
  const NoiseKind kinds[] = {NoiseKind::kWhite, NoiseKind::kPink};
  for (std::size_t k = 0; k < 2; ++k) {
    Waveform noise =
        generate_noise(kinds[k], noise_len, kDefaultSampleRate, derive_seed(a.seed, {0x6e, k}));
    for (double& s : noise.samples) s *= kNoiseFileRms;
    save_audio(root / "noise" / fmt::format("{}.wav", to_string(kinds[k])), noise);
  }
  save_manifest(root / "manifest.tsv", m);
  out << fmt::format("wrote {} utterances to {}\n", a.count, (root / "manifest.tsv").string());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// mix

struct MixArgs {
  std::string manifest;
  std::string out_dir;
  std::vector<std::string> noises;
  std::vector<double> snrs{-5.0, 0.0, 5.0, 10.0};
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

void add_mix(CLI::App& app, MixArgs& a) {
  app.add_option("-m,--manifest", a.manifest, "Manifest of clean utterances")->required();
  app.add_option("-o,--out", a.out_dir, "Output directory")->required();
  app.add_option("--noise", a.noises, "Noise file as name=path (repeatable)")->required();
  app.add_option("--snr", a.snrs, "SNRs in dB")->delimiter(',')->capture_default_str();
  app.add_option("--seed", a.seed, "Random seed for noise offsets")->capture_default_str();
  app.add_option("-j,--jobs", a.jobs, "Parallel workers")->capture_default_str();
}

int cmd_mix(const MixArgs& a, std::ostream& out) {
  require_file(a.manifest, "manifest");
  const auto specs = parse_noise_specs(a.noises);
  for (const auto& [name, path] : specs) require_file(path, "noise file");
  if (a.snrs.empty()) throw ConfigError("at least one SNR is required");

  const Manifest in = load_manifest(a.manifest);
  std::vector<UtteranceRecord> clean;
  std::copy_if(in.records.begin(), in.records.end(), std::back_inserter(clean),
               [](const UtteranceRecord& r) { return !r.snr_db; });
  if (clean.empty()) throw ConfigError("manifest has no clean records");

  std::vector<Waveform> noise_audio;
  std::vector<NoiseSource> sources;
  for (const auto& [name, path] : specs) {
    noise_audio.push_back(load_audio(path));
    sources.push_back({name, path, noise_audio.back().size()});
  }

  const fs::path root(a.out_dir);
  fs::create_directories(root / "audio");
  Manifest m = build_noisy_set(clean, sources, a.snrs, a.seed, root / "audio");

  std::vector<std::size_t> mixed;
  for (std::size_t i = 0; i < m.records.size(); ++i)
    if (m.records[i].snr_db) mixed.push_back(i);
  parallel_for(mixed.size(), a.jobs, [&](std::size_t j) {
    const UtteranceRecord& r = m.records[mixed[j]];
    const auto k = static_cast<std::size_t>(
        std::find_if(sources.begin(), sources.end(),
                     [&](const NoiseSource& s) { return s.name == r.noise; }) -
        sources.begin());
    render_mixture(r, noise_audio.at(k));
  });

  for (UtteranceRecord& r : m.records) {
    r.audio = relative_to(r.audio, root);
    r.truth = relative_to(r.truth, root);
    if (!r.reference.empty()) r.reference = relative_to(r.reference, root);
  }
  save_manifest(root / "manifest.tsv", m);
  out << fmt::format("wrote {} records ({} mixtures) to {}\n", m.records.size(), mixed.size(),
                     (root / "manifest.tsv").string());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainFlags {
  std::string manifest;
  std::string output;
  std::string config;
  std::string loss_log;
  bool dry_run = false;
  std::optional<double> learning_rate;
  std::optional<std::size_t> batch_size;
  std::optional<double> dropout;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> steps_per_epoch;
  std::optional<std::uint64_t> seed;
  std::optional<double> clip_norm;
  std::optional<std::string> cell;
  std::vector<std::size_t> layers;
  std::optional<std::size_t> context_radius;
  std::optional<bool> batch_norm;
  std::optional<double> bn_momentum;
  std::optional<std::string> normalization;
  std::optional<std::string> split;
  std::vector<std::string> noises;
  std::vector<double> snrs;
  std::optional<bool> include_clean;
  std::optional<double> output_recurrent_gain;
  std::optional<std::size_t> log_every;
};

json train_defaults() {
  const TrainConfig d;
  const InitConfig init;
  json j;
  j["learning_rate"] = d.learning_rate;
  j["batch_size"] = d.batch_size;
  j["dropout"] = d.dropout;
  j["epochs"] = d.epochs;
  j["steps_per_epoch"] = 0;
  j["seed"] = d.seed;
  j["clip_norm"] = d.clip_norm;
  j["cell"] = to_string(d.cell);
  j["layers"] = d.layer_widths;
  j["context_radius"] = d.context_radius;
  j["batch_norm"] = d.batch_norm;
  j["bn_momentum"] = d.bn_momentum;
  j["normalization"] = to_string(InputNormalization::kWindowRms);
  j["split"] = "train";
  j["noise"] = json::array();
  j["snr_db"] = json::array();
  j["include_clean"] = true;
  j["output_recurrent_gain"] = init.output_recurrent_gain;
  j["log_every"] = 0;
  return j;
}

void add_train(CLI::App& app, TrainFlags& f) {
  app.add_option("-m,--manifest", f.manifest, "Training manifest");
  app.add_option("-o,--out", f.output, "Checkpoint to write");
  app.add_option("-c,--config", f.config, "JSON config file");
  app.add_option("--loss-log", f.loss_log, "Loss log path (default: <out>.loss.tsv)");
  app.add_flag("--dry-run", f.dry_run, "Print the resolved config and exit");
  app.add_option("--lr,--learning-rate", f.learning_rate, "Learning rate");
  app.add_option("--batch-size", f.batch_size, "Sequences per mini-batch");
  app.add_option("--dropout", f.dropout, "Dropout probability");
  app.add_option("--epochs", f.epochs, "Epochs");
  app.add_option("--steps-per-epoch", f.steps_per_epoch,
                 "Mini-batches per epoch (0: frames / batch size)");
  app.add_option("--seed", f.seed, "Random seed");
  app.add_option("--clip-norm", f.clip_norm, "Gradient-norm clip (0 disables)");
  app.add_option("--cell", f.cell, "lstm or rnn");
  app.add_option("--layers", f.layers, "Hidden layer widths")->delimiter(',');
  app.add_option("--context-radius", f.context_radius, "Neighbouring frames on each side");
  app.add_option("--batch-norm", f.batch_norm, "Batch normalization (true/false)");
  app.add_option("--bn-momentum", f.bn_momentum, "Running-statistics momentum");
  app.add_option("--normalization", f.normalization, "Input scaling: none, frame, window");
  app.add_option("--split", f.split, "Manifest split to train on (or 'all')");
  app.add_option("--noise", f.noises, "On-the-fly noise as name=path (repeatable)");
  app.add_option("--snr", f.snrs, "On-the-fly SNRs in dB")->delimiter(',');
  app.add_option("--include-clean", f.include_clean, "Also train on clean input");
  app.add_option("--output-recurrent-gain", f.output_recurrent_gain,
                 "Init scale of the output feedback weights");
  app.add_option("--log-every", f.log_every, "Progress interval in steps (0: silent)");
}

json resolve_train_config(const TrainFlags& f) {
  json j = train_defaults();
  if (!f.config.empty()) {
    require_file(f.config, "config file");
    std::ifstream is(f.config);
    json file;
    try {
      file = json::parse(is);
    } catch (const json::exception& e) {
      throw ConfigError(fmt::format("{}: {}", f.config, e.what()));
    }
    if (!file.is_object()) throw ConfigError(f.config + ": expected a JSON object");
    for (const auto& [key, value] : file.items()) {
      if (!j.contains(key)) throw ConfigError(fmt::format("{}: unknown key '{}'", f.config, key));
      j[key] = value;
    }
  }
  auto set = [&](const char* key, const auto& opt) {
    if (opt) j[key] = *opt;
  };
  set("learning_rate", f.learning_rate);
  set("batch_size", f.batch_size);
  set("dropout", f.dropout);
  set("epochs", f.epochs);
  set("steps_per_epoch", f.steps_per_epoch);
  set("seed", f.seed);
  set("clip_norm", f.clip_norm);
  set("cell", f.cell);
  if (!f.layers.empty()) j["layers"] = f.layers;
  set("context_radius", f.context_radius);
  set("batch_norm", f.batch_norm);
  set("bn_momentum", f.bn_momentum);
  set("normalization", f.normalization);
  set("split", f.split);
  if (!f.noises.empty()) j["noise"] = f.noises;
  if (!f.snrs.empty()) j["snr_db"] = f.snrs;
  set("include_clean", f.include_clean);
  set("output_recurrent_gain", f.output_recurrent_gain);
  set("log_every", f.log_every);
  return j;
}

struct ResolvedTrain {
  TrainConfig cfg;
  InitConfig init;
  WindowConfig window;
  std::size_t steps_per_epoch = 0;
  std::string split;
  std::vector<std::pair<std::string, std::string>> noises;
  std::vector<double> snrs;
  bool include_clean = true;
  std::size_t log_every = 0;
};

ResolvedTrain to_train_config(const json& j) {
  ResolvedTrain r;
  try {
    r.cfg.learning_rate = j.at("learning_rate").get<double>();
    r.cfg.batch_size = j.at("batch_size").get<std::size_t>();
    r.cfg.dropout = j.at("dropout").get<double>();
    r.cfg.epochs = j.at("epochs").get<std::size_t>();
    r.cfg.seed = j.at("seed").get<std::uint64_t>();
    r.cfg.clip_norm = j.at("clip_norm").get<double>();
    r.cfg.cell = parse_cell_type(j.at("cell").get<std::string>());
    r.cfg.layer_widths = j.at("layers").get<std::vector<std::size_t>>();
    r.cfg.context_radius = j.at("context_radius").get<std::size_t>();
    r.cfg.batch_norm = j.at("batch_norm").get<bool>();
    r.cfg.bn_momentum = j.at("bn_momentum").get<double>();
    r.window.context_radius = r.cfg.context_radius;
    r.window.normalization =
        parse_input_normalization(j.at("normalization").get<std::string>());
    r.steps_per_epoch = j.at("steps_per_epoch").get<std::size_t>();
    r.split = j.at("split").get<std::string>();
    r.noises = parse_noise_specs(j.at("noise").get<std::vector<std::string>>());
    r.snrs = j.at("snr_db").get<std::vector<double>>();
    r.include_clean = j.at("include_clean").get<bool>();
    r.init.output_recurrent_gain = j.at("output_recurrent_gain").get<double>();
    r.log_every = j.at("log_every").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("bad config value: {}", e.what()));
  }
  r.cfg.validate();
  r.cfg.architecture(FramingConfig{}.frame_len).validate();
  if (r.split != "all") parse_split(r.split);
  if (r.noises.empty() != r.snrs.empty())
    throw ConfigError("on-the-fly noise needs both noise files and SNRs");
  r.init.seed = derive_seed(r.cfg.seed, {1});
  return r;
}

int cmd_train(const TrainFlags& f, std::ostream& out, std::ostream& err) {
  const json resolved = resolve_train_config(f);
  ResolvedTrain r = to_train_config(resolved);
  if (f.dry_run) {
    out << resolved.dump(2) << '\n';
    return kExitOk;
  }
  require_file(f.manifest, "manifest");
  if (f.output.empty()) throw ConfigError("--out is required");
  require_parent_dir(f.output);
  for (const auto& [name, path] : r.noises) require_file(path, "noise file");
  const std::string loss_path = f.loss_log.empty() ? f.output + ".loss.tsv" : f.loss_log;
  require_parent_dir(loss_path);

  const FramingConfig framing;
  const Manifest m = load_manifest(f.manifest);
  const std::vector<UtteranceRecord> records = select_split(m, r.split);
  if (records.empty()) throw ConfigError(fmt::format("no records in split '{}'", r.split));

  std::vector<TrainingUtterance> utts;
  std::size_t total_frames = 0;
  for (const UtteranceRecord& rec : records) {
    TrainingUtterance u;
    u.input = load_audio(rec.audio);
    if (!rec.reference.empty()) u.reference = load_audio(rec.reference);
    u.truth = load_ground_truth(rec.truth, framing);
    const std::size_t frames = framing.frame_count(u.input.size());
    try {
      reconcile_frame_counts(frames, u.truth.size());
    } catch (const AlignmentError& e) {
      throw AlignmentError(fmt::format("{}: {}", rec.audio, e.what()));
    }
    u.truth.f0.resize(frames, 0.0);
    total_frames += frames;
    utts.push_back(std::move(u));
  }

  std::optional<NoiseAugmentation> aug;
  if (!r.noises.empty()) {
    aug.emplace();
    for (const auto& [name, path] : r.noises) aug->bank.push_back(load_audio(path));
    aug->snrs_db = r.snrs;
    aug->include_clean = r.include_clean;
  }
  const std::size_t steps =
      r.steps_per_epoch > 0 ? r.steps_per_epoch
                            : std::max<std::size_t>(1, (total_frames + r.cfg.batch_size - 1) /
                                                           r.cfg.batch_size);
  WindowBatchSource source(std::move(utts), framing, r.window, derive_seed(r.cfg.seed, {2}),
                           steps, std::move(aug));

  RecurrentModel model = init_model(r.cfg.architecture(framing.frame_len), r.init);
  std::ofstream log(loss_path, std::ios::trunc);
  if (!log) throw IngestError(fmt::format("cannot write {}", loss_path));
  log << "step\tloss\n";
  const TrainResult result = train(model, source, r.cfg, [&](std::size_t step, double loss) {
    log << fmt::format("{}\t{:.9g}\n", step + 1, loss);
    if (r.log_every > 0 && (step + 1) % r.log_every == 0)
      err << fmt::format("step {} loss {:.6f}\n", step + 1, loss);
  });
  log.close();
  save_checkpoint(model, f.output);
  const auto& h = result.loss_history;
  out << fmt::format("trained {} steps; loss {:.6f} -> {:.6f}; wrote {}\n", result.steps,
                     h.empty() ? 0.0 : h.front(), h.empty() ? 0.0 : h.back(), f.output);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// track

struct TrackArgs {
  std::string checkpoint;
  std::string audio;
  std::string output;
  std::string manifest;
  std::string out_dir;
  std::string baseline;
  std::string method;
  std::string split = "all";
  std::size_t jobs = 1;
  DecoderConfig decoder;
  std::string interpolation = "none";
  std::string normalization = "window";
  double yin_threshold = YinConfig{}.yin_threshold;
};

void add_track(CLI::App& app, TrackArgs& a) {
  app.add_option("-k,--checkpoint", a.checkpoint, "Trained model");
  app.add_option("-a,--audio", a.audio, "Single input WAV file");
  app.add_option("-o,--output", a.output, "Output file for --audio (default: <audio>.f0)");
  app.add_option("-m,--manifest", a.manifest, "Manifest of utterances to track");
  app.add_option("-d,--out-dir", a.out_dir, "Output directory for --manifest");
  app.add_option("--baseline", a.baseline, "Use a DSP baseline instead of the model")
      ->check(CLI::IsMember({"yin", "acf"}));
  app.add_option("--method", a.method, "Method label written to outputs");
  app.add_option("--split", a.split, "Manifest split to track (or 'all')")
      ->capture_default_str();
  app.add_option("-j,--jobs", a.jobs, "Parallel workers")->capture_default_str();
  app.add_option("--f0-min", a.decoder.f0_min, "Lowest F0 in Hz")->capture_default_str();
  app.add_option("--f0-max", a.decoder.f0_max, "Highest F0 in Hz")->capture_default_str();
  app.add_option("--lambda", a.decoder.lambda, "Voicing threshold")->capture_default_str();
  app.add_option("--octave-cost", a.decoder.octave_cost, "Penalty per octave of lag")
      ->capture_default_str();
  app.add_option("--interpolation", a.interpolation, "none or parabolic")
      ->check(CLI::IsMember({"none", "parabolic"}))
      ->capture_default_str();
  app.add_option("--normalization", a.normalization, "Input scaling: none, frame, window")
      ->capture_default_str();
  app.add_option("--yin-threshold", a.yin_threshold, "YIN absolute threshold")
      ->capture_default_str();
}

void write_estimate_file(const fs::path& path, const std::string& method,
                         const std::vector<F0Estimate>& est) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IngestError(fmt::format("cannot write {}", path.string()));
  os << "# method " << method << '\n';
  write_estimates(os, est);
}

int cmd_track(TrackArgs a, std::ostream& out) {
  if (a.audio.empty() == a.manifest.empty())
    throw ConfigError("give exactly one of --audio and --manifest");
  a.decoder.interpolation =
      a.interpolation == "parabolic" ? LagInterpolation::kParabolic : LagInterpolation::kNone;
  const FramingConfig framing;
  a.decoder.validate(kDefaultSampleRate, framing.frame_len);
  TrackerConfig tc;
  tc.decoder = a.decoder;
  tc.normalization = parse_input_normalization(a.normalization);
  YinConfig yc;
  yc.f0_min = a.decoder.f0_min;
  yc.f0_max = a.decoder.f0_max;
  yc.yin_threshold = a.yin_threshold;
  if (a.baseline == "yin") yc.validate(kDefaultSampleRate);

  std::optional<RecurrentModel> model;
  if (a.baseline.empty()) {
    require_file(a.checkpoint, "checkpoint");
  }
  std::vector<UtteranceRecord> records;
  fs::path out_dir;
  if (!a.manifest.empty()) {
    require_file(a.manifest, "manifest");
    if (a.out_dir.empty()) throw ConfigError("--out-dir is required with --manifest");
    records = select_split(load_manifest(a.manifest), a.split);
    std::map<std::string, std::string> seen;
    for (const UtteranceRecord& r : records) {
      const auto [it, fresh] = seen.emplace(estimate_name(r.audio), r.audio);
      if (!fresh)
        throw ConfigError(fmt::format("{} and {} map to the same output name", it->second,
                                      r.audio));
    }
    out_dir = a.out_dir;
    fs::create_directories(out_dir);
  } else {
    require_file(a.audio, "audio file");
    UtteranceRecord r;
    r.audio = a.audio;
    records.push_back(r);
    if (a.output.empty()) a.output = fs::path(a.audio).replace_extension(".f0").string();
    require_parent_dir(a.output);
  }
  if (a.baseline.empty()) model = load_checkpoint(a.checkpoint);
  const std::string method =
      !a.method.empty() ? a.method
                        : (a.baseline.empty() ? std::string(to_string(model->arch.cell))
                                              : a.baseline);

  parallel_for(records.size(), a.jobs, [&](std::size_t i) {
    const Waveform w = load_audio(records[i].audio);
    std::vector<F0Estimate> est;
    if (a.baseline == "yin") est = yin_track(w, yc);
    else if (a.baseline == "acf") est = acf_track(w, a.decoder, framing);
    else est = track(w, *model, tc);
    const fs::path dest = a.manifest.empty() ? fs::path(a.output)
                                             : out_dir / estimate_name(records[i].audio);
    write_estimate_file(dest, method, est);
  });
  out << fmt::format("tracked {} file(s) with {}\n", records.size(), method);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string estimates;
  std::string manifest;
  std::string group_by = "noise,snr";
  std::string method;
  std::string prefix;
  std::string split = "all";
  double gross_threshold_ms = ScoreConfig{}.gross_threshold_ms;
  bool exclude_voicing_misses = false;
  std::size_t tolerance = 2;
  std::size_t trim_head = 0;
  std::size_t trim_tail = 0;
};

void add_eval(CLI::App& app, EvalArgs& a) {
  app.add_option("-e,--estimates", a.estimates, "Directory of .f0 estimate files")
      ->required();
  app.add_option("-m,--manifest", a.manifest, "Manifest with reference F0")->required();
  app.add_option("-g,--group-by", a.group_by, "Comma list of method, noise, snr (or none)")
      ->capture_default_str();
  app.add_option("--method", a.method, "Override the method label");
  app.add_option("-o,--out", a.prefix,
                 "Write <prefix>.tsv, <prefix>.scatter.tsv and <prefix>.jsonl");
  app.add_option("--split", a.split, "Manifest split to score (or 'all')")
      ->capture_default_str();
  app.add_option("--gross-threshold-ms", a.gross_threshold_ms, "Gross error bound")
      ->capture_default_str();
  app.add_flag("--exclude-voicing-misses", a.exclude_voicing_misses,
               "Leave voiced frames estimated unvoiced out of GPE");
  app.add_option("--frame-tolerance", a.tolerance, "Allowed frame-count mismatch")
      ->capture_default_str();
  app.add_option("--trim-head", a.trim_head, "Frames dropped at the start")
      ->capture_default_str();
  app.add_option("--trim-tail", a.trim_tail, "Frames dropped at the end")
      ->capture_default_str();
}

std::string read_method_header(const fs::path& path) {
  std::ifstream is(path);
  std::string line;
  if (std::getline(is, line) && line.rfind("# method ", 0) == 0) return line.substr(9);
  return "-";
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  require_file(a.manifest, "manifest");
  if (!fs::is_directory(a.estimates))
    throw ConfigError(fmt::format("estimates directory '{}' does not exist", a.estimates));
  const unsigned mask = parse_group_keys(a.group_by);
  if (!(a.gross_threshold_ms > 0.0)) throw ConfigError("gross threshold must be positive");
  if (!a.prefix.empty()) require_parent_dir(a.prefix + ".tsv");
  ScoreConfig sc;
  sc.gross_threshold_ms = a.gross_threshold_ms;
  sc.unvoiced_is_gross = !a.exclude_voicing_misses;

  const FramingConfig framing;
  const std::vector<UtteranceRecord> records = select_split(load_manifest(a.manifest), a.split);
  std::vector<EvalReport> reports;
  std::size_t failures = 0;
  for (const UtteranceRecord& r : records) {
    const fs::path path = fs::path(a.estimates) / estimate_name(r.audio);
    try {
      if (!fs::is_regular_file(path))
        throw AlignmentError(fmt::format("missing estimates {}", path.string()));
      std::ifstream is(path);
      std::vector<F0Estimate> est = read_estimates(is);
      GroundTruthF0 truth = load_ground_truth(r.truth, framing);
      const std::size_t n = reconcile_frame_counts(est.size(), truth.size(), a.tolerance);
      if (est.size() != truth.size())
        err << fmt::format("warning: {}: {} estimated vs {} reference frames, truncated to {}\n",
                           r.audio, est.size(), truth.size(), n);
      est.resize(n);
      truth.f0.resize(n);
      if (a.trim_head + a.trim_tail > 0) {
        auto kept = trim_edges(truth, a.trim_head, a.trim_tail);
        if (!kept) {
          err << fmt::format("warning: {}: shorter than the trimmed edges, skipped\n", r.audio);
          continue;
        }
        truth = std::move(*kept);
        est = std::vector<F0Estimate>(est.begin() + static_cast<std::ptrdiff_t>(a.trim_head),
                                      est.end() - static_cast<std::ptrdiff_t>(a.trim_tail));
      }
      EvalReport rep = score(est, truth, sc);
      rep.method = a.method.empty() ? read_method_header(path) : a.method;
      rep.noise = r.noise;
      rep.snr = r.snr_label();
      reports.push_back(std::move(rep));
    } catch (const AlignmentError& e) {
      err << fmt::format("alignment failure: {}: {}\n", r.audio, e.what());
      ++failures;
    }
  }
  if (reports.empty()) throw AlignmentError("no utterance could be scored");

  const std::vector<EvalReport> rows = aggregate(reports, mask);
  write_report_table(out, rows);
  if (!a.prefix.empty()) {
    std::ofstream table(a.prefix + ".tsv", std::ios::trunc);
    write_report_table(table, rows);
    std::ofstream scatter(a.prefix + ".scatter.tsv", std::ios::trunc);
    write_scatter(scatter, rows);
    std::ofstream records_out(a.prefix + ".jsonl", std::ios::trunc);
    write_report_records(records_out, rows);
    if (!table || !scatter || !records_out)
      throw IngestError(fmt::format("cannot write outputs under {}", a.prefix));
  }
  if (failures > 0) {
    err << fmt::format("{} of {} utterances failed alignment\n", failures, records.size());
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noise-robust F0 tracking by waveform-to-sinusoid regression", "f0reg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "f0reg 0.1.0");

  SynthArgs synth_args;
  MixArgs mix_args;
  TrainFlags train_flags;
  TrackArgs track_args;
  EvalArgs eval_args;
  add_synth(*app.add_subcommand("synth", "Generate a synthetic harmonic corpus"), synth_args);
  add_mix(*app.add_subcommand("mix", "Mix clean utterances with noise at given SNRs"),
          mix_args);
  add_train(*app.add_subcommand("train", "Train a recurrent model"), train_flags);
  add_track(*app.add_subcommand("track", "Estimate F0 for audio files"), track_args);
  add_eval(*app.add_subcommand("eval", "Score estimates against reference F0"), eval_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (app.got_subcommand("synth")) return cmd_synth(synth_args, out);
    if (app.got_subcommand("mix")) return cmd_mix(mix_args, out);
    if (app.got_subcommand("train")) return cmd_train(train_flags, out, err);
    if (app.got_subcommand("track")) return cmd_track(track_args, out);
    if (app.got_subcommand("eval")) return cmd_eval(eval_args, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}

int main(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace f0reg::cli
