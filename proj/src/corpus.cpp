// f0reg/corpus.cpp
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

#include "f0reg/corpus.hpp"

#include <algorithm>
#include <random>

#include <fmt/format.h>

#include "f0reg/error.hpp"
#include "f0reg/seed.hpp"

namespace f0reg {

WindowBatchSource::WindowBatchSource(std::vector<TrainingUtterance> utterances,
                                     FramingConfig framing, WindowConfig window,
                                     std::uint64_t seed, std::size_t batches_per_epoch,
                                     std::optional<NoiseAugmentation> augmentation)
    : framing_(framing),
      window_(window),
      seed_(seed),
      batches_per_epoch_(batches_per_epoch),
      augmentation_(std::move(augmentation)) {
  if (utterances.empty()) throw EmptyInputError("no training utterances");
  if (augmentation_ && augmentation_->condition_count() == 0)
    throw ConfigError("noise augmentation has no conditions");
  for (TrainingUtterance& u : utterances) {
    Prepared p{std::move(u), {}, std::nullopt};
    p.input = frame_signal(p.utt.input, framing_);
    if (p.utt.reference) {
      if (p.utt.reference->size() != p.utt.input.size())
        throw DimensionError("reference and input lengths differ");
      p.reference = frame_signal(*p.utt.reference, framing_);
    }
    if (p.utt.truth.size() != p.input.size())
      throw DimensionError(fmt::format("truth has {} frames, audio has {}",
                                       p.utt.truth.size(), p.input.size()));
    frame_offsets_.push_back(total_frames_);
    total_frames_ += p.input.size();
    data_.push_back(std::move(p));
  }
}

SequenceBatch WindowBatchSource::batch(std::size_t epoch, std::size_t index,
                                       std::size_t batch_size) {
  std::mt19937_64 rng(derive_seed(seed_, {epoch, index}));
  std::vector<Eigen::MatrixXd> inputs, targets;
  std::vector<std::uint8_t> voiced;
  inputs.reserve(batch_size);
  targets.reserve(batch_size);

  for (std::size_t k = 0; k < batch_size; ++k) {
    const std::size_t global = std::uniform_int_distribution<std::size_t>(0, total_frames_ - 1)(rng);
    const auto it = std::upper_bound(frame_offsets_.begin(), frame_offsets_.end(), global) - 1;
    const auto u = static_cast<std::size_t>(it - frame_offsets_.begin());
    const std::size_t center = global - *it;
    const Prepared& p = data_[u];

    TrainingSequence seq;
    const std::size_t condition =
        augmentation_ ? std::uniform_int_distribution<std::size_t>(
                            0, augmentation_->condition_count() - 1)(rng)
                      : 0;
    if (augmentation_ && !(augmentation_->include_clean && condition == 0)) {
      const std::size_t c = condition - (augmentation_->include_clean ? 1 : 0);
      const Waveform& noise = augmentation_->bank[c / augmentation_->snrs_db.size()];
      const double snr = augmentation_->snrs_db[c % augmentation_->snrs_db.size()];
      MixOptions mix;
      mix.noise_offset = std::uniform_int_distribution<std::size_t>(0, noise.size() - 1)(rng);
      const FrameSequence noisy = frame_signal(mix_at_snr(p.utt.input, noise, snr, mix), framing_);
      seq = build_sequence(noisy, &p.input, p.utt.truth, center, window_);
    } else {
      seq = build_sequence(p.input, p.reference ? &*p.reference : nullptr, p.utt.truth,
                           center, window_);
    }
    inputs.push_back(std::move(seq.inputs));
    targets.push_back(std::move(seq.targets));
    voiced.insert(voiced.end(), seq.voiced.begin(), seq.voiced.end());
  }

  SequenceBatch batch = SequenceBatch::from_sequences(inputs, targets);
  batch.voiced.assign(batch.batch * batch.steps, 0);
  for (std::size_t s = 0; s < batch.batch; ++s)
    for (std::size_t t = 0; t < batch.steps; ++t)
      batch.voiced[static_cast<std::size_t>(batch.column(t, s))] = voiced[s * batch.steps + t];
  return batch;
}

}  // namespace f0reg
