// f0reg/corpus.hpp
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

#ifndef F0REG_CORPUS_HPP_
#define F0REG_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "f0reg/signal.hpp"
#include "f0reg/targets.hpp"
#include "f0reg/train.hpp"

namespace f0reg {

/// Network input, optional clean reference for phase alignment, and truth.
struct TrainingUtterance {
  Waveform input;
  std::optional<Waveform> reference;
  GroundTruthF0 truth;
};

/// On-the-fly noise mixing: each sampled window draws one condition out of
/// {clean (if enabled)} + bank x snrs and a random noise offset.  The clean
/// utterance becomes the phase reference.
struct NoiseAugmentation {
  std::vector<Waveform> bank;
  std::vector<double> snrs_db;
  bool include_clean = true;

  std::size_t condition_count() const {
    return bank.size() * snrs_db.size() + (include_clean ? 1 : 0);
  }
};

/// Samples context windows uniformly over all frames of all utterances.
class WindowBatchSource final : public BatchSource {
 public:
  WindowBatchSource(std::vector<TrainingUtterance> utterances, FramingConfig framing,
                    WindowConfig window, std::uint64_t seed,
                    std::size_t batches_per_epoch,
                    std::optional<NoiseAugmentation> augmentation = std::nullopt);

  std::size_t batches_per_epoch() const override { return batches_per_epoch_; }
  SequenceBatch batch(std::size_t epoch, std::size_t index, std::size_t batch_size) override;

  std::size_t total_frames() const { return total_frames_; }

 private:
  struct Prepared {
    TrainingUtterance utt;
    FrameSequence input;
    std::optional<FrameSequence> reference;
  };

  std::vector<Prepared> data_;
  std::vector<std::size_t> frame_offsets_;  // cumulative frame counts
  std::size_t total_frames_ = 0;
  FramingConfig framing_;
  WindowConfig window_;
  std::uint64_t seed_;
  std::size_t batches_per_epoch_;
  std::optional<NoiseAugmentation> augmentation_;
};

}  // namespace f0reg

#endif  // F0REG_CORPUS_HPP_
