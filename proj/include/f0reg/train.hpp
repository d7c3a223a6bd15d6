// f0reg/train.hpp
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

#ifndef F0REG_TRAIN_HPP_
#define F0REG_TRAIN_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "f0reg/neural.hpp"

namespace f0reg {

/// Optimisation settings.  Defaults follow the published configuration
/// (3 x 1024 LSTM, batch 300, 25 % dropout, 15-frame context); learning rate
/// and clipping are engineering defaults.
struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 300;
  double dropout = 0.25;
  std::size_t epochs = 1;
  std::uint64_t seed = 0;
  /// Global gradient-norm clip; 0 disables.
  double clip_norm = 5.0;
  CellType cell = CellType::kLstm;
  std::vector<std::size_t> layer_widths{1024, 1024, 1024};
  std::size_t context_radius = 7;
  bool batch_norm = true;
  double bn_momentum = 0.99;

  void validate() const;
  Architecture architecture(std::size_t frame_len) const;
};

/// Supplies mini-batches.  batch(epoch, index, n) must be a pure function of
/// its arguments so that training is reproducible.
class BatchSource {
 public:
  virtual ~BatchSource() = default;
  virtual std::size_t batches_per_epoch() const = 0;
  virtual SequenceBatch batch(std::size_t epoch, std::size_t index,
                              std::size_t batch_size) = 0;
};

/// Fixed list of prepared batches; batch_size is ignored.
class StaticBatchSource final : public BatchSource {
 public:
  explicit StaticBatchSource(std::vector<SequenceBatch> batches);
  std::size_t batches_per_epoch() const override { return batches_.size(); }
  SequenceBatch batch(std::size_t epoch, std::size_t index, std::size_t) override;

 private:
  std::vector<SequenceBatch> batches_;
};

struct TrainResult {
  std::vector<double> loss_history;  ///< training-mode loss per step
  std::size_t steps = 0;
};

using StepCallback = std::function<void(std::size_t step, double loss)>;

/// Mini-batch gradient descent with dropout, batch normalization and
/// gradient clipping.  Updates `model` in place.  Throws TrainingError on a
/// non-finite loss or gradient, leaving the model at its last finite state.
TrainResult train(RecurrentModel& model, BatchSource& source, const TrainConfig& cfg,
                  const StepCallback& on_step = {});

}  // namespace f0reg

#endif  // F0REG_TRAIN_HPP_
