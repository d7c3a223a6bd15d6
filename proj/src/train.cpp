// f0reg/train.cpp
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

#include "f0reg/train.hpp"

#include <cmath>
#include <string>

#include "f0reg/error.hpp"
#include "f0reg/seed.hpp"

namespace f0reg {

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    throw ConfigError("learning rate must be finite and non-negative");
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  if (clip_norm < 0.0) throw ConfigError("clip norm must be non-negative");
  if (layer_widths.empty()) throw ConfigError("at least one layer is required");
  if (!(bn_momentum >= 0.0 && bn_momentum <= 1.0))
    throw ConfigError("batch-norm momentum must lie in [0, 1]");
}

Architecture TrainConfig::architecture(std::size_t frame_len) const {
  Architecture arch;
  arch.cell = cell;
  arch.frame_len = frame_len;
  arch.hidden = layer_widths;
  arch.context_radius = context_radius;
  arch.batch_norm = batch_norm;
  arch.validate();
  return arch;
}

StaticBatchSource::StaticBatchSource(std::vector<SequenceBatch> batches)
    : batches_(std::move(batches)) {}

SequenceBatch StaticBatchSource::batch(std::size_t, std::size_t index, std::size_t) {
  return batches_.at(index);
}

TrainResult train(RecurrentModel& model, BatchSource& source, const TrainConfig& cfg,
                  const StepCallback& on_step) {
  cfg.validate();
  if (source.batches_per_epoch() == 0) throw EmptyInputError("training set is empty");

  TrainResult result;
  const bool bn = model.arch.batch_norm;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = 0; i < source.batches_per_epoch(); ++i) {
      const SequenceBatch batch = source.batch(epoch, i, cfg.batch_size);
      PassOptions opts;
      opts.batch_statistics = bn;
      opts.dropout = cfg.dropout;
      opts.dropout_seed = derive_seed(cfg.seed, {0xd0, result.steps});
      GradientResult g = backward(model, batch, opts);

      if (!std::isfinite(g.loss) || !g.grad.all_finite())
        throw TrainingError("non-finite loss at step " + std::to_string(result.steps) +
                            " (epoch " + std::to_string(epoch) + ", batch " +
                            std::to_string(i) + ", loss " + std::to_string(g.loss) + ")");

      if (cfg.clip_norm > 0.0) {
        const double norm = std::sqrt(g.grad.squared_norm());
        if (norm > cfg.clip_norm) g.grad.scale(cfg.clip_norm / norm);
      }
      model.params.axpy(-cfg.learning_rate, g.grad);

      if (bn) {
        const double keep = cfg.bn_momentum;
        for (std::size_t l = 0; l < model.running.mean.size(); ++l) {
          model.running.mean[l] = keep * model.running.mean[l] +
                                  (1.0 - keep) * g.batch_stats.mean[l];
          model.running.var[l] = keep * model.running.var[l] +
                                 (1.0 - keep) * g.batch_stats.var[l];
        }
      }

      result.loss_history.push_back(g.loss);
      if (on_step) on_step(result.steps, g.loss);
      ++result.steps;
    }
  }
  return result;
}

}  // namespace f0reg
