// f0reg/neural.hpp
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

#ifndef F0REG_NEURAL_HPP_
#define F0REG_NEURAL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace f0reg {

enum class CellType : std::uint8_t { kPlainRnn = 0, kLstm = 1 };

std::string_view to_string(CellType cell);
/// Accepts "rnn", "plain-rnn" and "lstm".
CellType parse_cell_type(std::string_view name);

/// Network shape.  Input and output width both equal the frame length.
struct Architecture {
  CellType cell = CellType::kLstm;
  std::size_t frame_len = 400;
  std::vector<std::size_t> hidden{1024, 1024, 1024};
  std::size_t context_radius = 7;
  bool batch_norm = true;

  std::size_t steps() const { return 2 * context_radius + 1; }
  /// Pre-activation blocks per unit: 4 for LSTM (input, forget, output,
  /// candidate), 1 for the plain RNN.
  std::size_t gates() const { return cell == CellType::kLstm ? 4 : 1; }
  std::size_t layer_input_dim(std::size_t l) const {
    return l == 0 ? frame_len : hidden[l - 1];
  }
  void validate() const;
  bool operator==(const Architecture&) const = default;
};

/// One recurrent layer.  Column 0 of both matrices is the bias, matching the
/// [1, theta'] augmentation of the layer inputs.  LSTM rows are grouped in
/// gate blocks of `q` rows each.
struct RecurrentLayer {
  Eigen::MatrixXd feedforward;  ///< (gates*q) x (q_prev + 1)
  Eigen::MatrixXd recurrent;    ///< (gates*q) x (q + 1)
  Eigen::VectorXd bn_scale;     ///< empty without batch normalization
  Eigen::VectorXd bn_shift;
};

/// Identity-activated output layer with feedback of its own previous output.
struct OutputLayer {
  Eigen::MatrixXd feedforward;  ///< M x (q_L + 1)
  Eigen::MatrixXd recurrent;    ///< M x (M + 1)
};

/// Trainable parameters.  Gradients use the same type.
struct Parameters {
  std::vector<RecurrentLayer> layers;
  OutputLayer output;

  static Parameters zeros(const Architecture& arch);

  /// Every trainable array in declared order (per layer: W, H, BN scale,
  /// BN shift; then output W, H).  Matrices are column-major.
  std::vector<std::span<double>> blocks();
  std::vector<std::span<const double>> blocks() const;
  std::size_t count() const;
  double squared_norm() const;
  void scale(double factor);
  /// this += factor * other
  void axpy(double factor, const Parameters& other);
  bool all_finite() const;
};

/// Batch-normalization statistics per recurrent layer.
struct NormStats {
  std::vector<Eigen::VectorXd> mean;
  std::vector<Eigen::VectorXd> var;

  static NormStats identity(const Architecture& arch);
};

struct RecurrentModel {
  Architecture arch;
  Parameters params;
  NormStats running;
};

struct InitConfig {
  std::uint64_t seed = 0;
  double recurrent_gain = 1.0;
  double output_recurrent_gain = 0.0;
  double forget_bias = 1.0;
};

/// Fan-in scaled uniform feedforward weights, scaled orthogonal recurrent
/// blocks, LSTM forget-gate bias, unit BN scale.
RecurrentModel init_model(const Architecture& arch, const InitConfig& cfg = {});

/// A batch of equal-length sequences.  Column t*batch + b of `inputs` holds
/// step t of sequence b.
struct SequenceBatch {
  std::size_t batch = 0;
  std::size_t steps = 0;
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd targets;
  std::vector<std::uint8_t> voiced;

  Eigen::Index column(std::size_t step, std::size_t seq) const {
    return static_cast<Eigen::Index>(step * batch + seq);
  }
  /// Appends sequences given as frame_len x steps matrices.
  static SequenceBatch from_sequences(std::span<const Eigen::MatrixXd> inputs,
                                      std::span<const Eigen::MatrixXd> targets);
};

struct PassOptions {
  /// Normalize with batch statistics instead of the running averages.
  bool batch_statistics = false;
  double dropout = 0.0;
  std::uint64_t dropout_seed = 0;
};

/// Output for every step of every sequence, same column layout as the input.
Eigen::MatrixXd forward(const RecurrentModel& model, const Eigen::MatrixXd& inputs,
                        std::size_t batch, const PassOptions& opts = {});

/// Single sequence given as frame_len x steps; returns frame_len x steps.
Eigen::MatrixXd forward(const RecurrentModel& model, const Eigen::MatrixXd& sequence);

/// Mean of squared errors over all steps and samples.
double mse_loss(const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& targets);

struct GradientResult {
  double loss = 0.0;
  Parameters grad;
  /// Batch statistics seen by each layer (empty without batch statistics).
  NormStats batch_stats;
};

/// Loss and its exact gradient by backpropagation through time.
GradientResult backward(const RecurrentModel& model, const SequenceBatch& batch,
                        const PassOptions& opts = {});

/// Loss under exactly the same pass as `backward` (used by gradient checks).
double evaluate_loss(const RecurrentModel& model, const SequenceBatch& batch,
                     const PassOptions& opts = {});

}  // namespace f0reg

#endif  // F0REG_NEURAL_HPP_
