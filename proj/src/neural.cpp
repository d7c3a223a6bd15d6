// f0reg/neural.cpp
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

#include "f0reg/neural.hpp"

#include <cmath>
#include <random>
#include <string>

#include "f0reg/error.hpp"

namespace f0reg {

namespace {

constexpr double kBnEpsilon = 1e-5;

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Index idx(std::size_t v) { return static_cast<Index>(v); }

std::span<double> span_of(MatrixXd& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
std::span<double> span_of(VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

MatrixXd sigmoid(const MatrixXd& z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

// Random orthogonal n x n matrix.
MatrixXd orthogonal(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXd g(idx(n), idx(n));
  for (Index j = 0; j < g.cols(); ++j)
    for (Index i = 0; i < g.rows(); ++i) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ();
  const MatrixXd& r = qr.matrixQR();
  for (Index j = 0; j < q.cols(); ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

void fill_uniform(MatrixXd& m, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) m(i, j) = dist(rng);
}

// y = W[:,1:] x + W[:,0], column-wise.
MatrixXd affine(const MatrixXd& w, const MatrixXd& x) {
  MatrixXd out = w.rightCols(w.cols() - 1) * x;
  out.colwise() += w.col(0);
  return out;
}

struct LayerCache {
  MatrixXd input;       // after dropout
  MatrixXd mask;        // dropout mask on `input`; empty if none
  MatrixXd normalized;  // BN-normalized pre-activation (x-hat)
  VectorXd inv_std;
  MatrixXd act;         // LSTM: i, f, o, g blocks; RNN: h
  MatrixXd cell;
  MatrixXd cell_tanh;
  MatrixXd hidden;
};

struct PassCache {
  std::vector<LayerCache> layers;
  MatrixXd out_input;
  MatrixXd out_mask;
  MatrixXd outputs;
  NormStats batch_stats;
};

MatrixXd dropout_mask(Index rows, Index cols, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double keep = 1.0 - p;
  MatrixXd mask(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) mask(i, j) = u(rng) < keep ? 1.0 / keep : 0.0;
  return mask;
}

void check_inputs(const RecurrentModel& model, const MatrixXd& inputs,
                  std::size_t batch) {
  const auto& arch = model.arch;
  if (inputs.rows() != idx(arch.frame_len))
    throw DimensionError("input frames have " + std::to_string(inputs.rows()) +
                         " samples, model expects " + std::to_string(arch.frame_len));
  if (batch == 0 || inputs.cols() != idx(batch * arch.steps()))
    throw DimensionError("input has " + std::to_string(inputs.cols()) +
                         " columns, expected " + std::to_string(arch.steps()) +
                         " steps x " + std::to_string(batch) + " sequences");
}

// Runs the whole network layer by layer.  All steps of a layer share one
// feedforward product; only the recurrent part is sequential.
void run(const RecurrentModel& model, const MatrixXd& inputs, std::size_t batch,
         const PassOptions& opts, PassCache& cache) {
  check_inputs(model, inputs, batch);
  const Architecture& arch = model.arch;
  const std::size_t steps = arch.steps();
  const Index b = idx(batch);
  const Index n_cols = inputs.cols();
  if (opts.dropout < 0.0 || opts.dropout >= 1.0)
    throw ConfigError("dropout must lie in [0, 1)");
  std::mt19937_64 rng(opts.dropout_seed);

  cache.layers.assign(arch.hidden.size(), LayerCache{});
  if (opts.batch_statistics) cache.batch_stats = NormStats{};
  const MatrixXd* below = &inputs;

  for (std::size_t l = 0; l < arch.hidden.size(); ++l) {
    const RecurrentLayer& layer = model.params.layers[l];
    LayerCache& lc = cache.layers[l];
    const Index q = idx(arch.hidden[l]);

    lc.input = *below;
    if (l > 0 && opts.dropout > 0.0) {
      lc.mask = dropout_mask(lc.input.rows(), n_cols, opts.dropout, rng);
      lc.input.array() *= lc.mask.array();
    }

    MatrixXd pre = affine(layer.feedforward, lc.input);
    if (arch.batch_norm) {
      VectorXd mean, var;
      if (opts.batch_statistics) {
        mean = pre.rowwise().mean();
        var = (pre.colwise() - mean).array().square().rowwise().mean();
        cache.batch_stats.mean.push_back(mean);
        cache.batch_stats.var.push_back(var);
      } else {
        mean = model.running.mean[l];
        var = model.running.var[l];
      }
      lc.inv_std = (var.array() + kBnEpsilon).rsqrt();
      lc.normalized = (pre.colwise() - mean).array().colwise() * lc.inv_std.array();
      pre = (lc.normalized.array().colwise() * layer.bn_scale.array()).colwise() +
            layer.bn_shift.array();
    }

    const auto h_weights = layer.recurrent.rightCols(q);
    lc.act.resize(pre.rows(), n_cols);
    lc.hidden.resize(q, n_cols);
    if (arch.cell == CellType::kLstm) {
      lc.cell.resize(q, n_cols);
      lc.cell_tanh.resize(q, n_cols);
    }
    for (std::size_t t = 0; t < steps; ++t) {
      const Index c0 = idx(t) * b;
      MatrixXd z = pre.middleCols(c0, b);
      z.colwise() += layer.recurrent.col(0);
      if (t > 0) z.noalias() += h_weights * lc.hidden.middleCols(c0 - b, b);

      if (arch.cell == CellType::kPlainRnn) {
        lc.hidden.middleCols(c0, b) = z.array().tanh().matrix();
        lc.act.middleCols(c0, b) = lc.hidden.middleCols(c0, b);
        continue;
      }
      auto act = lc.act.middleCols(c0, b);
      act.topRows(3 * q) = sigmoid(z.topRows(3 * q));
      act.bottomRows(q) = z.bottomRows(q).array().tanh().matrix();
      auto in_gate = act.topRows(q).array();
      auto forget_gate = act.middleRows(q, q).array();
      auto out_gate = act.middleRows(2 * q, q).array();
      auto candidate = act.bottomRows(q).array();
      if (t > 0)
        lc.cell.middleCols(c0, b) =
            (forget_gate * lc.cell.middleCols(c0 - b, b).array() + in_gate * candidate)
                .matrix();
      else
        lc.cell.middleCols(c0, b) = (in_gate * candidate).matrix();
      lc.cell_tanh.middleCols(c0, b) = lc.cell.middleCols(c0, b).array().tanh().matrix();
      lc.hidden.middleCols(c0, b) =
          (out_gate * lc.cell_tanh.middleCols(c0, b).array()).matrix();
    }
    below = &lc.hidden;
  }

  // Identity-activated output layer fed back with its own previous output.
  const OutputLayer& out = model.params.output;
  const Index m = idx(arch.frame_len);
  cache.out_input = *below;
  if (!arch.hidden.empty() && opts.dropout > 0.0) {
    cache.out_mask = dropout_mask(cache.out_input.rows(), n_cols, opts.dropout, rng);
    cache.out_input.array() *= cache.out_mask.array();
  } else {
    cache.out_mask.resize(0, 0);
  }
  cache.outputs = affine(out.feedforward, cache.out_input);
  const auto y_weights = out.recurrent.rightCols(m);
  for (std::size_t t = 0; t < steps; ++t) {
    const Index c0 = idx(t) * b;
    cache.outputs.middleCols(c0, b).colwise() += out.recurrent.col(0);
    if (t > 0)
      cache.outputs.middleCols(c0, b).noalias() +=
          y_weights * cache.outputs.middleCols(c0 - b, b);
  }
}

}  // namespace

std::string_view to_string(CellType cell) {
  return cell == CellType::kLstm ? "lstm" : "rnn";
}

CellType parse_cell_type(std::string_view name) {
  if (name == "lstm") return CellType::kLstm;
  if (name == "rnn" || name == "plain-rnn") return CellType::kPlainRnn;
  throw ConfigError("unknown cell type '" + std::string(name) + "'");
}

void Architecture::validate() const {
  if (frame_len < 1) throw ConfigError("frame length must be positive");
  if (hidden.empty()) throw ConfigError("at least one recurrent layer is required");
  for (std::size_t q : hidden)
    if (q < 1) throw ConfigError("layer widths must be positive");
}

Parameters Parameters::zeros(const Architecture& arch) {
  arch.validate();
  Parameters p;
  const Index g = idx(arch.gates());
  for (std::size_t l = 0; l < arch.hidden.size(); ++l) {
    const Index q = idx(arch.hidden[l]);
    RecurrentLayer layer;
    layer.feedforward = MatrixXd::Zero(g * q, idx(arch.layer_input_dim(l)) + 1);
    layer.recurrent = MatrixXd::Zero(g * q, q + 1);
    if (arch.batch_norm) {
      layer.bn_scale = VectorXd::Zero(g * q);
      layer.bn_shift = VectorXd::Zero(g * q);
    }
    p.layers.push_back(std::move(layer));
  }
  const Index m = idx(arch.frame_len);
  p.output.feedforward = MatrixXd::Zero(m, idx(arch.hidden.back()) + 1);
  p.output.recurrent = MatrixXd::Zero(m, m + 1);
  return p;
}

std::vector<std::span<double>> Parameters::blocks() {
  std::vector<std::span<double>> out;
  for (auto& layer : layers) {
    out.push_back(span_of(layer.feedforward));
    out.push_back(span_of(layer.recurrent));
    if (layer.bn_scale.size() > 0) {
      out.push_back(span_of(layer.bn_scale));
      out.push_back(span_of(layer.bn_shift));
    }
  }
  out.push_back(span_of(output.feedforward));
  out.push_back(span_of(output.recurrent));
  return out;
}

std::vector<std::span<const double>> Parameters::blocks() const {
  auto mutable_blocks = const_cast<Parameters*>(this)->blocks();
  return {mutable_blocks.begin(), mutable_blocks.end()};
}

std::size_t Parameters::count() const {
  std::size_t n = 0;
  for (auto block : blocks()) n += block.size();
  return n;
}

double Parameters::squared_norm() const {
  double acc = 0.0;
  for (auto block : blocks())
    for (double v : block) acc += v * v;
  return acc;
}

void Parameters::scale(double factor) {
  for (auto block : blocks())
    for (double& v : block) v *= factor;
}

void Parameters::axpy(double factor, const Parameters& other) {
  auto dst = blocks();
  const auto src = other.blocks();
  if (dst.size() != src.size()) throw DimensionError("parameter layouts differ");
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (dst[i].size() != src[i].size()) throw DimensionError("parameter layouts differ");
    for (std::size_t k = 0; k < dst[i].size(); ++k) dst[i][k] += factor * src[i][k];
  }
}

bool Parameters::all_finite() const {
  for (auto block : blocks())
    for (double v : block)
      if (!std::isfinite(v)) return false;
  return true;
}

NormStats NormStats::identity(const Architecture& arch) {
  NormStats s;
  if (!arch.batch_norm) return s;
  for (std::size_t q : arch.hidden) {
    s.mean.push_back(VectorXd::Zero(idx(arch.gates() * q)));
    s.var.push_back(VectorXd::Ones(idx(arch.gates() * q)));
  }
  return s;
}

RecurrentModel init_model(const Architecture& arch, const InitConfig& cfg) {
  RecurrentModel model{arch, Parameters::zeros(arch), NormStats::identity(arch)};
  std::mt19937_64 rng(cfg.seed);
  const std::size_t gates = arch.gates();
  for (std::size_t l = 0; l < arch.hidden.size(); ++l) {
    RecurrentLayer& layer = model.params.layers[l];
    const std::size_t q = arch.hidden[l];
    MatrixXd w(layer.feedforward.rows(), layer.feedforward.cols() - 1);
    fill_uniform(w, 1.0 / std::sqrt(static_cast<double>(arch.layer_input_dim(l))), rng);
    layer.feedforward.rightCols(w.cols()) = w;
    for (std::size_t g = 0; g < gates; ++g)
      layer.recurrent.block(idx(g * q), 1, idx(q), idx(q)) =
          cfg.recurrent_gain * orthogonal(q, rng);
    if (arch.cell == CellType::kLstm)
      layer.recurrent.col(0).segment(idx(q), idx(q)).setConstant(cfg.forget_bias);
    if (arch.batch_norm) layer.bn_scale.setOnes();
  }
  OutputLayer& out = model.params.output;
  MatrixXd w(out.feedforward.rows(), out.feedforward.cols() - 1);
  fill_uniform(w, 1.0 / std::sqrt(static_cast<double>(arch.hidden.back())), rng);
  out.feedforward.rightCols(w.cols()) = w;
  if (cfg.output_recurrent_gain != 0.0)
    out.recurrent.rightCols(idx(arch.frame_len)) =
        cfg.output_recurrent_gain * orthogonal(arch.frame_len, rng);
  return model;
}

SequenceBatch SequenceBatch::from_sequences(std::span<const MatrixXd> inputs,
                                            std::span<const MatrixXd> targets) {
  if (inputs.empty()) throw EmptyInputError("no sequences");
  if (inputs.size() != targets.size())
    throw DimensionError("inputs and targets differ in sequence count");
  SequenceBatch out;
  out.batch = inputs.size();
  out.steps = static_cast<std::size_t>(inputs[0].cols());
  const Index rows = inputs[0].rows();
  out.inputs.resize(rows, idx(out.batch * out.steps));
  out.targets.resize(rows, idx(out.batch * out.steps));
  for (std::size_t s = 0; s < out.batch; ++s) {
    if (inputs[s].rows() != rows || inputs[s].cols() != idx(out.steps) ||
        targets[s].rows() != rows || targets[s].cols() != idx(out.steps))
      throw DimensionError("sequence " + std::to_string(s) + " has a different shape");
    for (std::size_t t = 0; t < out.steps; ++t) {
      out.inputs.col(out.column(t, s)) = inputs[s].col(idx(t));
      out.targets.col(out.column(t, s)) = targets[s].col(idx(t));
    }
  }
  return out;
}

MatrixXd forward(const RecurrentModel& model, const MatrixXd& inputs,
                 std::size_t batch, const PassOptions& opts) {
  PassCache cache;
  run(model, inputs, batch, opts, cache);
  return std::move(cache.outputs);
}

MatrixXd forward(const RecurrentModel& model, const MatrixXd& sequence) {
  return forward(model, sequence, 1);
}

double mse_loss(const MatrixXd& outputs, const MatrixXd& targets) {
  if (outputs.rows() != targets.rows() || outputs.cols() != targets.cols())
    throw DimensionError("outputs and targets differ in shape");
  if (outputs.size() == 0) throw DimensionError("empty outputs");
  return (outputs - targets).squaredNorm() / static_cast<double>(outputs.size());
}

double evaluate_loss(const RecurrentModel& model, const SequenceBatch& batch,
                     const PassOptions& opts) {
  return mse_loss(forward(model, batch.inputs, batch.batch, opts), batch.targets);
}

GradientResult backward(const RecurrentModel& model, const SequenceBatch& batch,
                        const PassOptions& opts) {
  if (batch.targets.rows() != batch.inputs.rows() ||
      batch.targets.cols() != batch.inputs.cols())
    throw DimensionError("targets differ in shape from inputs");
  PassCache cache;
  run(model, batch.inputs, batch.batch, opts, cache);

  const Architecture& arch = model.arch;
  const std::size_t steps = arch.steps();
  const Index b = idx(batch.batch);
  const Index n_cols = batch.inputs.cols();
  const Index m = idx(arch.frame_len);

  GradientResult result;
  result.loss = mse_loss(cache.outputs, batch.targets);
  result.grad = Parameters::zeros(arch);
  result.batch_stats = std::move(cache.batch_stats);

  // Output layer: backpropagate through the y_{t-1} feedback.
  const OutputLayer& out = model.params.output;
  MatrixXd d_out = (2.0 / static_cast<double>(cache.outputs.size())) *
                   (cache.outputs - batch.targets);
  const auto y_weights = out.recurrent.rightCols(m);
  for (std::size_t t = steps - 1; t-- > 0;) {
    const Index c0 = idx(t) * b;
    d_out.middleCols(c0, b).noalias() += y_weights.transpose() * d_out.middleCols(c0 + b, b);
  }
  OutputLayer& g_out = result.grad.output;
  g_out.feedforward.col(0) = d_out.rowwise().sum();
  g_out.feedforward.rightCols(g_out.feedforward.cols() - 1).noalias() =
      d_out * cache.out_input.transpose();
  g_out.recurrent.col(0) = d_out.rowwise().sum();
  if (steps > 1)
    g_out.recurrent.rightCols(m).noalias() =
        d_out.rightCols(n_cols - b) * cache.outputs.leftCols(n_cols - b).transpose();

  MatrixXd d_hidden = out.feedforward.rightCols(out.feedforward.cols() - 1).transpose() * d_out;
  if (cache.out_mask.size() > 0) d_hidden.array() *= cache.out_mask.array();

  for (std::size_t l = arch.hidden.size(); l-- > 0;) {
    const RecurrentLayer& layer = model.params.layers[l];
    const LayerCache& lc = cache.layers[l];
    RecurrentLayer& g = result.grad.layers[l];
    const Index q = idx(arch.hidden[l]);
    const auto h_weights = layer.recurrent.rightCols(q);

    MatrixXd d_pre(lc.act.rows(), n_cols);
    MatrixXd d_cell_next = MatrixXd::Zero(q, b);
    MatrixXd d_h_rec = MatrixXd::Zero(q, b);
    for (std::size_t t = steps; t-- > 0;) {
      const Index c0 = idx(t) * b;
      const MatrixXd dh = d_hidden.middleCols(c0, b) + d_h_rec;
      auto dz = d_pre.middleCols(c0, b);
      if (arch.cell == CellType::kPlainRnn) {
        dz = (dh.array() * (1.0 - lc.hidden.middleCols(c0, b).array().square())).matrix();
      } else {
        const auto act = lc.act.middleCols(c0, b);
        const auto in_gate = act.topRows(q).array();
        const auto forget_gate = act.middleRows(q, q).array();
        const auto out_gate = act.middleRows(2 * q, q).array();
        const auto candidate = act.bottomRows(q).array();
        const auto cell_tanh = lc.cell_tanh.middleCols(c0, b).array();
        const MatrixXd d_cell =
            (dh.array() * out_gate * (1.0 - cell_tanh.square()) + d_cell_next.array())
                .matrix();
        dz.topRows(q) = (d_cell.array() * candidate * in_gate * (1.0 - in_gate)).matrix();
        if (t > 0)
          dz.middleRows(q, q) = (d_cell.array() * lc.cell.middleCols(c0 - b, b).array() *
                                 forget_gate * (1.0 - forget_gate))
                                    .matrix();
        else
          dz.middleRows(q, q).setZero();
        dz.middleRows(2 * q, q) =
            (dh.array() * cell_tanh * out_gate * (1.0 - out_gate)).matrix();
        dz.bottomRows(q) = (d_cell.array() * in_gate * (1.0 - candidate.square())).matrix();
        d_cell_next = (d_cell.array() * forget_gate).matrix();
      }
      d_h_rec.noalias() = h_weights.transpose() * dz;
    }

    g.recurrent.col(0) = d_pre.rowwise().sum();
    if (steps > 1)
      g.recurrent.rightCols(q).noalias() =
          d_pre.rightCols(n_cols - b) * lc.hidden.leftCols(n_cols - b).transpose();

    MatrixXd d_affine;
    if (arch.batch_norm) {
      g.bn_shift = d_pre.rowwise().sum();
      g.bn_scale = (d_pre.array() * lc.normalized.array()).rowwise().sum();
      const MatrixXd d_norm = (d_pre.array().colwise() * layer.bn_scale.array()).matrix();
      if (opts.batch_statistics) {
        const double n = static_cast<double>(n_cols);
        const VectorXd sum_d = d_norm.rowwise().sum();
        const VectorXd sum_dx = (d_norm.array() * lc.normalized.array()).rowwise().sum();
        d_affine = ((n * d_norm.array()).colwise() - sum_d.array() -
                    lc.normalized.array().colwise() * sum_dx.array())
                       .colwise() *
                   (lc.inv_std.array() / n);
      } else {
        d_affine = (d_norm.array().colwise() * lc.inv_std.array()).matrix();
      }
    } else {
      d_affine = std::move(d_pre);
    }

    g.feedforward.col(0) = d_affine.rowwise().sum();
    g.feedforward.rightCols(g.feedforward.cols() - 1).noalias() =
        d_affine * lc.input.transpose();
    if (l > 0) {
      d_hidden = layer.feedforward.rightCols(layer.feedforward.cols() - 1).transpose() *
                 d_affine;
      if (lc.mask.size() > 0) d_hidden.array() *= lc.mask.array();
    }
  }
  return result;
}

}  // namespace f0reg
