// tests/unit/checkpoint_test.cpp
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

#include <cstring>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "f0reg/checkpoint.hpp"
#include "f0reg/error.hpp"
#include "oracles.hpp"

namespace f0reg {
namespace {

Architecture tiny(CellType cell) {
  Architecture a;
  a.cell = cell;
  a.frame_len = 16;
  a.hidden = {8, 8};
  a.context_radius = 1;
  return a;
}

std::uint64_t fnv1a(const std::uint8_t* p, std::size_t n) {
  std::uint64_t h = 14695981039346656037ULL;
  for (std::size_t i = 0; i < n; ++i) h = (h ^ p[i]) * 1099511628211ULL;
  return h;
}

void reseal(std::vector<std::uint8_t>& bytes) {
  const std::uint64_t h = fnv1a(bytes.data(), bytes.size() - 8);
  for (int i = 0; i < 8; ++i) bytes[bytes.size() - 8 + i] = static_cast<std::uint8_t>(h >> (8 * i));
}

bool bit_equal(const RecurrentModel& a, const RecurrentModel& b) {
  if (!(a.arch == b.arch)) return false;
  const auto x = a.params.blocks(), y = b.params.blocks();
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::memcmp(x[i].data(), y[i].data(), x[i].size_bytes()) != 0) return false;
  for (std::size_t l = 0; l < a.running.mean.size(); ++l)
    if (a.running.mean[l] != b.running.mean[l] || a.running.var[l] != b.running.var[l])
      return false;
  return true;
}

TEST(CheckpointTest, RoundTripIsBitExact) {
  for (CellType cell : {CellType::kPlainRnn, CellType::kLstm}) {
    RecurrentModel m = init_model(tiny(cell), {});
    oracle::randomize(m, 8);
    const auto path = std::filesystem::temp_directory_path() / "f0reg_ckpt_test.bin";
    save_checkpoint(m, path);
    const RecurrentModel back = load_checkpoint(path);
    EXPECT_TRUE(bit_equal(m, back));
    std::filesystem::remove(path);
  }
}

TEST(CheckpointTest, SizeFollowsLayout) {
  // 2 x 8 LSTM, M = 16, batch norm: 1952 parameters and 128 statistics.
  // magic 8, version 4, flags 4, dims 12, widths 8, counts 16, hash 8.
  const std::size_t expected = 8 + 4 + 4 + 12 + 2 * 4 + 8 + 8 * 1952 + 8 + 8 * 128 + 8;
  EXPECT_EQ(expected, 16700u);
  EXPECT_EQ(checkpoint_size(tiny(CellType::kLstm)), expected);
  EXPECT_EQ(encode_checkpoint(init_model(tiny(CellType::kLstm), {})).size(), expected);
}

TEST(CheckpointTest, WrongMagicRejected) {
  auto bytes = encode_checkpoint(init_model(tiny(CellType::kLstm), {}));
  bytes[0] = 'X';
  EXPECT_THROW(decode_checkpoint(bytes), CheckpointError);
}

TEST(CheckpointTest, CorruptionRejected) {
  const auto good = encode_checkpoint(init_model(tiny(CellType::kLstm), {}));
  auto flipped = good;
  flipped[100] ^= 0x40;
  EXPECT_THROW(decode_checkpoint(flipped), CheckpointError);
  auto truncated = good;
  truncated.resize(good.size() - 9);
  EXPECT_THROW(decode_checkpoint(truncated), CheckpointError);
  EXPECT_THROW(decode_checkpoint(std::vector<std::uint8_t>(4, 0)), CheckpointError);
}

TEST(CheckpointTest, VersionChecked) {
  auto bytes = encode_checkpoint(init_model(tiny(CellType::kLstm), {}));
  bytes[8] = 2;
  reseal(bytes);
  EXPECT_THROW(decode_checkpoint(bytes), CheckpointError);
  bytes[8] = 1;
  reseal(bytes);
  EXPECT_NO_THROW(decode_checkpoint(bytes));
}

TEST(CheckpointTest, MissingFile) {
  EXPECT_THROW(load_checkpoint("/nonexistent/model.ckpt"), CheckpointError);
}

}  // namespace
}  // namespace f0reg
