// f0reg/checkpoint.hpp
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

#ifndef F0REG_CHECKPOINT_HPP_
#define F0REG_CHECKPOINT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "f0reg/neural.hpp"

namespace f0reg {

// Little-endian layout:
//
//   char[8]  magic "F0REGCK\0"
//   u32      format version
//   u8       cell type (0 plain RNN, 1 LSTM)
//   u8       batch normalization flag
//   u16      reserved, 0
//   u32      frame length M
//   u32      context radius p
//   u32      number of recurrent layers L
//   u32[L]   layer widths
//   u64      parameter count P
//   f64[P]   parameters in Parameters::blocks() order
//   u64      statistics count S
//   f64[S]   per layer: running mean, then running variance
//   u64      FNV-1a hash of every preceding byte
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(const RecurrentModel& model);
/// Throws CheckpointError on bad magic, version, architecture or hash.
RecurrentModel decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const RecurrentModel& model, const std::filesystem::path& path);
RecurrentModel load_checkpoint(const std::filesystem::path& path);

/// Encoded size in bytes for a given architecture.
std::size_t checkpoint_size(const Architecture& arch);

}  // namespace f0reg

#endif  // F0REG_CHECKPOINT_HPP_
