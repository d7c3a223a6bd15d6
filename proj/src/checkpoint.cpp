// f0reg/checkpoint.cpp
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

#include "f0reg/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string_view>

#include <fmt/format.h>

#include "f0reg/error.hpp"

namespace f0reg {

namespace {

constexpr std::array<char, 8> kMagic{'F', '0', 'R', 'E', 'G', 'C', 'K', '\0'};

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  template <typename T>
  void put(T value) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
              std::conditional_t<sizeof(T) == 4, std::uint32_t,
              std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
    const U bits = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(U); ++i)
      bytes_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
              std::conditional_t<sizeof(T) == 4, std::uint32_t,
              std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
    if (pos_ + sizeof(U) > bytes_.size()) throw CheckpointError("checkpoint truncated");
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
      bits |= static_cast<U>(static_cast<U>(bytes_[pos_ + i]) << (8 * i));
    pos_ += sizeof(U);
    return std::bit_cast<T>(bits);
  }
  std::size_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::size_t stats_count(const NormStats& s) {
  std::size_t n = 0;
  for (std::size_t l = 0; l < s.mean.size(); ++l)
    n += static_cast<std::size_t>(s.mean[l].size() + s.var[l].size());
  return n;
}

}  // namespace

std::size_t checkpoint_size(const Architecture& arch) {
  const std::size_t params = Parameters::zeros(arch).count();
  const std::size_t stats = stats_count(NormStats::identity(arch));
  return kMagic.size() + 4 + 4 + 3 * 4 + 4 * arch.hidden.size() + 8 + 8 * params + 8 +
         8 * stats + 8;
}

std::vector<std::uint8_t> encode_checkpoint(const RecurrentModel& model) {
  const Architecture& arch = model.arch;
  Writer w;
  for (char c : kMagic) w.put(static_cast<std::uint8_t>(c));
  w.put(kCheckpointVersion);
  w.put(static_cast<std::uint8_t>(arch.cell));
  w.put(static_cast<std::uint8_t>(arch.batch_norm ? 1 : 0));
  w.put(std::uint16_t{0});
  w.put(static_cast<std::uint32_t>(arch.frame_len));
  w.put(static_cast<std::uint32_t>(arch.context_radius));
  w.put(static_cast<std::uint32_t>(arch.hidden.size()));
  for (std::size_t q : arch.hidden) w.put(static_cast<std::uint32_t>(q));
  w.put(static_cast<std::uint64_t>(model.params.count()));
  for (auto block : model.params.blocks())
    for (double v : block) w.put(v);
  w.put(static_cast<std::uint64_t>(stats_count(model.running)));
  for (std::size_t l = 0; l < model.running.mean.size(); ++l) {
    for (double v : model.running.mean[l]) w.put(v);
    for (double v : model.running.var[l]) w.put(v);
  }
  w.put(fnv1a(w.bytes()));
  return std::move(w.bytes());
}

RecurrentModel decode_checkpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagic.size() + 8 ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0)
    throw CheckpointError("not a checkpoint (bad magic bytes)");
  {
    Reader tail(bytes.subspan(bytes.size() - 8));
    if (tail.get<std::uint64_t>() != fnv1a(bytes.first(bytes.size() - 8)))
      throw CheckpointError("checkpoint hash mismatch (file corrupt)");
  }

  Reader r(bytes.first(bytes.size() - 8));
  for (std::size_t i = 0; i < kMagic.size(); ++i) r.get<std::uint8_t>();
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw CheckpointError(fmt::format("checkpoint format version {} (expected {})", version,
                                      kCheckpointVersion));
  Architecture arch;
  const auto cell = r.get<std::uint8_t>();
  if (cell > 1) throw CheckpointError(fmt::format("unknown cell type {}", cell));
  arch.cell = static_cast<CellType>(cell);
  arch.batch_norm = r.get<std::uint8_t>() != 0;
  r.get<std::uint16_t>();
  arch.frame_len = r.get<std::uint32_t>();
  arch.context_radius = r.get<std::uint32_t>();
  const auto layers = r.get<std::uint32_t>();
  if (layers == 0 || layers > 64) throw CheckpointError("implausible layer count");
  arch.hidden.clear();
  for (std::uint32_t l = 0; l < layers; ++l) arch.hidden.push_back(r.get<std::uint32_t>());
  try {
    arch.validate();
  } catch (const ConfigError& e) {
    throw CheckpointError(std::string("bad architecture: ") + e.what());
  }
  if (checkpoint_size(arch) != bytes.size())
    throw CheckpointError(fmt::format("checkpoint is {} bytes, architecture implies {}",
                                      bytes.size(), checkpoint_size(arch)));

  RecurrentModel model{arch, Parameters::zeros(arch), NormStats::identity(arch)};
  if (r.get<std::uint64_t>() != model.params.count())
    throw CheckpointError("parameter count disagrees with architecture");
  for (auto block : model.params.blocks())
    for (double& v : block) v = r.get<double>();
  if (r.get<std::uint64_t>() != stats_count(model.running))
    throw CheckpointError("statistics count disagrees with architecture");
  for (std::size_t l = 0; l < model.running.mean.size(); ++l) {
    for (double& v : model.running.mean[l]) v = r.get<double>();
    for (double& v : model.running.var[l]) v = r.get<double>();
  }
  return model;
}

void save_checkpoint(const RecurrentModel& model, const std::filesystem::path& path) {
  const auto bytes = encode_checkpoint(model);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw CheckpointError(fmt::format("cannot write {}", path.string()));
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw CheckpointError(fmt::format("write to {} failed", path.string()));
}

RecurrentModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointError(fmt::format("cannot open {}", path.string()));
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace f0reg
