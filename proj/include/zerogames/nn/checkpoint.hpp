// Copyright 2026 The Zerogames Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <zlib.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "zerogames/nn/network.hpp"

namespace zg::nn {

// Byte layout (all integers little-endian):
//
//   0   magic "ZGNC"
//   4   u32 format version (kCheckpointVersion)
//   8   u64 total file length in bytes
//   16  u32 length + game id bytes
//   ..  u32 field count, then that many u32 spec fields in NetworkSpec order
//   ..  u64 training step
//   ..  u8 has_elo, f64 elo (IEEE-754 bits, zero when absent)
//   ..  f32 weights, tensor by tensor in Weights::for_each order
//   end u32 CRC-32 (zlib polynomial) of every preceding byte
inline constexpr char kCheckpointMagic[4] = {'Z', 'G', 'N', 'C'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  std::string game_id;
  Network<float> network;
  std::uint64_t step = 0;
  std::optional<double> elo;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

class CheckpointError : public std::runtime_error {
 public:
  enum class Kind { Io, BadMagic, VersionMismatch, Truncated, Checksum, Malformed };

  CheckpointError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

namespace detail {

class ByteWriter {
 public:
  template <typename U>
  void put(U v) {
    static_assert(std::is_integral_v<U>);
    for (std::size_t i = 0; i < sizeof(U); ++i) bytes_.push_back(std::uint8_t((std::make_unsigned_t<U>(v) >> (8 * i)) & 0xff));
  }
  void put_f32(float f) { put(std::bit_cast<std::uint32_t>(f)); }
  void put_f64(double d) { put(std::bit_cast<std::uint64_t>(d)); }
  void put_string(const std::string& s) {
    put(std::uint32_t(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  ByteReader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  template <typename U>
  U get() {
    need(sizeof(U));
    std::make_unsigned_t<U> v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= std::make_unsigned_t<U>(data_[pos_ + i]) << (8 * i);
    pos_ += sizeof(U);
    return U(v);
  }
  float get_f32() { return std::bit_cast<float>(get<std::uint32_t>()); }
  double get_f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
  std::string get_string() {
    const auto n = get<std::uint32_t>();
    need(n);
    std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
    pos_ += n;
    return s;
  }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > size_) throw CheckpointError(CheckpointError::Kind::Truncated, "checkpoint truncated");
  }
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

inline std::uint32_t crc32_of(const std::uint8_t* data, std::size_t n) {
  return std::uint32_t(::crc32(::crc32(0L, Z_NULL, 0), data, uInt(n)));
}

}  // namespace detail

inline std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ck) {
  ck.network.validate();
  detail::ByteWriter w;
  for (char c : kCheckpointMagic) w.put(std::uint8_t(c));
  w.put(kCheckpointVersion);
  w.put(std::uint64_t(0));  // length, patched below
  w.put_string(ck.game_id);
  const auto fields = ck.network.spec.fields();
  w.put(std::uint32_t(fields.size()));
  for (int f : fields) w.put(std::uint32_t(f));
  w.put(std::uint64_t(ck.step));
  w.put(std::uint8_t(ck.elo.has_value()));
  w.put_f64(ck.elo.value_or(0.0));
  ck.network.weights.for_each([&](const std::string&, const Tensor<float>& t) {
    for (float v : t.values()) w.put_f32(v);
  });
  auto& bytes = w.bytes();
  const std::uint64_t total = bytes.size() + 4;
  for (int i = 0; i < 8; ++i) bytes[8 + i] = std::uint8_t((total >> (8 * i)) & 0xff);
  const std::uint32_t crc = detail::crc32_of(bytes.data(), bytes.size());
  w.put(crc);
  return std::move(bytes);
}

inline Checkpoint deserialize_checkpoint(const std::vector<std::uint8_t>& bytes) {
  using Kind = CheckpointError::Kind;
  if (bytes.size() < 16) throw CheckpointError(Kind::Truncated, "checkpoint truncated: header incomplete");
  if (std::memcmp(bytes.data(), kCheckpointMagic, 4) != 0) throw CheckpointError(Kind::BadMagic, "not a checkpoint file");
  detail::ByteReader head(bytes.data() + 4, 12);
  const auto version = head.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw CheckpointError(Kind::VersionMismatch, "checkpoint format version " + std::to_string(version) +
                                                     ", this build reads version " + std::to_string(kCheckpointVersion));
  }
  const auto declared = head.get<std::uint64_t>();
  if (bytes.size() < declared) {
    throw CheckpointError(Kind::Truncated, "checkpoint truncated: " + std::to_string(bytes.size()) + " of " +
                                               std::to_string(declared) + " bytes");
  }
  const std::size_t body = bytes.size() - 4;
  detail::ByteReader tail(bytes.data() + body, 4);
  if (detail::crc32_of(bytes.data(), body) != tail.get<std::uint32_t>() || bytes.size() != declared) {
    throw CheckpointError(Kind::Checksum, "checkpoint checksum mismatch");
  }

  detail::ByteReader r(bytes.data(), body);
  r.get<std::uint32_t>();
  r.get<std::uint32_t>();
  r.get<std::uint64_t>();
  Checkpoint ck;
  ck.game_id = r.get_string();
  const auto nfields = r.get<std::uint32_t>();
  if (nfields != 7) throw CheckpointError(Kind::Malformed, "unexpected spec field count " + std::to_string(nfields));
  NetworkSpec s;
  int* dst[] = {&s.input_channels, &s.trunk_channels, &s.residual_blocks, &s.kernel_size,
                &s.policy_channels, &s.value_pool_channels, &s.value_hidden};
  for (int* d : dst) *d = int(r.get<std::uint32_t>());
  try {
    ck.network = Network<float>(s);
  } catch (const std::exception& e) {
    throw CheckpointError(Kind::Malformed, std::string("invalid network spec: ") + e.what());
  }
  ck.step = r.get<std::uint64_t>();
  const bool has_elo = r.get<std::uint8_t>() != 0;
  const double elo = r.get_f64();
  if (has_elo) ck.elo = elo;
  ck.network.weights.for_each([&](const std::string&, Tensor<float>& t) {
    for (auto& v : t.values()) v = r.get_f32();
  });
  if (r.position() != body) throw CheckpointError(Kind::Malformed, "trailing bytes after weights");
  return ck;
}

inline void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path) {
  const auto bytes = serialize_checkpoint(ck);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError(CheckpointError::Kind::Io, "cannot write " + tmp);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw CheckpointError(CheckpointError::Kind::Io, "write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CheckpointError(CheckpointError::Kind::Io, "cannot move checkpoint into " + path.string() + ": " + ec.message());
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError(CheckpointError::Kind::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes);
}

}  // namespace zg::nn
