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

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zerogames/nn/checkpoint.hpp"
#include "zerogames/train/replay.hpp"

namespace zg::train {

// Worker-to-trainer stream. Each record is a u64 little-endian payload length
// followed by the payload:
//
//   u32 length + game id bytes
//   u64 network spec hash
//   u32 sample count
//   per sample: state tensor, policy tensor, u32 n + n i32 legal actions, f32 reward
//
// A tensor is u32 rank, rank u32 dims, then f32 values, as in checkpoints.
struct SampleRecord {
  std::string game_id;
  std::uint64_t spec_hash = 0;
  std::vector<Sample> samples;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

class WireError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void put_tensor(nn::detail::ByteWriter& w, const Tensor<float>& t) {
  w.put(std::uint32_t(t.rank()));
  for (auto d : t.shape()) w.put(std::uint32_t(d));
  for (float v : t.values()) w.put_f32(v);
}

inline Tensor<float> get_tensor(nn::detail::ByteReader& r) {
  const auto rank = r.get<std::uint32_t>();
  if (rank > 8) throw WireError("tensor rank " + std::to_string(rank) + " out of range");
  std::vector<std::size_t> shape(rank);
  std::uint64_t n = 1;
  for (auto& d : shape) {
    d = r.get<std::uint32_t>();
    n *= d;
    if (n > (1u << 26)) throw WireError("tensor too large");
  }
  Tensor<float> t(shape);
  for (auto& v : t.values()) v = r.get_f32();
  return t;
}

}  // namespace detail

inline std::vector<std::uint8_t> encode_record(const SampleRecord& rec) {
  nn::detail::ByteWriter w;
  w.put_string(rec.game_id);
  w.put(rec.spec_hash);
  w.put(std::uint32_t(rec.samples.size()));
  for (const auto& s : rec.samples) {
    detail::put_tensor(w, s.state);
    detail::put_tensor(w, s.policy);
    w.put(std::uint32_t(s.legal.size()));
    for (int a : s.legal) w.put(std::int32_t(a));
    w.put_f32(s.reward);
  }
  return std::move(w.bytes());
}

inline SampleRecord decode_record(const std::vector<std::uint8_t>& bytes) {
  try {
    nn::detail::ByteReader r(bytes.data(), bytes.size());
    SampleRecord rec;
    rec.game_id = r.get_string();
    rec.spec_hash = r.get<std::uint64_t>();
    const auto n = r.get<std::uint32_t>();
    for (std::uint32_t i = 0; i < n; ++i) {
      Sample s;
      s.state = detail::get_tensor(r);
      s.policy = detail::get_tensor(r);
      const auto k = r.get<std::uint32_t>();
      if (k > s.policy.size()) throw WireError("more legal actions than policy entries");
      for (std::uint32_t j = 0; j < k; ++j) s.legal.push_back(r.get<std::int32_t>());
      s.reward = r.get_f32();
      rec.samples.push_back(std::move(s));
    }
    if (r.position() != bytes.size()) throw WireError("trailing bytes after sample record");
    return rec;
  } catch (const nn::CheckpointError&) {
    throw WireError("sample record truncated");
  }
}

inline void write_record(std::ostream& os, const SampleRecord& rec) {
  const auto payload = encode_record(rec);
  nn::detail::ByteWriter len;
  len.put(std::uint64_t(payload.size()));
  os.write(reinterpret_cast<const char*>(len.bytes().data()), std::streamsize(len.bytes().size()));
  os.write(reinterpret_cast<const char*>(payload.data()), std::streamsize(payload.size()));
  if (!os) throw WireError("failed to write sample record");
}

// nullopt on a clean end of stream; WireError on a partial record.
inline std::optional<SampleRecord> read_record(std::istream& is) {
  std::uint8_t head[8];
  is.read(reinterpret_cast<char*>(head), 8);
  if (is.gcount() == 0 && is.eof()) return std::nullopt;
  if (is.gcount() != 8) throw WireError("truncated record length");
  nn::detail::ByteReader hr(head, 8);
  const auto len = hr.get<std::uint64_t>();
  if (len > (std::uint64_t(1) << 32)) throw WireError("record length " + std::to_string(len) + " too large");
  std::vector<std::uint8_t> payload(len);
  is.read(reinterpret_cast<char*>(payload.data()), std::streamsize(len));
  if (std::uint64_t(is.gcount()) != len) throw WireError("truncated sample record");
  return decode_record(payload);
}

}  // namespace zg::train
