// Copyright 2026 The hbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "hbench/protocol.h"

#include <bit>
#include <cstring>

#include "hbench/error.h"

namespace hbench::wire {

namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  const std::size_t n = out.size();
  out.resize(n + sizeof(T));
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(out.data() + n, &v, sizeof(T));
  } else {
    for (std::size_t i = 0; i < sizeof(T); ++i) out[n + i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
}

template <typename T>
T get_le(const std::uint8_t* p) {
  T v = 0;
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(&v, p, sizeof(T));
  } else {
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
  }
  return v;
}

template <typename T, typename Bits>
void put_array(std::vector<std::uint8_t>& out, std::span<const T> v) {
  if constexpr (std::endian::native == std::endian::little) {
    const std::size_t n = out.size();
    out.resize(n + v.size_bytes());
    if (!v.empty()) std::memcpy(out.data() + n, v.data(), v.size_bytes());
  } else {
    for (T x : v) put_le(out, std::bit_cast<Bits>(x));
  }
}

template <typename T, typename Bits>
void get_array(const std::uint8_t* p, std::span<T> out) {
  if constexpr (std::endian::native == std::endian::little) {
    if (!out.empty()) std::memcpy(out.data(), p, out.size_bytes());
  } else {
    for (T& x : out) {
      x = std::bit_cast<T>(get_le<Bits>(p));
      p += sizeof(T);
    }
  }
}

}  // namespace

void Writer::bytes(std::span<const std::uint8_t> v) {
  const std::size_t n = out_.size();
  out_.resize(n + v.size());
  if (!v.empty()) std::memcpy(out_.data() + n, v.data(), v.size());
}
void Writer::f32s(std::span<const float> v) { put_array<float, std::uint32_t>(out_, v); }
void Writer::f64s(std::span<const double> v) { put_array<double, std::uint64_t>(out_, v); }
void Writer::u16(std::uint16_t v) { put_le(out_, v); }
void Writer::u32(std::uint32_t v) { put_le(out_, v); }
void Writer::u64(std::uint64_t v) { put_le(out_, v); }
void Writer::f32(float v) { put_le(out_, std::bit_cast<std::uint32_t>(v)); }
void Writer::f64(double v) { put_le(out_, std::bit_cast<std::uint64_t>(v)); }
void Writer::str(const std::string& s) {
  u32(static_cast<std::uint32_t>(s.size()));
  out_.insert(out_.end(), s.begin(), s.end());
}

void Reader::need(std::size_t n) const {
  if (in_.size() - pos_ < n) throw Error("truncated payload");
}
std::uint8_t Reader::u8() {
  need(1);
  return in_[pos_++];
}
std::uint16_t Reader::u16() {
  need(2);
  const auto v = get_le<std::uint16_t>(in_.data() + pos_);
  pos_ += 2;
  return v;
}
std::uint32_t Reader::u32() {
  need(4);
  const auto v = get_le<std::uint32_t>(in_.data() + pos_);
  pos_ += 4;
  return v;
}
std::uint64_t Reader::u64() {
  need(8);
  const auto v = get_le<std::uint64_t>(in_.data() + pos_);
  pos_ += 8;
  return v;
}
float Reader::f32() { return std::bit_cast<float>(u32()); }
double Reader::f64() { return std::bit_cast<double>(u64()); }
std::string Reader::str() {
  const std::uint32_t n = u32();
  need(n);
  std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
  pos_ += n;
  return s;
}

void Reader::f32s(std::span<float> out) {
  need(out.size_bytes());
  get_array<float, std::uint32_t>(in_.data() + pos_, out);
  pos_ += out.size_bytes();
}
void Reader::f64s(std::span<double> out) {
  need(out.size_bytes());
  get_array<double, std::uint64_t>(in_.data() + pos_, out);
  pos_ += out.size_bytes();
}
void Reader::u8s(std::span<std::uint8_t> out) {
  need(out.size());
  if (!out.empty()) std::memcpy(out.data(), in_.data() + pos_, out.size());
  pos_ += out.size();
}

HeaderParse parse_header(std::span<const std::uint8_t, kHeaderSize> b) {
  HeaderParse out;
  if (std::memcmp(b.data(), kMagic, 4) != 0) {
    out.error = "bad magic";
    return out;
  }
  out.header.version = get_le<std::uint16_t>(b.data() + 4);
  const std::uint8_t type = b[6];
  out.header.env_count = get_le<std::uint32_t>(b.data() + 7);
  out.header.payload_len = get_le<std::uint32_t>(b.data() + 11);
  if (type > static_cast<std::uint8_t>(MsgType::kError)) {
    out.error = "unknown message type " + std::to_string(type);
    return out;
  }
  out.header.type = static_cast<MsgType>(type);
  out.ok = true;
  return out;
}

std::vector<std::uint8_t> encode_frame(MsgType type, std::uint32_t env_count,
                                       std::span<const std::uint8_t> payload) {
  Writer w;
  w.data().reserve(kHeaderSize + payload.size());
  w.bytes({reinterpret_cast<const std::uint8_t*>(kMagic), 4});
  w.u16(kVersion);
  w.u8(static_cast<std::uint8_t>(type));
  w.u32(env_count);
  w.u32(static_cast<std::uint32_t>(payload.size()));
  w.bytes(payload);
  return std::move(w.data());
}

std::vector<std::uint8_t> encode_spec(std::uint32_t env_count, const SpecMessage& spec) {
  Writer w;
  w.u32(spec.obs_dim);
  w.u32(spec.action_dim);
  w.u32(spec.episode_cap);
  w.f64(spec.success_target);
  w.u64(spec.base_seed);
  w.str(spec.manifest);
  return encode_frame(MsgType::kSpec, env_count, w.data());
}

SpecMessage decode_spec(std::span<const std::uint8_t> payload) {
  Reader r(payload);
  SpecMessage s;
  s.obs_dim = r.u32();
  s.action_dim = r.u32();
  s.episode_cap = r.u32();
  s.success_target = r.f64();
  s.base_seed = r.u64();
  s.manifest = r.str();
  return s;
}

std::vector<std::uint8_t> encode_step_result(const StepResultMessage& m) {
  const std::size_t n = m.rewards.size();
  // Header first, with the payload length patched in at the end.
  Writer w;
  w.data().reserve(kHeaderSize + 4 * (m.observations.size() + m.terminal_observations.size()) +
                   26 * n + 4);
  w.bytes({reinterpret_cast<const std::uint8_t*>(kMagic), 4});
  w.u16(kVersion);
  w.u8(static_cast<std::uint8_t>(MsgType::kStepResult));
  w.u32(static_cast<std::uint32_t>(n));
  w.u32(0);
  w.f32s(m.observations);
  w.f64s(m.rewards);
  w.f64s(m.dense);
  w.f64s(m.sparse);
  w.bytes(m.flags);
  w.bytes(m.reasons);
  w.f32s(m.terminal_observations);
  w.u32(static_cast<std::uint32_t>(m.errors.size()));
  for (const auto& [index, message] : m.errors) {
    w.u32(index);
    w.str(message);
  }
  std::vector<std::uint8_t>& out = w.data();
  const auto len = static_cast<std::uint32_t>(out.size() - kHeaderSize);
  for (int i = 0; i < 4; ++i) out[11 + i] = static_cast<std::uint8_t>(len >> (8 * i));
  return std::move(out);
}

StepResultMessage decode_step_result(std::uint32_t env_count, std::uint32_t obs_dim,
                                     std::span<const std::uint8_t> payload) {
  Reader r(payload);
  StepResultMessage m;
  m.obs_dim = obs_dim;
  const std::size_t block = static_cast<std::size_t>(env_count) * obs_dim;
  // Size check first so a short payload never drives a large allocation.
  if (r.remaining() < 8 * block + 26 * static_cast<std::size_t>(env_count) + 4) {
    throw Error("truncated payload");
  }
  m.observations.resize(block);
  r.f32s(m.observations);
  for (auto* vec : {&m.rewards, &m.dense, &m.sparse}) {
    vec->resize(env_count);
    r.f64s(*vec);
  }
  m.flags.resize(env_count);
  r.u8s(m.flags);
  m.reasons.resize(env_count);
  r.u8s(m.reasons);
  m.terminal_observations.resize(block);
  r.f32s(m.terminal_observations);
  const std::uint32_t n_err = r.u32();
  for (std::uint32_t i = 0; i < n_err; ++i) {
    const std::uint32_t index = r.u32();
    m.errors.emplace_back(index, r.str());
  }
  if (r.remaining() != 0) throw Error("trailing bytes in step result");
  return m;
}

std::vector<std::uint8_t> encode_error(ErrorCode code, const std::string& message) {
  Writer w;
  w.u32(static_cast<std::uint32_t>(code));
  w.str(message);
  return encode_frame(MsgType::kError, 0, w.data());
}

std::pair<ErrorCode, std::string> decode_error(std::span<const std::uint8_t> payload) {
  Reader r(payload);
  const auto code = static_cast<ErrorCode>(r.u32());
  return {code, r.str()};
}

}  // namespace hbench::wire
