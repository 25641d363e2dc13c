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


#ifndef HBENCH_PROTOCOL_H_
#define HBENCH_PROTOCOL_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hbench::wire {

inline constexpr char kMagic[4] = {'H', 'B', 'E', 'N'};
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 15;
inline constexpr std::uint32_t kMaxPayload = 1u << 28;

enum class MsgType : std::uint8_t {
  kHello = 0,
  kSpec = 1,
  kReset = 2,
  kStep = 3,
  kStepResult = 4,
  kError = 5,
};

enum class ErrorCode : std::uint32_t {
  kMalformed = 1,
  kVersionMismatch = 2,
  kBadShape = 3,
  kUnexpected = 4,
  kInternal = 5,
};

// Per-env flag bits in StepResult.
inline constexpr std::uint8_t kFlagDone = 1;
inline constexpr std::uint8_t kFlagError = 2;
inline constexpr std::uint8_t kFlagTimeout = 4;

struct Header {
  std::uint16_t version = kVersion;
  MsgType type = MsgType::kHello;
  std::uint32_t env_count = 0;
  std::uint32_t payload_len = 0;
};

struct Frame {
  Header header;
  std::vector<std::uint8_t> payload;
};

// Header parse result. `ok` is false for a bad magic or an unknown type.
struct HeaderParse {
  bool ok = false;
  Header header;
  std::string error;
};
HeaderParse parse_header(std::span<const std::uint8_t, kHeaderSize> bytes);

std::vector<std::uint8_t> encode_frame(MsgType type, std::uint32_t env_count,
                                       std::span<const std::uint8_t> payload);

// Little-endian appenders and a bounds-checked reader.
class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f32(float v);
  void f64(double v);
  void bytes(std::span<const std::uint8_t> v);
  void str(const std::string& s);  // u32 length + bytes
  void f32s(std::span<const float> v);
  void f64s(std::span<const double> v);
  std::vector<std::uint8_t>& data() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  // Each throws hbench::Error("truncated payload") past the end.
  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  float f32();
  double f64();
  std::string str();
  void f32s(std::span<float> out);
  void f64s(std::span<double> out);
  void u8s(std::span<std::uint8_t> out);
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const;
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

struct SpecMessage {
  std::uint32_t obs_dim = 0;
  std::uint32_t action_dim = 0;
  std::uint32_t episode_cap = 0;
  double success_target = 0.0;
  std::uint64_t base_seed = 0;
  std::string manifest;  // layout manifest JSON
};
std::vector<std::uint8_t> encode_spec(std::uint32_t env_count, const SpecMessage& spec);
SpecMessage decode_spec(std::span<const std::uint8_t> payload);

struct StepResultMessage {
  std::uint32_t obs_dim = 0;
  std::vector<float> observations;           // env_count × obs_dim
  std::vector<double> rewards;               // total
  std::vector<double> dense;
  std::vector<double> sparse;
  std::vector<std::uint8_t> flags;
  std::vector<std::uint8_t> reasons;         // TerminationReason values
  std::vector<float> terminal_observations;  // env_count × obs_dim, zero unless done
  std::vector<std::pair<std::uint32_t, std::string>> errors;  // env index, message
};
std::vector<std::uint8_t> encode_step_result(const StepResultMessage& msg);
StepResultMessage decode_step_result(std::uint32_t env_count, std::uint32_t obs_dim,
                                     std::span<const std::uint8_t> payload);

std::vector<std::uint8_t> encode_error(ErrorCode code, const std::string& message);
std::pair<ErrorCode, std::string> decode_error(std::span<const std::uint8_t> payload);

}  // namespace hbench::wire

#endif  // HBENCH_PROTOCOL_H_
