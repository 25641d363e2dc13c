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


#include "hbench/server.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <string>

#include "hbench/error.h"
#include "json.hpp"

namespace hbench {

namespace {

using wire::ErrorCode;
using wire::MsgType;

bool read_exact(int fd, std::uint8_t* out, std::size_t n) {
  std::size_t got = 0;
  while (got < n) {
    const ssize_t r = ::recv(fd, out + got, n - got, 0);
    if (r == 0) return false;
    if (r < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    got += static_cast<std::size_t>(r);
  }
  return true;
}

bool write_all(int fd, std::span<const std::uint8_t> bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t r = ::send(fd, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (r < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    sent += static_cast<std::size_t>(r);
  }
  return true;
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

void log_event(const ServerOptions& options, nlohmann::ordered_json event) {
  if (!options.log) return;
  std::fprintf(stderr, "%s\n", event.dump().c_str());
}

}  // namespace

Session::Session(TaskSpec task, EnvOptions env, SessionOptions options, BackendFactory factory)
    : task_(task),
      options_(options),
      pool_(std::move(task), std::move(env), options.num_envs, options.num_threads,
            std::move(factory)) {}

wire::SpecMessage Session::spec() const {
  wire::SpecMessage s;
  s.obs_dim = static_cast<std::uint32_t>(pool_.observation_dim());
  s.action_dim = static_cast<std::uint32_t>(pool_.action_dim());
  s.episode_cap = static_cast<std::uint32_t>(task_.episode_cap);
  s.success_target = task_.success_target;
  s.base_seed = options_.base_seed;
  s.manifest = pool_.env(0).manifest_json();
  return s;
}

Session::Reply Session::error(ErrorCode code, const std::string& message, bool close) {
  return {wire::encode_error(code, message), close};
}

Session::Reply Session::reject(const std::string& reason) {
  return error(ErrorCode::kMalformed, "malformed frame: " + reason);
}

Session::Reply Session::step_result(const std::vector<EnvSlotResult>* results) {
  const int n = pool_.size();
  const int d = pool_.observation_dim();
  wire::StepResultMessage& m = message_;
  m.errors.clear();
  m.obs_dim = static_cast<std::uint32_t>(d);
  const std::vector<double>& obs = pool_.observations();
  m.observations.assign(obs.begin(), obs.end());
  m.rewards.assign(n, 0.0);
  m.dense.assign(n, 0.0);
  m.sparse.assign(n, 0.0);
  m.flags.assign(n, 0);
  m.reasons.assign(n, 0);
  m.terminal_observations.assign(static_cast<std::size_t>(n) * d, 0.0f);
  if (results != nullptr) {
    for (int i = 0; i < n; ++i) {
      const EnvSlotResult& r = (*results)[i];
      m.rewards[i] = r.reward;
      m.dense[i] = r.dense;
      m.sparse[i] = r.sparse;
      std::uint8_t f = 0;
      if (r.done) f |= wire::kFlagDone;
      if (r.error) f |= wire::kFlagError;
      if (r.reason == TerminationReason::kTimeout) f |= wire::kFlagTimeout;
      m.flags[i] = f;
      m.reasons[i] = static_cast<std::uint8_t>(r.reason);
      for (std::size_t k = 0; k < r.terminal_observation.size(); ++k) {
        m.terminal_observations[static_cast<std::size_t>(i) * d + k] =
            static_cast<float>(r.terminal_observation[k]);
      }
      if (r.error) m.errors.emplace_back(static_cast<std::uint32_t>(i), r.error_message);
    }
  }
  return {wire::encode_step_result(m), false};
}

Session::Reply Session::handle(const wire::Header& h, std::span<const std::uint8_t> payload) {
  if (h.version != wire::kVersion) {
    return error(ErrorCode::kVersionMismatch,
                 "protocol version " + std::to_string(h.version) + " not supported; server speaks " +
                     std::to_string(wire::kVersion),
                 true);
  }
  const auto n = static_cast<std::uint32_t>(pool_.size());
  try {
    switch (h.type) {
      case MsgType::kHello:
        return {wire::encode_spec(n, spec()), false};
      case MsgType::kReset: {
        if (h.env_count != n && h.env_count != 0) {
          return error(ErrorCode::kBadShape, "reset for " + std::to_string(h.env_count) +
                                                 " envs; server has " + std::to_string(n));
        }
        std::uint64_t seed = options_.base_seed;
        if (!payload.empty()) {
          if (payload.size() != 8) {
            return error(ErrorCode::kBadShape, "reset payload must be empty or one u64 seed");
          }
          seed = wire::Reader(payload).u64();
        }
        pool_.reset(seed);
        reset_done_ = true;
        return step_result(nullptr);
      }
      case MsgType::kStep: {
        if (!reset_done_) return error(ErrorCode::kUnexpected, "step before reset");
        const std::size_t want = static_cast<std::size_t>(n) * pool_.action_dim();
        if (h.env_count != n || payload.size() != want * 4) {
          return error(ErrorCode::kBadShape,
                       "step expects " + std::to_string(n) + " x " +
                           std::to_string(pool_.action_dim()) + " f32 actions; got env_count " +
                           std::to_string(h.env_count) + " and " +
                           std::to_string(payload.size()) + " bytes");
        }
        actions_.resize(want);
        wire::Reader r(payload);
        for (double& a : actions_) a = r.f32();
        return step_result(&pool_.step(actions_));
      }
      default:
        return error(ErrorCode::kUnexpected, "unexpected message type from client");
    }
  } catch (const Error& e) {
    return error(ErrorCode::kInternal, e.what());
  }
}

TcpServer::TcpServer(SessionFactory factory, ServerOptions options)
    : factory_(std::move(factory)), options_(std::move(options)) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw Error(std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(options_.port));
  if (::inet_pton(AF_INET, options_.host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw Error("invalid listen address: " + options_.host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listen_fd_, 8) != 0) {
    const std::string msg = std::strerror(errno);
    ::close(listen_fd_);
    throw Error("cannot listen on " + options_.host + ":" + std::to_string(options_.port) +
                ": " + msg);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpServer::~TcpServer() {
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void TcpServer::stop() {
  stopping_ = true;
  if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
}

void TcpServer::serve() {
  log_event(options_, {{"event", "listening"}, {"host", options_.host}, {"port", port_}});
  int served = 0;
  while (!stopping_ && (options_.max_connections < 0 || served < options_.max_connections)) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      break;
    }
    set_nodelay(fd);
    log_event(options_, {{"event", "connected"}, {"connection", served}});
    serve_connection(fd);
    ::close(fd);
    log_event(options_, {{"event", "closed"}, {"connection", served}});
    ++served;
  }
}

void TcpServer::serve_connection(int fd) {
  std::unique_ptr<Session> session;
  try {
    session = factory_();
  } catch (const Error& e) {
    write_all(fd, wire::encode_error(ErrorCode::kInternal, e.what()));
    return;
  }
  std::array<std::uint8_t, wire::kHeaderSize> head{};
  std::vector<std::uint8_t> payload;
  while (!stopping_) {
    if (!read_exact(fd, head.data(), head.size())) return;
    const wire::HeaderParse parsed = wire::parse_header(head);
    const std::uint32_t len = parsed.header.payload_len;
    if (len > wire::kMaxPayload) {
      write_all(fd, wire::encode_error(ErrorCode::kMalformed, "payload too large"));
      return;
    }
    payload.resize(len);
    if (len > 0 && !read_exact(fd, payload.data(), len)) return;
    const Session::Reply reply =
        parsed.ok ? session->handle(parsed.header, payload) : session->reject(parsed.error);
    if (!write_all(fd, reply.bytes) || reply.close) return;
  }
}

EnvClient::EnvClient(const std::string& host, int port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw Error(std::string("socket: ") + std::strerror(errno));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1 ||
      ::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd_);
    throw Error("cannot connect to " + host + ":" + std::to_string(port));
  }
  set_nodelay(fd_);
}

EnvClient::~EnvClient() {
  if (fd_ >= 0) ::close(fd_);
}

void EnvClient::send_bytes(std::span<const std::uint8_t> bytes) {
  if (!write_all(fd_, bytes)) throw Error("connection lost while sending");
}

wire::Frame EnvClient::receive() {
  std::array<std::uint8_t, wire::kHeaderSize> head{};
  if (!read_exact(fd_, head.data(), head.size())) throw Error("connection closed by server");
  const wire::HeaderParse parsed = wire::parse_header(head);
  if (!parsed.ok) throw Error("bad frame from server: " + parsed.error);
  wire::Frame f;
  f.header = parsed.header;
  f.payload.resize(parsed.header.payload_len);
  if (!f.payload.empty() && !read_exact(fd_, f.payload.data(), f.payload.size())) {
    throw Error("connection closed by server");
  }
  transcript_.insert(transcript_.end(), head.begin(), head.end());
  transcript_.insert(transcript_.end(), f.payload.begin(), f.payload.end());
  return f;
}

wire::SpecMessage EnvClient::hello() {
  send_bytes(wire::encode_frame(MsgType::kHello, 0, {}));
  wire::Frame f = receive();
  if (f.header.type == MsgType::kError) {
    throw Error("server error: " + wire::decode_error(f.payload).second);
  }
  if (f.header.type != MsgType::kSpec) throw Error("expected Spec from server");
  wire::SpecMessage spec = wire::decode_spec(f.payload);
  env_count_ = f.header.env_count;
  obs_dim_ = spec.obs_dim;
  return spec;
}

wire::StepResultMessage EnvClient::expect_step_result(wire::Frame f) {
  if (f.header.type == MsgType::kError) {
    throw Error("server error: " + wire::decode_error(f.payload).second);
  }
  if (f.header.type != MsgType::kStepResult) throw Error("expected StepResult from server");
  return wire::decode_step_result(f.header.env_count, obs_dim_, f.payload);
}

wire::StepResultMessage EnvClient::reset(std::uint64_t base_seed) {
  wire::Writer w;
  w.u64(base_seed);
  send_bytes(wire::encode_frame(MsgType::kReset, env_count_, w.data()));
  return expect_step_result(receive());
}

wire::StepResultMessage EnvClient::step(std::span<const float> actions) {
  wire::Writer w;
  for (float a : actions) w.f32(a);
  send_bytes(wire::encode_frame(MsgType::kStep, env_count_, w.data()));
  return expect_step_result(receive());
}

}  // namespace hbench
