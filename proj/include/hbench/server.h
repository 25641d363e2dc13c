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


#ifndef HBENCH_SERVER_H_
#define HBENCH_SERVER_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hbench/env_pool.h"
#include "hbench/protocol.h"

namespace hbench {

struct SessionOptions {
  int num_envs = 1;
  int num_threads = 1;
  std::uint64_t base_seed = 0;
};

// Transport-free protocol state machine for one connection.
class Session {
 public:
  Session(TaskSpec task, EnvOptions env, SessionOptions options, BackendFactory factory = {});

  struct Reply {
    std::vector<std::uint8_t> bytes;
    bool close = false;
  };

  // Handles a frame whose header parsed.
  Reply handle(const wire::Header& header, std::span<const std::uint8_t> payload);
  // Handles a frame whose header was rejected by wire::parse_header.
  Reply reject(const std::string& reason);

  EnvPool& pool() { return pool_; }
  wire::SpecMessage spec() const;

 private:
  Reply error(wire::ErrorCode code, const std::string& message, bool close = false);
  Reply step_result(const std::vector<EnvSlotResult>* results);

  TaskSpec task_;
  SessionOptions options_;
  EnvPool pool_;
  bool reset_done_ = false;
  std::vector<double> actions_;
  wire::StepResultMessage message_;  // reused across steps
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 0;              // 0 picks a free port
  int max_connections = -1;  // stop after this many; -1 serves forever
  bool log = true;           // one JSON line per connection event on stderr
};

// Blocking TCP server; connections are served one at a time, each with a
// fresh Session.
class TcpServer {
 public:
  using SessionFactory = std::function<std::unique_ptr<Session>()>;

  // Binds and listens; throws Error on failure.
  TcpServer(SessionFactory factory, ServerOptions options);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  int port() const { return port_; }
  void serve();
  void stop();

 private:
  void serve_connection(int fd);

  SessionFactory factory_;
  ServerOptions options_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> stopping_{false};
};

// Blocking client for the wire protocol.
class EnvClient {
 public:
  EnvClient(const std::string& host, int port);
  ~EnvClient();
  EnvClient(const EnvClient&) = delete;
  EnvClient& operator=(const EnvClient&) = delete;

  wire::SpecMessage hello();
  wire::StepResultMessage reset(std::uint64_t base_seed);
  wire::StepResultMessage step(std::span<const float> actions);

  // Raw access for protocol tests.
  void send_bytes(std::span<const std::uint8_t> bytes);
  wire::Frame receive();
  // Bytes of every frame received so far, in order.
  const std::vector<std::uint8_t>& transcript() const { return transcript_; }

 private:
  wire::StepResultMessage expect_step_result(wire::Frame frame);

  int fd_ = -1;
  std::uint32_t env_count_ = 0;
  std::uint32_t obs_dim_ = 0;
  std::vector<std::uint8_t> transcript_;
};

}  // namespace hbench

#endif  // HBENCH_SERVER_H_
