/*
 * Copyright 2026 The groupwise-secagg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GSA_NET_SOCKET_H_
#define GSA_NET_SOCKET_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "gsa/net/wire.h"

namespace gsa::net {

using Clock = std::chrono::steady_clock;

// "host:port"; throws Error(kInvalidArgument).
struct Endpoint {
  std::string host = "127.0.0.1";
  uint16_t port = 0;
  static Endpoint Parse(const std::string& text);
  std::string ToString() const;
};

// Owning TCP socket. Blocking I/O bounded by poll() deadlines.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { Close(); }

  static Socket Listen(const Endpoint& at, int backlog = 64);
  // Retries refused connections until `deadline`. Throws
  // Error(kConnectionLost).
  static Socket Connect(const Endpoint& to, Clock::time_point deadline);

  bool valid() const { return fd_ >= 0; }
  int fd() const { return fd_; }
  uint16_t LocalPort() const;
  void Close();
  // Stops pending and future reads and writes from other threads.
  void Shutdown();

  // nullopt when the deadline passes first.
  std::optional<Socket> Accept(Clock::time_point deadline);
  // Throws Error(kConnectionLost).
  void SendAll(std::span<const uint8_t> bytes);
  // false on timeout; throws Error(kConnectionLost) on EOF or error.
  bool RecvExact(std::span<uint8_t> out, Clock::time_point deadline);

 private:
  int fd_ = -1;
};

// Sends one frame; returns the bytes written.
size_t WriteFrame(Socket& s, const Frame& frame);

// Reads one frame. Never reads past the header when payload_len exceeds
// `max_payload`; that raises Error(kProtocolViolation). nullopt on timeout.
std::optional<Frame> ReadFrame(Socket& s, Clock::time_point deadline,
                               uint32_t max_payload);

}  // namespace gsa::net

#endif  // GSA_NET_SOCKET_H_
