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

#include "gsa/net/socket.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "gsa/error.h"

namespace gsa::net {
namespace {

[[noreturn]] void Lost(const std::string& what) {
  throw Error(ErrorCode::kConnectionLost, what + ": " + std::strerror(errno));
}

int MillisUntil(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
      deadline - Clock::now());
  return left.count() < 0 ? 0 : static_cast<int>(std::min<int64_t>(left.count(), 1 << 30));
}

sockaddr_in Resolve(const Endpoint& e) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(e.port);
  if (e.host.empty() || e.host == "*" || e.host == "0.0.0.0") {
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    return addr;
  }
  if (inet_pton(AF_INET, e.host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (getaddrinfo(e.host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "cannot resolve host '" + e.host + "'");
  }
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  freeaddrinfo(res);
  return addr;
}

}  // namespace

Endpoint Endpoint::Parse(const std::string& text) {
  const size_t colon = text.rfind(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "expected host:port, got '" + text + "'");
  }
  Endpoint e;
  e.host = text.substr(0, colon);
  try {
    const int port = std::stoi(text.substr(colon + 1));
    if (port < 0 || port > 65535) throw std::out_of_range("port");
    e.port = static_cast<uint16_t>(port);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "bad port in '" + text + "'");
  }
  return e;
}

std::string Endpoint::ToString() const {
  return host + ":" + std::to_string(port);
}

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    Close();
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

void Socket::Close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void Socket::Shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

Socket Socket::Listen(const Endpoint& at, int backlog) {
  Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!s.valid()) Lost("socket");
  int one = 1;
  ::setsockopt(s.fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  const sockaddr_in addr = Resolve(at);
  if (::bind(s.fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
    Lost("bind " + at.ToString());
  }
  if (::listen(s.fd_, backlog) != 0) Lost("listen");
  return s;
}

Socket Socket::Connect(const Endpoint& to, Clock::time_point deadline) {
  const sockaddr_in addr = Resolve(to);
  for (;;) {
    Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
    if (!s.valid()) Lost("socket");
    if (::connect(s.fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) == 0) {
      int one = 1;
      ::setsockopt(s.fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      return s;
    }
    if ((errno != ECONNREFUSED && errno != EAGAIN) || Clock::now() >= deadline) {
      Lost("connect " + to.ToString());
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

uint16_t Socket::LocalPort() const {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    Lost("getsockname");
  }
  return ntohs(addr.sin_port);
}

std::optional<Socket> Socket::Accept(Clock::time_point deadline) {
  pollfd pfd{fd_, POLLIN, 0};
  for (;;) {
    const int r = ::poll(&pfd, 1, MillisUntil(deadline));
    if (r == 0) return std::nullopt;
    if (r < 0) {
      if (errno == EINTR) continue;
      Lost("poll");
    }
    const int fd = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (errno == EINTR || errno == ECONNABORTED) continue;
      Lost("accept");
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return Socket(fd);
  }
}

void Socket::SendAll(std::span<const uint8_t> bytes) {
  size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      Lost("send");
    }
    sent += static_cast<size_t>(n);
  }
}

bool Socket::RecvExact(std::span<uint8_t> out, Clock::time_point deadline) {
  size_t got = 0;
  pollfd pfd{fd_, POLLIN, 0};
  // Once bytes have arrived the rest may trail the deadline a little.
  Clock::time_point grace = deadline;
  while (got < out.size()) {
    const int r = ::poll(&pfd, 1, MillisUntil(got == 0 ? deadline : grace));
    if (r == 0) {
      if (got == 0) return false;
      if (Clock::now() < grace) continue;
      errno = ETIMEDOUT;
      Lost("partial frame");
    }
    if (r < 0) {
      if (errno == EINTR) continue;
      Lost("poll");
    }
    const ssize_t n = ::recv(fd_, out.data() + got, out.size() - got, 0);
    if (n == 0) {
      errno = ECONNRESET;
      Lost("peer closed");
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      Lost("recv");
    }
    if (got == 0) grace = std::max(deadline, Clock::now() + std::chrono::seconds(10));
    got += static_cast<size_t>(n);
  }
  return true;
}

size_t WriteFrame(Socket& s, const Frame& frame) {
  const std::vector<uint8_t> bytes = EncodeFrame(frame);
  s.SendAll(bytes);
  return bytes.size();
}

std::optional<Frame> ReadFrame(Socket& s, Clock::time_point deadline,
                               uint32_t max_payload) {
  std::array<uint8_t, kHeaderSize> head{};
  if (!s.RecvExact(head, deadline)) return std::nullopt;
  const FrameHeader h = DecodeHeader(head);
  if (h.payload_len > max_payload) {
    throw Error(ErrorCode::kProtocolViolation,
                std::string(FrameTypeName(h.type)) + " payload of " +
                    std::to_string(h.payload_len) + " bytes exceeds " +
                    std::to_string(max_payload));
  }
  Frame f{h.type, h.user_id, std::vector<uint8_t>(h.payload_len)};
  const auto body_deadline = std::max(deadline, Clock::now() + std::chrono::seconds(10));
  if (h.payload_len > 0 && !s.RecvExact(f.payload, body_deadline)) {
    throw Error(ErrorCode::kConnectionLost, "frame body timed out");
  }
  return f;
}

}  // namespace gsa::net
