// Copyright 2026 The tempograph Authors
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

#pragma once

// Plain TCP plumbing for the line protocol (POSIX sockets).

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <functional>
#include <istream>
#include <list>
#include <mutex>
#include <streambuf>
#include <string>
#include <string_view>
#include <thread>
#include <utility>

#include "tempograph/channel.hpp"
#include "tempograph/line_protocol.hpp"

namespace tempograph::net {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

/// Parses "tcp:HOST:PORT" (the "tcp:" prefix is optional).
inline Endpoint parse_endpoint(std::string_view spec) {
  if (spec.rfind("tcp:", 0) == 0) spec.remove_prefix(4);
  auto colon = spec.rfind(':');
  if (colon == std::string_view::npos || colon + 1 >= spec.size())
    throw Error("bad endpoint '" + std::string(spec) + "', expected tcp:HOST:PORT");
  Endpoint ep;
  ep.host = std::string(spec.substr(0, colon));
  if (ep.host.empty()) ep.host = "0.0.0.0";
  unsigned long port = 0;
  for (char c : spec.substr(colon + 1)) {
    if (c < '0' || c > '9') throw Error("bad port in '" + std::string(spec) + "'");
    port = port * 10 + static_cast<unsigned long>(c - '0');
    if (port > 65535) throw Error("port out of range in '" + std::string(spec) + "'");
  }
  ep.port = static_cast<std::uint16_t>(port);
  return ep;
}

/// Owning socket descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket() { reset(); }
  Socket(Socket&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Socket& operator=(Socket&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const noexcept { return fd_; }
  bool valid() const noexcept { return fd_ >= 0; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }
  void shutdown_both() {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
  }

  void write_all(std::string_view data) {
    while (!data.empty()) {
      ssize_t n = ::send(fd_, data.data(), data.size(), MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw Error(std::string("send failed: ") + std::strerror(errno));
      }
      data.remove_prefix(static_cast<std::size_t>(n));
    }
  }

 private:
  int fd_ = -1;
};

/// Read side of a socket as a std::streambuf.
class SocketStreamBuf : public std::streambuf {
 public:
  explicit SocketStreamBuf(int fd) : fd_(fd) {}

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    for (;;) {
      ssize_t n = ::recv(fd_, buf_.data(), buf_.size(), 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return traits_type::eof();
      setg(buf_.data(), buf_.data(), buf_.data() + n);
      return traits_type::to_int_type(*gptr());
    }
  }

 private:
  int fd_;
  std::array<char, 1 << 14> buf_{};
};

inline Socket connect_tcp(const Endpoint& ep) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  std::string port = std::to_string(ep.port);
  if (int rc = ::getaddrinfo(ep.host.c_str(), port.c_str(), &hints, &res); rc != 0)
    throw Error("cannot resolve " + ep.host + ": " + gai_strerror(rc));
  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    Socket s(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
    if (!s.valid()) continue;
    if (::connect(s.fd(), ai->ai_addr, ai->ai_addrlen) == 0) {
      ::freeaddrinfo(res);
      return s;
    }
    last_error = std::strerror(errno);
  }
  ::freeaddrinfo(res);
  throw Error("cannot connect to " + ep.host + ":" + port + ": " + last_error);
}

class Listener {
 public:
  explicit Listener(const Endpoint& ep) {
    sock_ = Socket(::socket(AF_INET, SOCK_STREAM, 0));
    if (!sock_.valid()) throw Error(std::string("socket: ") + std::strerror(errno));
    int one = 1;
    ::setsockopt(sock_.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(ep.port);
    if (::inet_pton(AF_INET, ep.host.c_str(), &addr.sin_addr) != 1)
      throw Error("listen address must be an IPv4 literal: " + ep.host);
    if (::bind(sock_.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
      throw Error("bind " + ep.host + ":" + std::to_string(ep.port) + ": " + std::strerror(errno));
    if (::listen(sock_.fd(), 16) != 0) throw Error(std::string("listen: ") + std::strerror(errno));
  }

  /// Bound port (useful when constructed with port 0).
  std::uint16_t port() const {
    sockaddr_in addr{};
    socklen_t len = sizeof addr;
    ::getsockname(sock_.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
    return ntohs(addr.sin_port);
  }

  /// Waits up to `timeout_ms` for a connection; invalid Socket on timeout.
  Socket accept(int timeout_ms) {
    pollfd p{sock_.fd(), POLLIN, 0};
    int rc = ::poll(&p, 1, timeout_ms);
    if (rc <= 0) return Socket{};
    return Socket(::accept(sock_.fd(), nullptr, nullptr));
  }

 private:
  Socket sock_;
};

/// Accepts producers on a TCP endpoint and funnels their line-protocol
/// events into one channel. One connection is one producer; each is read
/// on its own thread.
class TcpEventSource {
 public:
  using WarningSink = std::function<void(const std::string&)>;

  TcpEventSource(const Endpoint& ep, Channel<Event>& out, WarningSink warn = {})
      : listener_(ep), out_(out), warn_(std::move(warn)) {
    acceptor_ = std::thread([this] { accept_loop(); });
  }
  ~TcpEventSource() { stop(); }
  TcpEventSource(const TcpEventSource&) = delete;
  TcpEventSource& operator=(const TcpEventSource&) = delete;

  std::uint16_t port() const { return listener_.port(); }

  void stop() {
    if (stopping_.exchange(true)) return;
    if (acceptor_.joinable()) acceptor_.join();
    {
      std::lock_guard lock(mu_);
      for (auto& c : conns_) c.sock.shutdown_both();
    }
    for (auto& c : conns_)
      if (c.reader.joinable()) c.reader.join();
  }

 private:
  struct Connection {
    Socket sock;
    std::thread reader;
  };

  void warn(const std::string& m) {
    if (warn_) {
      std::lock_guard lock(warn_mu_);
      warn_(m);
    }
  }

  void accept_loop() {
    while (!stopping_) {
      Socket s = listener_.accept(100);
      if (!s.valid()) continue;
      std::lock_guard lock(mu_);
      conns_.push_back(Connection{std::move(s), {}});
      Connection& c = conns_.back();
      int fd = c.sock.fd();
      c.reader = std::thread([this, fd] {
        SocketStreamBuf buf(fd);
        std::istream in(&buf);
        LineReader reader(in, [this](const std::string& m) { warn(m); });
        while (auto e = reader.next()) {
          if (!out_.push(std::move(*e))) break;
        }
      });
    }
  }

  Listener listener_;
  Channel<Event>& out_;
  WarningSink warn_;
  std::mutex warn_mu_;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex mu_;
  std::list<Connection> conns_;
};

}  // namespace tempograph::net
