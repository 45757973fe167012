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

#include "gsa/net/server.h"

#include <atomic>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "gsa/transcript_io.h"

namespace gsa::net {

using nlohmann::json;

namespace {

double MillisBetween(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

[[noreturn]] void Violation(const std::string& what) {
  throw Error(ErrorCode::kProtocolViolation, what);
}

struct Conn {
  Socket sock;
  std::mutex write_mu;
  int user = 0;
  SymbolPacking packing = SymbolPacking::kWord;
  bool closed = false;  // guarded by State::mu

  // Best effort; a peer that has gone away just misses the frame.
  void Send(const Frame& f) {
    std::lock_guard<std::mutex> lock(write_mu);
    try {
      WriteFrame(sock, f);
    } catch (const Error&) {
    }
  }
};

enum class Phase { kRound1, kRound2, kDone };

}  // namespace

struct Server::State {
  ServerOptions opt;
  SchemeParams params;
  uint64_t checksum;
  Socket listener;

  std::mutex mu;
  std::condition_variable cv;
  Phase phase = Phase::kRound1;
  std::vector<std::shared_ptr<Conn>> conns;
  std::map<int, std::shared_ptr<Conn>> by_user;
  std::map<int, std::vector<Residue>> r1;
  std::map<int, std::vector<Residue>> r2;
  std::map<int, size_t> bytes_r1;
  std::map<int, size_t> bytes_r2;
  std::vector<std::string> violations;
  std::optional<Clock::time_point> first_hello;
  Subset u1;

  std::atomic<bool> stop{false};
  std::vector<std::thread> handlers;  // touched by the accept thread only

  explicit State(ServerOptions o)
      : opt(std::move(o)),
        params(opt.fixture->family.params()),
        checksum(FixtureChecksum(*opt.fixture)),
        listener(Socket::Listen(opt.listen)) {}

  uint32_t MaxPayload() const {
    return static_cast<uint32_t>(std::max<int64_t>(16, params.round1_symbols() * 4));
  }

  void Handle(Conn& c, const Frame& f);
  void Serve(const std::shared_ptr<Conn>& c);
  void AcceptLoop();
  void Broadcast(const std::vector<std::shared_ptr<Conn>>& to, const Frame& f) {
    for (const auto& c : to) c->Send(f);
  }
  std::vector<std::shared_ptr<Conn>> OpenConns(const Subset* only) {
    std::lock_guard<std::mutex> lock(mu);
    std::vector<std::shared_ptr<Conn>> out;
    for (const auto& c : conns) {
      if (c->closed) continue;
      if (only && !Contains(*only, c->user)) continue;
      out.push_back(c);
    }
    return out;
  }
};

void Server::State::Handle(Conn& c, const Frame& f) {
  const Residue q = params.modulus();
  switch (f.type) {
    case FrameType::kHello: {
      if (c.user != 0) Violation("second HELLO");
      const int uid = f.user_id;
      if (uid < 1 || uid > params.users()) {
        Violation("HELLO from unknown user " + std::to_string(uid));
      }
      const Hello h = DecodeHello(f.payload);
      if (h.fixture_checksum != checksum) {
        Violation("user " + std::to_string(uid) + " holds keys for another fixture");
      }
      Hello reply;
      reply.fixture_checksum = checksum;
      reply.packing = h.packing == SymbolPacking::kByte && opt.allow_byte_packing &&
                              BytePackingAllowed(q)
                          ? SymbolPacking::kByte
                          : SymbolPacking::kWord;
      {
        std::lock_guard<std::mutex> lock(mu);
        auto it = by_user.find(uid);
        if (it != by_user.end() && !it->second->closed) {
          Violation("user " + std::to_string(uid) + " is already connected");
        }
        c.user = uid;
        c.packing = reply.packing;
        for (const auto& other : conns) {
          if (other.get() == &c) by_user[uid] = other;
        }
        if (!first_hello) first_hello = Clock::now();
      }
      c.Send(Frame{FrameType::kHello, 0, EncodeHello(reply)});
      return;
    }
    case FrameType::kRound1: {
      if (c.user == 0) Violation("ROUND1 before HELLO");
      if (f.user_id != c.user) Violation("ROUND1 user id does not match HELLO");
      const size_t expect = params.round1_symbols() * SymbolWidth(c.packing);
      if (f.payload.size() != expect) {
        Violation("ROUND1 carries " + std::to_string(f.payload.size()) +
                  " bytes, expected " + std::to_string(expect));
      }
      std::vector<Residue> symbols = UnpackSymbols(f.payload, c.packing, q);
      std::lock_guard<std::mutex> lock(mu);
      if (r1.count(c.user)) Violation("duplicate ROUND1");
      if (phase != Phase::kRound1) return;  // late: not in U1
      r1[c.user] = std::move(symbols);
      bytes_r1[c.user] = kHeaderSize + f.payload.size();
      cv.notify_all();
      return;
    }
    case FrameType::kRound2: {
      if (c.user == 0) Violation("ROUND2 before HELLO");
      if (f.user_id != c.user) Violation("ROUND2 user id does not match HELLO");
      const size_t expect = params.round2_symbols() * SymbolWidth(c.packing);
      if (f.payload.size() != expect) {
        Violation("ROUND2 carries " + std::to_string(f.payload.size()) +
                  " bytes, expected " + std::to_string(expect));
      }
      std::vector<Residue> symbols = UnpackSymbols(f.payload, c.packing, q);
      std::lock_guard<std::mutex> lock(mu);
      if (phase == Phase::kRound1) Violation("ROUND2 before SURVIVORS");
      if (!Contains(u1, c.user)) Violation("ROUND2 from a user outside U1");
      if (r2.count(c.user)) Violation("duplicate ROUND2");
      if (phase != Phase::kRound2) return;
      r2[c.user] = std::move(symbols);
      bytes_r2[c.user] = kHeaderSize + f.payload.size();
      cv.notify_all();
      return;
    }
    default:
      Violation(std::string("unexpected ") + FrameTypeName(f.type) + " from a client");
  }
}

void Server::State::Serve(const std::shared_ptr<Conn>& c) {
  try {
    while (!stop) {
      auto f = ReadFrame(c->sock, Clock::now() + std::chrono::milliseconds(100),
                         MaxPayload());
      if (f) Handle(*c, *f);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kProtocolViolation && !stop) {
      {
        std::lock_guard<std::mutex> lock(mu);
        violations.push_back("user " + std::to_string(c->user) + ": " + e.what());
      }
      const std::string msg = e.what();
      c->Send(Frame{FrameType::kError, 0, std::vector<uint8_t>(msg.begin(), msg.end())});
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  c->closed = true;
  c->sock.Shutdown();
  cv.notify_all();
}

void Server::State::AcceptLoop() {
  while (!stop) {
    std::optional<Socket> s;
    try {
      s = listener.Accept(Clock::now() + std::chrono::milliseconds(100));
    } catch (const Error&) {
      return;
    }
    if (!s) continue;
    auto c = std::make_shared<Conn>();
    c->sock = std::move(*s);
    {
      std::lock_guard<std::mutex> lock(mu);
      if (phase != Phase::kRound1) {
        c->Send(Frame{FrameType::kError, 0, {}});
        continue;
      }
      conns.push_back(c);
    }
    handlers.emplace_back([this, c] { Serve(c); });
  }
}

Server::Server(ServerOptions options)
    : state_(std::make_unique<State>(std::move(options))) {}

Server::~Server() = default;

uint16_t Server::port() const { return state_->listener.LocalPort(); }

AggregationRecord Server::Run() {
  State& st = *state_;
  const SchemeParams& p = st.params;
  const Fixture& fx = *st.opt.fixture;
  AggregationRecord rec;
  const Clock::time_point start = Clock::now();
  std::thread acceptor([&st] { st.AcceptLoop(); });

  auto fail = [&](ErrorCode code, const std::string& what) {
    rec.error_code = code;
    rec.error = what;
    const auto to = st.OpenConns(nullptr);
    st.Broadcast(to, Frame{FrameType::kError, 0, std::vector<uint8_t>(what.begin(), what.end())});
  };

  std::unique_lock<std::mutex> lock(st.mu);
  st.cv.wait_until(lock, start + std::chrono::milliseconds(st.opt.timeouts.round1_ms),
                   [&] { return st.r1.size() == static_cast<size_t>(p.users()); });
  st.phase = Phase::kRound2;
  const Clock::time_point t_r1 = Clock::now();
  const Clock::time_point t0 = st.first_hello.value_or(start);
  std::vector<Round1Message> round1;
  for (const auto& [k, sym] : st.r1) {
    st.u1.push_back(k);
    round1.push_back(Round1Message{k, sym});
  }
  rec.u1 = st.u1;
  rec.bytes_r1 = st.bytes_r1;
  rec.round1_ms = MillisBetween(t0, t_r1);
  lock.unlock();

  std::optional<Round1Aggregate> agg;
  if (rec.u1.size() < static_cast<size_t>(p.min_survivors())) {
    fail(ErrorCode::kTooFewSurvivors,
         "round 1: " + std::to_string(rec.u1.size()) + " survivor(s), need " +
             std::to_string(p.min_survivors()));
  } else {
    agg = ServerRound1Aggregate(p, round1);
    st.Broadcast(st.OpenConns(&rec.u1),
                 Frame{FrameType::kSurvivors, 0, EncodeSurvivors(rec.u1)});
    lock.lock();
    st.cv.wait_until(lock, Clock::now() + std::chrono::milliseconds(st.opt.timeouts.round2_ms), [&] {
      for (int k : st.u1) {
        if (st.r2.count(k)) continue;
        auto it = st.by_user.find(k);
        if (it != st.by_user.end() && !it->second->closed) return false;
      }
      return true;
    });
    st.phase = Phase::kDone;
    std::vector<Round2Message> round2;
    for (const auto& [k, sym] : st.r2) {
      rec.u2.push_back(k);
      round2.push_back(Round2Message{k, rec.u1, sym});
    }
    rec.bytes_r2 = st.bytes_r2;
    lock.unlock();
    const Clock::time_point t_r2 = Clock::now();
    rec.round2_ms = MillisBetween(t_r1, t_r2);

    Transcript t{p, fx.family.seed(), 0, 0, rec.u1, rec.u2, round1, round2, {}, {}};
    if (rec.u2.size() < static_cast<size_t>(p.min_survivors())) {
      fail(ErrorCode::kTooFewSurvivors,
           "round 2: " + std::to_string(rec.u2.size()) + " survivor(s), need " +
               std::to_string(p.min_survivors()));
      t.failure = rec.error;
    } else {
      try {
        rec.sum = ServerDecode(p, fx.family, fx.ums, *agg, round2);
        t.decoded = rec.sum;
      } catch (const Error& e) {
        fail(e.code(), e.what());
        t.failure = rec.error;
      }
    }
    const Clock::time_point t_dec = Clock::now();
    rec.decode_ms = MillisBetween(t_r2, t_dec);
    if (rec.sum) {
      for (const auto& c : st.OpenConns(&rec.u1)) {
        c->Send(Frame{FrameType::kResult, 0, PackSymbols(*rec.sum, c->packing)});
      }
    }
    rec.transcript = std::move(t);
  }
  rec.total_ms = MillisBetween(t0, Clock::now());

  st.stop = true;
  acceptor.join();
  {
    std::lock_guard<std::mutex> guard(st.mu);
    for (const auto& c : st.conns) c->sock.Shutdown();
    rec.violations = st.violations;
  }
  for (auto& th : st.handlers) th.join();
  st.handlers.clear();
  return rec;
}

json AggregationRecord::ToJson() const {
  json j;
  j["U1"] = u1;
  j["U2"] = u2;
  j["ok"] = ok();
  j["sum"] = sum ? json(EncodeSymbolsHex(*sum)) : json(nullptr);
  j["error"] = error_code ? json{{"code", std::string(ErrorCodeName(*error_code))}, {"message", error}}
                          : json(nullptr);
  j["timing_ms"] = {{"round1", round1_ms},
                    {"round2", round2_ms},
                    {"decode", decode_ms},
                    {"total", total_ms}};
  json b1 = json::object(), b2 = json::object();
  for (const auto& [k, n] : bytes_r1) b1[std::to_string(k)] = n;
  for (const auto& [k, n] : bytes_r2) b2[std::to_string(k)] = n;
  j["bytes_r1"] = b1;
  j["bytes_r2"] = b2;
  j["violations"] = violations;
  return j;
}

}  // namespace gsa::net
