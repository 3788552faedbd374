// Copyright 2026 The qamut Authors
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

// Client for a remote QUBO sampling service, plus an in-process mock of
// that service.
//
// Wire protocol, one POST to /sample:
//   request   {"qubo": {n, linear, quadratic: [[i, j, v]], offset},
//              "num_reads": R}
//   response  {"samples": [{"bits": [0|1], "energy": e, "occurrences": c}],
//              "timing": {"access_seconds": s}}

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>

#include <httplib.h>

#include "qamut/error.hpp"
#include "qamut/io.hpp"
#include "qamut/qubo.hpp"
#include "qamut/samplers.hpp"

namespace qamut {

inline constexpr double kRemoteEnergyTolerance = 1e-6;

struct RemoteEndpoint {
  std::string host = "127.0.0.1";
  int port = 0;

  // Accepts "host:port" with an optional "http://" prefix.
  static RemoteEndpoint parse(std::string s) {
    if (s.starts_with("http://")) s.erase(0, 7);
    if (!s.empty() && s.back() == '/') s.pop_back();
    const auto colon = s.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == s.size())
      throw ConfigurationError("endpoint '" + s + "' is not host:port");
    RemoteEndpoint e;
    e.host = s.substr(0, colon);
    try {
      std::size_t used = 0;
      e.port = std::stoi(s.substr(colon + 1), &used);
      if (used != s.size() - colon - 1) throw std::invalid_argument("port");
    } catch (const std::exception&) {
      throw ConfigurationError("endpoint '" + s + "' has a bad port");
    }
    if (e.port <= 0 || e.port > 65535)
      throw ConfigurationError("endpoint port out of range");
    return e;
  }

  std::string str() const { return host + ":" + std::to_string(port); }
};

inline Json sample_request(const Qubo& q, std::size_t reads) {
  return {{"qubo", to_json(q)}, {"num_reads", reads}};
}

// Validates a response body against q: every sample must have n bits and an
// energy within kRemoteEnergyTolerance of the local value.
inline SampleSet parse_sample_response(const Qubo& q, const std::string& body) {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw IntegrityError(std::string("unparseable sampler response: ") +
                         e.what());
  }
  SampleSet set;
  set.solver_name = "remote";
  try {
    const Json& samples = j.at("samples");
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const Json& s = samples[k];
      Selection sel = selection_from_json(s.at("bits"));
      if (sel.size() != q.size())
        throw IntegrityError("sample " + std::to_string(k) + " has " +
                             std::to_string(sel.size()) + " bits, expected " +
                             std::to_string(q.size()));
      const double reported = s.at("energy").get<double>();
      const double local = energy(q, sel);
      if (!(std::abs(reported - local) <= kRemoteEnergyTolerance))
        throw IntegrityError("sample " + std::to_string(k) +
                             " reports energy " + std::to_string(reported) +
                             " but the QUBO gives " + std::to_string(local));
      set.samples.push_back(
          {std::move(sel), local, s.value("occurrences", std::size_t{1})});
    }
    set.solver_time = j.at("timing").value("access_seconds", 0.0);
  } catch (const Json::exception& e) {
    throw IntegrityError(std::string("malformed sampler response: ") +
                         e.what());
  } catch (const SpecificationError& e) {
    throw IntegrityError(e.what());
  } catch (const ShapeError& e) {
    throw IntegrityError(e.what());
  }
  if (set.samples.empty()) throw IntegrityError("sampler returned no samples");
  std::sort(set.samples.begin(), set.samples.end(), sample_before);
  return set;
}

// Blocking call with connect, read and write timeouts of `timeout_seconds`.
// Connection failures and timeouts raise a retryable TransportError.
inline SampleSet submit_remote(const Qubo& q, std::size_t reads,
                               const RemoteEndpoint& endpoint,
                               double timeout_seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  httplib::Client cli(endpoint.host, endpoint.port);
  const auto timeout = std::chrono::duration<double>(timeout_seconds);
  const auto us = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
  cli.set_connection_timeout(us);
  cli.set_read_timeout(us);
  cli.set_write_timeout(us);
  auto res = cli.Post("/sample", sample_request(q, reads).dump(),
                      "application/json");
  if (!res)
    throw TransportError("sampler at " + endpoint.str() + " unreachable: " +
                             httplib::to_string(res.error()),
                         true);
  if (res->status != 200)
    throw TransportError("sampler at " + endpoint.str() + " answered HTTP " +
                             std::to_string(res->status) + ": " + res->body,
                         res->status >= 500);
  SampleSet set = parse_sample_response(q, res->body);
  set.wall_time = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  return set;
}

// Local stand-in for the sampling service. The exact backend returns the full
// energy frontier regardless of num_reads; the annealing backend performs
// num_reads restarts with a per-request seed. With corruption enabled, the
// first sample of every response carries a wrong energy.
class MockSamplerServer {
 public:
  enum class Backend { kExact, kAnnealing };

  struct Options {
    Backend backend = Backend::kExact;
    bool corrupt = false;
    std::size_t sweeps = 200;
    std::uint64_t seed = 0;
    double response_delay = 0.0;  // seconds slept before answering
    int port = 0;                 // 0 picks a free port
    std::string host = "127.0.0.1";
  };

  MockSamplerServer() : MockSamplerServer(Options{}) {}
  explicit MockSamplerServer(Options opt) : opt_(opt) {
    server_.Post("/sample", [this](const httplib::Request& req,
                                   httplib::Response& res) {
      handle(req, res);
    });
    if (opt_.port > 0) {
      port_ = server_.bind_to_port(opt_.host, opt_.port) ? opt_.port : -1;
    } else {
      port_ = server_.bind_to_any_port(opt_.host);
    }
    if (port_ <= 0) throw TransportError("mock sampler could not bind", false);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  MockSamplerServer(const MockSamplerServer&) = delete;
  MockSamplerServer& operator=(const MockSamplerServer&) = delete;

  ~MockSamplerServer() { stop(); }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  RemoteEndpoint endpoint() const { return {opt_.host, port_}; }
  std::size_t requests() const { return requests_.load(); }
  void set_corrupt(bool c) { corrupt_.store(c); }

 private:
  void handle(const httplib::Request& req, httplib::Response& res) {
    const std::uint64_t call = requests_.fetch_add(1);
    if (opt_.response_delay > 0)
      std::this_thread::sleep_for(
          std::chrono::duration<double>(opt_.response_delay));
    try {
      const Json body = Json::parse(req.body);
      const Qubo q = qubo_from_json(body.at("qubo"));
      const auto reads = body.value("num_reads", std::size_t{1});
      SampleSet set;
      if (opt_.backend == Backend::kExact) {
        set = solve_exact(q);
      } else {
        AnnealParams p;
        p.num_reads = std::max<std::size_t>(1, reads);
        p.sweeps = opt_.sweeps;
        p.seed = derive_seed(opt_.seed, {call});
        set = solve_sa(q, p);
      }
      Json out = to_json(set);
      if ((opt_.corrupt || corrupt_.load()) && !out["samples"].empty())
        out["samples"][0]["energy"] =
            out["samples"][0]["energy"].get<double>() + 0.5;
      res.set_content(Json{{"samples", out["samples"]},
                           {"timing", {{"access_seconds", set.solver_time}}}}
                          .dump(),
                      "application/json");
    } catch (const CapacityError& e) {
      res.status = 413;
      res.set_content(e.what(), "text/plain");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(e.what(), "text/plain");
    }
  }

  Options opt_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<std::uint64_t> requests_{0};
  std::atomic<bool> corrupt_{false};
};

}  // namespace qamut
