// Copyright 2026 The Anthro Authors
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

#ifndef ANTHRO_REMOTE_H_
#define ANTHRO_REMOTE_H_

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "anthro/scorer.h"

// Wire protocol: POST <endpoint> with {"texts": [...]}, answered by HTTP 200
// and {"probabilities": [[p_0, ..., p_{L-1}], ...]} in request order.

namespace anthro {

struct Endpoint {
  std::string origin;  // scheme://host:port
  std::string path;    // at least "/"
};

// Throws Error(kInvalidArgument) for anything but http://host[:port][/path].
Endpoint parse_endpoint(std::string_view url);

struct RemoteScorerOptions {
  std::string endpoint;
  std::chrono::milliseconds timeout{10000};
  int retries = 2;
  // Texts per request; larger batches are split and reassembled in order.
  size_t max_batch = 256;
  // When empty, labels are named "0".."L-1" after probing the server with one
  // empty text.
  std::vector<std::string> label_names;
};

// Requests are sent one at a time over a single connection per call.
class RemoteScorer final : public Scorer {
 public:
  explicit RemoteScorer(RemoteScorerOptions options);

  // Throws Error(kTransport), Error(kTimeout) or Error(kMalformedResponse).
  std::vector<Probabilities> score(std::span<const std::string> texts) const override;
  const std::vector<std::string>& label_names() const override;

  size_t requests_sent() const;

 private:
  std::vector<Probabilities> post_chunk(std::span<const std::string> texts) const;

  RemoteScorerOptions options_;
  Endpoint endpoint_;
  mutable std::mutex mu_;
  mutable std::vector<std::string> labels_;
  mutable size_t requests_ = 0;
};

struct StubServerOptions {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks a free port
  std::string path = "/score";
  // Batches above this size get HTTP 413; 0 means no limit.
  size_t max_batch = 0;
};

// Serves a local scorer over the wire protocol.
class StubServer {
 public:
  StubServer(const Scorer& scorer, StubServerOptions options = {});
  ~StubServer();
  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  // Binds the socket; throws Error(kTransport) on failure. Returns the port.
  int bind();
  // Serves until stop(); binds first if needed.
  void run();
  // run() on a background thread; returns once the server accepts requests.
  void start();
  void stop();

  int port() const { return port_; }
  std::string url() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  StubServerOptions options_;
  int port_ = -1;
};

}  // namespace anthro

#endif  // ANTHRO_REMOTE_H_
