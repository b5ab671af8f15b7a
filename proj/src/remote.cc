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

#include "anthro/remote.h"

#include <thread>

#include "anthro/error.h"
#include "httplib.h"
#include "json.hpp"

namespace anthro {
namespace {

using json = nlohmann::json;

std::string dump(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace

Endpoint parse_endpoint(std::string_view url) {
  constexpr std::string_view kScheme = "http://";
  if (url.substr(0, kScheme.size()) != kScheme) {
    throw Error(ErrorCode::kInvalidArgument, "endpoint must start with http://");
  }
  const auto rest = url.substr(kScheme.size());
  const auto slash = rest.find('/');
  const auto authority = rest.substr(0, slash);
  if (authority.empty()) throw Error(ErrorCode::kInvalidArgument, "endpoint has no host");
  Endpoint out;
  out.origin = std::string(kScheme) + std::string(authority);
  out.path = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));
  return out;
}

RemoteScorer::RemoteScorer(RemoteScorerOptions options)
    : options_(std::move(options)),
      endpoint_(parse_endpoint(options_.endpoint)),
      labels_(options_.label_names) {
  if (options_.max_batch == 0) throw Error(ErrorCode::kInvalidArgument, "max_batch must be >= 1");
  if (options_.retries < 0) throw Error(ErrorCode::kInvalidArgument, "retries must be >= 0");
}

size_t RemoteScorer::requests_sent() const {
  std::lock_guard lock(mu_);
  return requests_;
}

const std::vector<std::string>& RemoteScorer::label_names() const {
  {
    std::lock_guard lock(mu_);
    if (!labels_.empty()) return labels_;
  }
  const std::string probe;
  const auto probs = post_chunk(std::span<const std::string>(&probe, 1));
  std::lock_guard lock(mu_);
  if (labels_.empty()) {
    for (size_t i = 0; i < probs.front().size(); ++i) labels_.push_back(std::to_string(i));
  }
  return labels_;
}

std::vector<Probabilities> RemoteScorer::score(std::span<const std::string> texts) const {
  std::vector<Probabilities> out;
  out.reserve(texts.size());
  for (size_t off = 0; off < texts.size(); off += options_.max_batch) {
    const size_t len = std::min(options_.max_batch, texts.size() - off);
    auto chunk = post_chunk(texts.subspan(off, len));
    for (auto& p : chunk) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Probabilities> RemoteScorer::post_chunk(std::span<const std::string> texts) const {
  json request;
  request["texts"] = json::array();
  for (const auto& t : texts) request["texts"].push_back(t);
  const std::string body = dump(request);

  httplib::Client client(endpoint_.origin);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);
  client.set_write_timeout(options_.timeout);

  ErrorCode last_code = ErrorCode::kTransport;
  std::string last_message;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    const auto started = std::chrono::steady_clock::now();
    {
      std::lock_guard lock(mu_);
      ++requests_;
    }
    auto res = client.Post(endpoint_.path, body, "application/json");
    if (!res) {
      const auto err = res.error();
      const auto elapsed = std::chrono::steady_clock::now() - started;
      const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                             (err == httplib::Error::Read && elapsed >= options_.timeout * 9 / 10);
      last_code = timed_out ? ErrorCode::kTimeout : ErrorCode::kTransport;
      last_message = httplib::to_string(err);
      continue;
    }
    if (res->status != 200) {
      last_code = ErrorCode::kTransport;
      last_message = "HTTP " + std::to_string(res->status);
      if (res->status >= 500) continue;
      throw Error(last_code, last_message);
    }

    std::vector<Probabilities> out;
    try {
      const auto reply = json::parse(res->body);
      const auto& rows = reply.at("probabilities");
      if (!rows.is_array() || rows.size() != texts.size()) {
        throw Error(ErrorCode::kMalformedResponse, "probability list has wrong length");
      }
      for (const auto& row : rows) out.push_back(row.get<Probabilities>());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedResponse, e.what());
    }
    std::lock_guard lock(mu_);
    for (const auto& p : out) {
      if (!is_distribution(p) || p.size() != out.front().size() ||
          (!labels_.empty() && p.size() != labels_.size())) {
        throw Error(ErrorCode::kMalformedResponse, "reply is not a probability vector per text");
      }
    }
    return out;
  }
  throw Error(last_code, last_message + " after " + std::to_string(options_.retries + 1) +
                             " attempt(s)");
}

struct StubServer::Impl {
  httplib::Server server;
  std::thread thread;
  bool bound = false;
};

StubServer::StubServer(const Scorer& scorer, StubServerOptions options)
    : impl_(std::make_unique<Impl>()), options_(std::move(options)) {
  const size_t max_batch = options_.max_batch;
  impl_->server.Post(options_.path, [&scorer, max_batch](const httplib::Request& req,
                                                         httplib::Response& res) {
    std::vector<std::string> texts;
    try {
      texts = json::parse(req.body).at("texts").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
      res.status = 400;
      res.set_content(dump(json{{"error", e.what()}}), "application/json");
      return;
    }
    if (max_batch != 0 && texts.size() > max_batch) {
      res.status = 413;
      res.set_content(dump(json{{"error", "batch too large"}}), "application/json");
      return;
    }
    try {
      json reply;
      reply["probabilities"] = scorer.score(texts);
      res.status = 200;
      res.set_content(dump(reply), "application/json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(dump(json{{"error", e.what()}}), "application/json");
    }
  });
}

StubServer::~StubServer() { stop(); }

int StubServer::bind() {
  if (impl_->bound) return port_;
  if (options_.port == 0) {
    port_ = impl_->server.bind_to_any_port(options_.host);
  } else {
    port_ = impl_->server.bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  if (port_ < 0) {
    throw Error(ErrorCode::kTransport, "cannot bind " + options_.host + ":" +
                                           std::to_string(options_.port));
  }
  impl_->bound = true;
  return port_;
}

void StubServer::run() {
  bind();
  impl_->server.listen_after_bind();
}

void StubServer::start() {
  bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void StubServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string StubServer::url() const {
  return "http://" + options_.host + ":" + std::to_string(port_) + options_.path;
}

}  // namespace anthro
