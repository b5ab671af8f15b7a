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

#include <atomic>
#include <thread>

#include "anthro/error.h"
#include "anthro/models.h"
#include "gtest/gtest.h"
#include "httplib.h"
#include "json.hpp"
#include "support/synthetic.h"

namespace anthro {
namespace {

class FixedScorer : public Scorer {
 public:
  std::vector<Probabilities> score(std::span<const std::string> texts) const override {
    return std::vector<Probabilities>(texts.size(), Probabilities{0.3, 0.7});
  }
  const std::vector<std::string>& label_names() const override { return labels_; }

 private:
  std::vector<std::string> labels_ = {"neg", "pos"};
};

// Encodes the text's index (parsed from the text) in the probabilities.
class IndexScorer : public Scorer {
 public:
  std::vector<Probabilities> score(std::span<const std::string> texts) const override {
    std::vector<Probabilities> out;
    for (const auto& t : texts) {
      const double v = t.empty() ? 0.0 : std::stod(t) / 10000.0;
      out.push_back({v, 1.0 - v});
    }
    return out;
  }
  const std::vector<std::string>& label_names() const override { return labels_; }

 private:
  std::vector<std::string> labels_ = {"a", "b"};
};

// A raw server with a programmable handler.
class RawServer {
 public:
  explicit RawServer(httplib::Server::Handler handler) {
    server_.Post("/score", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~RawServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/score"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(EndpointTest, Parsing) {
  const auto e = parse_endpoint("http://localhost:8080/v1/score");
  EXPECT_EQ(e.origin, "http://localhost:8080");
  EXPECT_EQ(e.path, "/v1/score");
  EXPECT_EQ(parse_endpoint("http://example.com").path, "/");
  EXPECT_THROW(parse_endpoint("ftp://x/y"), Error);
  EXPECT_THROW(parse_endpoint("localhost:8080"), Error);
}

TEST(RemoteScorerTest, FixedReplyForEveryText) {
  const FixedScorer local;
  StubServer server(local);
  server.start();
  RemoteScorer remote({.endpoint = server.url(), .label_names = {"neg", "pos"}});
  const std::vector<std::string> texts = {"a", "", "ü ñ \"quoted\"\n", "d"};
  const auto probs = remote.score(texts);
  ASSERT_EQ(probs.size(), texts.size());
  for (const auto& p : probs) EXPECT_EQ(p, (Probabilities{0.3, 0.7}));
  EXPECT_EQ(remote.label_names(), (std::vector<std::string>{"neg", "pos"}));
  server.stop();
}

TEST(RemoteScorerTest, DiscoversLabelCountByProbing) {
  const FixedScorer local;
  StubServer server(local);
  server.start();
  RemoteScorer remote({.endpoint = server.url(), .label_names = {}});
  EXPECT_EQ(remote.label_names(), (std::vector<std::string>{"0", "1"}));
  EXPECT_EQ(remote.requests_sent(), 1u);
  EXPECT_TRUE(remote.score({}).empty());
}

TEST(RemoteScorerTest, ChunksLargeBatchesInOrder) {
  const IndexScorer local;
  StubServer server(local, {.max_batch = 64});
  server.start();
  RemoteScorer remote({.endpoint = server.url(), .max_batch = 64, .label_names = {"a", "b"}});
  std::vector<std::string> texts;
  for (int i = 0; i < 1000; ++i) texts.push_back(std::to_string(i));
  const auto probs = remote.score(texts);
  ASSERT_EQ(probs.size(), 1000u);
  for (int i = 0; i < 1000; ++i) EXPECT_DOUBLE_EQ(probs[i][0], i / 10000.0) << i;
  EXPECT_EQ(remote.requests_sent(), 16u);
}

TEST(RemoteScorerTest, OversizedBatchIsRejectedByServer) {
  const IndexScorer local;
  StubServer server(local, {.max_batch = 10});
  server.start();
  RemoteScorer remote({.endpoint = server.url(), .max_batch = 11, .label_names = {"a", "b"}});
  std::vector<std::string> texts(11, "1");
  EXPECT_EQ(code_of([&] { remote.score(texts); }), ErrorCode::kTransport);
  EXPECT_EQ(remote.requests_sent(), 1u);  // 4xx is not retried
}

TEST(RemoteScorerTest, MatchesLocalScorerExactly) {
  const auto world = testing::make_rigged_world(3, 100, 50);
  const auto model = train_bow(world.train);
  StubServer server(model);
  server.start();
  RemoteScorer remote({.endpoint = server.url(), .label_names = model.label_names()});
  std::vector<std::string> texts;
  for (const auto& ex : world.test) texts.push_back(ex.text);
  const auto want = model.score(texts);
  const auto got = remote.score(texts);
  ASSERT_EQ(got.size(), want.size());
  for (size_t i = 0; i < got.size(); ++i) {
    for (size_t j = 0; j < 2; ++j) EXPECT_NEAR(got[i][j], want[i][j], 1e-12);
  }
}

TEST(RemoteScorerTest, MalformedReplies) {
  for (const std::string body :
       {"not json", "{}", "{\"probabilities\": [[0.5, 0.6]]}", "{\"probabilities\": []}",
        "{\"probabilities\": [[\"x\", 1]]}", "{\"probabilities\": [[-0.5, 1.5]]}"}) {
    RawServer server([body](const httplib::Request&, httplib::Response& res) {
      res.set_content(body, "application/json");
    });
    RemoteScorer remote({.endpoint = server.url(), .label_names = {"a", "b"}});
    EXPECT_EQ(code_of([&] { remote.score_one("x"); }), ErrorCode::kMalformedResponse) << body;
  }
}

TEST(RemoteScorerTest, RetriesServerErrors) {
  std::atomic<int> calls{0};
  RawServer server([&](const httplib::Request&, httplib::Response& res) {
    if (calls++ < 2) {
      res.status = 503;
      return;
    }
    res.set_content("{\"probabilities\": [[0.25, 0.75]]}", "application/json");
  });
  RemoteScorer remote({.endpoint = server.url(), .retries = 2, .label_names = {"a", "b"}});
  EXPECT_EQ(remote.score_one("x"), (Probabilities{0.25, 0.75}));
  EXPECT_EQ(calls.load(), 3);

  calls = 0;
  RemoteScorer impatient({.endpoint = server.url(), .retries = 1, .label_names = {"a", "b"}});
  EXPECT_EQ(code_of([&] { impatient.score_one("x"); }), ErrorCode::kTransport);
  EXPECT_EQ(calls.load(), 2);
}

TEST(RemoteScorerTest, SlowServerTimesOut) {
  RawServer server([](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(600));
    res.set_content("{\"probabilities\": [[0.5, 0.5]]}", "application/json");
  });
  RemoteScorer remote({.endpoint = server.url(),
                       .timeout = std::chrono::milliseconds(150),
                       .retries = 0,
                       .label_names = {"a", "b"}});
  EXPECT_EQ(code_of([&] { remote.score_one("x"); }), ErrorCode::kTimeout);
}

TEST(RemoteScorerTest, UnreachableServerIsTransportFailure) {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  RemoteScorer remote({.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/score",
                       .timeout = std::chrono::milliseconds(500),
                       .retries = 1,
                       .label_names = {"a", "b"}});
  const auto code = code_of([&] { remote.score_one("x"); });
  EXPECT_TRUE(code == ErrorCode::kTransport || code == ErrorCode::kTimeout);
  EXPECT_EQ(remote.requests_sent(), 2u);
}

TEST(StubServerTest, SpeaksTheWireProtocol) {
  const FixedScorer local;
  StubServer server(local);
  server.start();
  httplib::Client client("127.0.0.1", server.port());
  auto res = client.Post("/score", "{\"texts\": [\"a\", \"b\"]}", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const auto reply = nlohmann::json::parse(res->body);
  EXPECT_EQ(reply["probabilities"].size(), 2u);
  res = client.Post("/score", "{\"txt\": 1}", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  res = client.Post("/other", "{\"texts\": []}", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
}

}  // namespace
}  // namespace anthro
