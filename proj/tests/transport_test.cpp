// Copyright 2026 The lengthgen Authors
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

#include <gtest/gtest.h>

#include <atomic>
#include <set>
#include <thread>

#include "httplib.h"
#include "lengthgen/adapters.hpp"

namespace lengthgen::adapters {
namespace {

std::string stub(const std::string& args) { return std::string(STUB_MODEL_PATH) + " " + args; }

CompletionRequest req(const std::string& id, const std::string& prompt) {
  CompletionRequest r;
  r.id = id;
  r.prompt = prompt;
  r.max_tokens = 64;
  return r;
}

TransportOptions opts(std::size_t parallelism, int timeout_ms = 10000) {
  TransportOptions o;
  o.parallelism = parallelism;
  o.timeout = std::chrono::milliseconds(timeout_ms);
  return o;
}

TEST(Subprocess, EchoMatchesId) {
  auto a = subprocess_adapter(stub("--mode echo"), opts(1));
  const auto r = a->complete(req("id-7", "a\nb\nMARKER-7"));
  EXPECT_EQ(r.id, "id-7");
  EXPECT_EQ(r.completion, "MARKER-7");
  EXPECT_EQ(a->complete(req("id-8", "z")).completion, "z");
}

TEST(Subprocess, PerfectSolverOverTheWire) {
  auto a = subprocess_adapter(stub("--mode perfect"), opts(1));
  EXPECT_EQ(a->complete(req("p", "> > > 0 1 1 0 1 ==\n")).completion, "0 1 0 0 1");
}

TEST(Subprocess, HundredConcurrentRequestsBijective) {
  // The child answers batches of 10 in reverse order, so matching has to go by id.
  auto a = subprocess_adapter(stub("--mode reverse --batch 10"), opts(100));
  ASSERT_EQ(a->parallelism(), 100u);
  std::vector<CompletionResponse> got(100);
  std::vector<std::thread> threads;
  for (int i = 0; i < 100; ++i) {
    threads.emplace_back([&, i] {
      got[static_cast<std::size_t>(i)] = a->complete(req("r" + std::to_string(i), "p\nanswer-" + std::to_string(i)));
    });
  }
  for (auto& t : threads) t.join();
  std::set<std::string> ids;
  for (int i = 0; i < 100; ++i) {
    const auto& r = got[static_cast<std::size_t>(i)];
    EXPECT_EQ(r.id, "r" + std::to_string(i));
    EXPECT_EQ(r.completion, "answer-" + std::to_string(i));
    ids.insert(r.id);
  }
  EXPECT_EQ(ids.size(), 100u);
}

TEST(Subprocess, MalformedLineIsProtocolErrorNamingLine) {
  auto a = subprocess_adapter(stub("--mode malformed"), opts(1));
  try {
    a->complete(req("m", "x"));
    FAIL() << "expected AdapterError";
  } catch (const AdapterError& e) {
    EXPECT_EQ(e.kind(), AdapterError::Kind::kProtocol);
    EXPECT_NE(std::string(e.what()).find("this is not json"), std::string::npos) << e.what();
  }
}

TEST(Subprocess, ExitedChildIsUnavailable) {
  auto a = subprocess_adapter(stub("--mode exit --after 1"), opts(1));
  EXPECT_EQ(a->complete(req("one", "first")).completion, "first");
  try {
    a->complete(req("two", "second"));
    FAIL() << "expected AdapterError";
  } catch (const AdapterError& e) {
    EXPECT_EQ(e.kind(), AdapterError::Kind::kUnavailable);
    EXPECT_TRUE(e.retryable());
  }
  EXPECT_THROW(a->complete(req("three", "third")), AdapterError);
}

TEST(Subprocess, MissingCommandIsUnavailable) {
  auto a = subprocess_adapter("/nonexistent/model-binary", opts(1));
  try {
    a->complete(req("x", "y"));
    FAIL() << "expected AdapterError";
  } catch (const AdapterError& e) {
    EXPECT_EQ(e.kind(), AdapterError::Kind::kUnavailable);
  }
}

TEST(Subprocess, SilentChildTimesOut) {
  auto a = subprocess_adapter(stub("--mode silent"), opts(1, 200));
  try {
    a->complete(req("s", "y"));
    FAIL() << "expected AdapterError";
  } catch (const AdapterError& e) {
    EXPECT_EQ(e.kind(), AdapterError::Kind::kTimeout);
    EXPECT_TRUE(e.retryable());
  }
}

TEST(Subprocess, RequestLineFormat) {
  // Child that copies the request line back as the completion, with quotes
  // and backslashes mapped to ' and / so it survives as a JSON string.
  auto a = subprocess_adapter(
      "while IFS= read -r line; do printf '{\"id\":\"c\",\"completion\":\"%s\"}\\n' \"$(printf %s \"$line\" | "
      "tr '\"\\\\' \"'/\")\"; done",
      opts(1));
  CompletionRequest r = req("c", "hello");
  r.stop = {"\t"};
  const auto got = a->complete(r).completion;
  EXPECT_EQ(got, "{'id':'c','prompt':'hello','max_tokens':64,'stop':['/t'],'temperature':0.0}");
}

class HttpFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/v1/complete", [this](const httplib::Request& rq, httplib::Response& rs) {
      ++calls_;
      last_auth_ = rq.get_header_value("Authorization");
      const auto r = request_from_json(rq.body);
      rs.set_content(response_to_json({r.id, "echo:" + r.prompt}), "application/json");
    });
    server_.Post("/fail", [](const httplib::Request&, httplib::Response& rs) {
      rs.status = 503;
      rs.set_content("overloaded", "text/plain");
    });
    server_.Post("/wrong-id", [](const httplib::Request&, httplib::Response& rs) {
      rs.set_content(R"({"id":"other","completion":"x"})", "application/json");
    });
    server_.Post("/garbage", [](const httplib::Request&, httplib::Response& rs) { rs.set_content("<html>", "text/html"); });
    server_.Post("/slow", [](const httplib::Request&, httplib::Response& rs) {
      std::this_thread::sleep_for(std::chrono::milliseconds(1500));
      rs.set_content(R"({"id":"s","completion":"late"})", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + path; }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> calls_{0};
  std::string last_auth_;
};

TEST_F(HttpFixture, PostsRequestObject) {
  auto a = http_adapter(url("/v1/complete"), {{"Authorization", "Bearer t"}}, opts(4));
  const auto r = a->complete(req("h1", "ping"));
  EXPECT_EQ(r.id, "h1");
  EXPECT_EQ(r.completion, "echo:ping");
  EXPECT_EQ(last_auth_, "Bearer t");
}

TEST_F(HttpFixture, ConcurrentRequestsKeepIds) {
  auto a = http_adapter(url("/v1/complete"), {}, opts(8));
  std::vector<std::thread> threads;
  std::vector<CompletionResponse> got(40);
  for (int i = 0; i < 40; ++i)
    threads.emplace_back([&, i] { got[static_cast<std::size_t>(i)] = a->complete(req("k" + std::to_string(i), std::to_string(i))); });
  for (auto& t : threads) t.join();
  for (int i = 0; i < 40; ++i) EXPECT_EQ(got[static_cast<std::size_t>(i)].completion, "echo:" + std::to_string(i));
  EXPECT_EQ(calls_.load(), 40);
}

TEST_F(HttpFixture, Non2xxIsAdapterError) {
  auto a = http_adapter(url("/fail"), {}, opts(1));
  try {
    a->complete(req("f", "x"));
    FAIL();
  } catch (const AdapterError& e) {
    EXPECT_EQ(e.kind(), AdapterError::Kind::kTransport);
    EXPECT_NE(std::string(e.what()).find("503"), std::string::npos);
  }
}

TEST_F(HttpFixture, IdMismatchAndGarbageAreProtocolErrors) {
  for (const char* path : {"/wrong-id", "/garbage"}) {
    auto a = http_adapter(url(path), {}, opts(1));
    try {
      a->complete(req("w", "x"));
      ADD_FAILURE() << path;
    } catch (const AdapterError& e) {
      EXPECT_EQ(e.kind(), AdapterError::Kind::kProtocol) << path;
    }
  }
}

TEST_F(HttpFixture, SlowServerTimesOut) {
  auto a = http_adapter(url("/slow"), {}, opts(1, 300));
  try {
    a->complete(req("s", "x"));
    FAIL();
  } catch (const AdapterError& e) {
    EXPECT_EQ(e.kind(), AdapterError::Kind::kTimeout) << e.what();
  }
}

TEST(Http, ConnectionRefusedIsUnavailable) {
  // Nothing listens on port 1 (privileged, unassigned in this sandbox).
  auto a = http_adapter("http://127.0.0.1:1/x", {}, opts(1, 1000));
  try {
    a->complete(req("c", "x"));
    FAIL();
  } catch (const AdapterError& e) {
    EXPECT_EQ(e.kind(), AdapterError::Kind::kUnavailable) << e.what();
  }
}

TEST(Http, BadEndpointRejected) { EXPECT_THROW(http_adapter("localhost:80"), ConfigError); }

TEST(Http, EndpointOverride) {
  AdapterSpecOptions o;
  o.endpoint_override = "http://127.0.0.1:1/override";
  EXPECT_EQ(make_adapter("http://example.invalid/x", o)->name(), "http:http://127.0.0.1:1/override");
}

}  // namespace
}  // namespace lengthgen::adapters
