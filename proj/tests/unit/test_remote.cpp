#include <gtest/gtest.h>

#include <atomic>
#include <deque>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "reviewscope/embedding.hpp"
#include "reviewscope/error.hpp"
#include "reviewscope/sentiment.hpp"

using namespace reviewscope;
using nlohmann::json;

namespace {

// In-process endpoint serving /embed (test embedder vectors) and /score.
// Queued status codes are answered before normal service resumes.
class FakeEncoder {
 public:
  explicit FakeEncoder(std::size_t dim = 8) : dim_(dim) {
    server_.Post("/embed", [this](const httplib::Request& req, httplib::Response& res) {
      record(req);
      if (fail_next(res)) return;
      const json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.contains("texts") || !body["texts"].is_array() || body["texts"].empty()) {
        res.status = 400;
        return;
      }
      json vectors = json::array();
      for (const auto& t : body["texts"]) {
        const auto v = embed_test(t.get<std::string>(), dim_, 3);
        vectors.push_back(std::vector<double>(v.values().begin(), v.values().end()));
      }
      json out{{"dim", dim_}, {"vectors", vectors}};
      if (override_) out = override_(out);
      res.set_content(out.dump(), "application/json");
    });
    server_.Post("/v1/embed", [this](const httplib::Request& req, httplib::Response& res) {
      record(req);
      res.set_content(json{{"dim", 1}, {"vectors", json::array({json::array({1.0})})}}.dump(), "application/json");
    });
    server_.Post("/score", [this](const httplib::Request& req, httplib::Response& res) {
      record(req);
      if (fail_next(res)) return;
      const json body = json::parse(req.body);
      json scores = json::array();
      for (const auto& t : body["texts"]) scores.push_back(t.get<std::string>().find("good") != std::string::npos ? 4.5 : 1.5);
      json out{{"scores", scores}};
      if (override_) out = override_(out);
      res.set_content(out.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeEncoder() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  void fail_with(std::initializer_list<int> statuses) {
    std::lock_guard lock(mu_);
    failures_.insert(failures_.end(), statuses);
  }
  void rewrite(std::function<json(json)> f) { override_ = std::move(f); }
  int requests() const { return requests_; }
  std::vector<std::size_t> batch_sizes() const {
    std::lock_guard lock(mu_);
    return batch_sizes_;
  }

 private:
  void record(const httplib::Request& req) {
    ++requests_;
    const json body = json::parse(req.body, nullptr, false);
    std::lock_guard lock(mu_);
    if (!body.is_discarded() && body.contains("texts")) batch_sizes_.push_back(body["texts"].size());
  }
  bool fail_next(httplib::Response& res) {
    std::lock_guard lock(mu_);
    if (failures_.empty()) return false;
    res.status = failures_.front();
    failures_.pop_front();
    return true;
  }

  std::size_t dim_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> requests_{0};
  mutable std::mutex mu_;
  std::deque<int> failures_;
  std::vector<std::size_t> batch_sizes_;
  std::function<json(json)> override_;
};

RemoteOptions fast(int retries = 3) {
  RemoteOptions o;
  o.retries = retries;
  o.initial_backoff = std::chrono::milliseconds(1);
  o.timeout = std::chrono::seconds(5);
  return o;
}

const std::vector<std::string> kTexts{"good charger", "battery", "screen is dim"};

}  // namespace

TEST(RemoteProvider, EmbedsInOrder) {
  FakeEncoder server;
  RemoteProvider p(server.url(), fast());
  EXPECT_EQ(p.dim(), 0u);
  const auto vs = p.embed(kTexts);
  ASSERT_EQ(vs.size(), 3u);
  EXPECT_EQ(p.dim(), 8u);
  for (std::size_t i = 0; i < kTexts.size(); ++i) {
    const auto expected = embed_test(kTexts[i], 8, 3);
    for (std::size_t d = 0; d < 8; ++d) EXPECT_NEAR(vs[i][d], expected[d], 1e-12);
  }
  EXPECT_TRUE(p.embed({}).empty());
}

TEST(RemoteProvider, BatchesRequests) {
  FakeEncoder server;
  RemoteOptions o = fast();
  o.batch_size = 2;
  RemoteProvider p(server.url(), o);
  std::vector<std::string> texts;
  for (int i = 0; i < 5; ++i) texts.push_back("t" + std::to_string(i));
  EXPECT_EQ(p.embed(texts).size(), 5u);
  EXPECT_EQ(server.batch_sizes(), (std::vector<std::size_t>{2, 2, 1}));
}

TEST(RemoteProvider, HonoursPathPrefix) {
  FakeEncoder server;
  RemoteProvider p(server.url() + "/v1/", fast());
  const std::vector<std::string> one{"x"};
  EXPECT_EQ(p.embed(one)[0], EmbeddingVector({1.0}));
}

TEST(RemoteProvider, RetriesTransientFailures) {
  FakeEncoder server;
  server.fail_with({503, 429, 500});
  RemoteProvider p(server.url(), fast(3));
  EXPECT_EQ(p.embed(kTexts).size(), 3u);
  EXPECT_EQ(server.requests(), 4);
}

TEST(RemoteProvider, GivesUpAfterBoundedRetries) {
  FakeEncoder server;
  server.fail_with({503, 503, 503, 503, 503});
  RemoteProvider p(server.url(), fast(3));
  EXPECT_THROW(p.embed(kTexts), TransportError);
  EXPECT_EQ(server.requests(), 4);
}

TEST(RemoteProvider, NonTransientStatusFailsImmediately) {
  FakeEncoder server;
  server.fail_with({404});
  RemoteProvider p(server.url(), fast(3));
  try {
    p.embed(kTexts);
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_NE(std::string(e.what()).find("HTTP 404"), std::string::npos) << e.what();
  }
  EXPECT_EQ(server.requests(), 1);
}

TEST(RemoteProvider, ConnectionRefusedIsTransportError) {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  RemoteProvider p("http://127.0.0.1:" + std::to_string(port), fast(1));
  EXPECT_THROW(p.embed(kTexts), TransportError);
}

TEST(RemoteProvider, RejectsMalformedResponses) {
  const std::vector<std::function<json(json)>> rewrites = {
      [](json j) { j.erase("dim"); return j; },
      [](json j) { j["dim"] = 0; return j; },
      [](json j) { j["dim"] = 9; return j; },
      [](json j) { j["vectors"].erase(0); return j; },
      [](json j) { j["vectors"][1][0] = "x"; return j; },
      [](json j) { j["vectors"][2].push_back(1.0); return j; },
      [](json) { return json::array(); },
  };
  for (std::size_t i = 0; i < rewrites.size(); ++i) {
    FakeEncoder server;
    server.rewrite(rewrites[i]);
    RemoteProvider p(server.url(), fast());
    EXPECT_THROW(p.embed(kTexts), TransportError) << "rewrite " << i;
  }
}

TEST(RemoteProvider, DimensionMustStayFixed) {
  FakeEncoder server;
  RemoteProvider p(server.url(), fast());
  p.embed(kTexts);
  server.rewrite([](json j) {
    j["dim"] = 2;
    for (auto& v : j["vectors"]) v = json::array({1.0, 0.0});
    return j;
  });
  EXPECT_THROW(p.embed(kTexts), TransportError);
}

TEST(RemoteProvider, UrlNeedsScheme) {
  EXPECT_THROW(RemoteProvider("127.0.0.1:80"), ConfigError);
}

TEST(RemoteProvider, ServerRejectsEmptyRequests) {
  FakeEncoder server;
  httplib::Client c(server.url());
  auto res = c.Post("/embed", R"({"texts": []})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
}

TEST(RemoteScorer, ScoresAndRetries) {
  FakeEncoder server;
  server.fail_with({502});
  RemoteScorer scorer(server.url(), fast());
  const std::vector<Sentence> s{make_sentence("r", 0, "good one"), make_sentence("r", 1, "nope")};
  const auto scores = scorer.score(s);
  ASSERT_EQ(scores.size(), 2u);
  EXPECT_DOUBLE_EQ(scores[0].value(), 4.5);
  EXPECT_DOUBLE_EQ(scores[1].value(), 1.5);
  EXPECT_EQ(server.requests(), 2);
}

TEST(RemoteScorer, RejectsOutOfRangeAndMisaligned) {
  const std::vector<Sentence> s{make_sentence("r", 0, "good one"), make_sentence("r", 1, "nope")};
  {
    FakeEncoder server;
    server.rewrite([](json j) { j["scores"][0] = 6.0; return j; });
    EXPECT_THROW(RemoteScorer(server.url(), fast()).score(s), TransportError);
  }
  {
    FakeEncoder server;
    server.rewrite([](json j) { j["scores"].erase(0); return j; });
    EXPECT_THROW(RemoteScorer(server.url(), fast()).score(s), TransportError);
  }
}
