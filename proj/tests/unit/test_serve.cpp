// Copyright 2026 The gensug Authors.
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
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "gensug/pipeline/stages.hpp"
#include "gensug/serve/http.hpp"
#include "gensug/serve/service.hpp"
#include "gensug/serve/snapshot.hpp"
#include "test_util.hpp"

using namespace gensug;
using namespace gensug::serve;
using gensug::testing::TempDir;
using json = nlohmann::json;

namespace {

const std::vector<std::string> kPrefixes = {"s", "ph", "ca", "b", "sh", "la"};

struct TrainedRun {
  std::unique_ptr<TempDir> dir;
  pipeline::RunConfig config;
  std::shared_ptr<const ModelSnapshot> snapshot;
  std::vector<corpus::InteractionRecord> records;
};

TrainedRun build_run(std::uint64_t seed) {
  TrainedRun run;
  run.dir = std::make_unique<TempDir>("serve_run");
  run.config = pipeline::load_config(std::string(GENSUG_CONFIG_DIR) + "/tiny.json");
  run.config.seed = seed;
  run.config.work_dir = run.dir->str();
  std::ostringstream log;
  for (auto stage : pipeline::all_stages()) pipeline::run_stage(stage, run.config, log);
  run.snapshot = ModelSnapshot::load(run.config);
  run.records = pipeline::load_corpus(pipeline::Paths(run.config.work_dir)).records;
  return run;
}

std::string render(const std::vector<model::Suggestion>& s) {
  json items = json::array();
  for (const auto& x : s) items.push_back({{"query", x.query}, {"score", x.score}});
  return items.dump();
}

class ServeTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    a_ = new TrainedRun(build_run(3));
    b_ = new TrainedRun(build_run(5));
  }
  static void TearDownTestSuite() {
    delete a_;
    delete b_;
  }

  std::unique_ptr<SuggestService> service(const TrainedRun& run, const std::string& log) const {
    return std::make_unique<SuggestService>(run.snapshot, log, run.records,
                                            run.config.corpus.history_len);
  }

  static TrainedRun* a_;
  static TrainedRun* b_;
};

TrainedRun* ServeTest::a_ = nullptr;
TrainedRun* ServeTest::b_ = nullptr;

// Runs an HttpServer on a free port for the lifetime of the object.
class LiveServer {
 public:
  explicit LiveServer(SuggestService& svc) : server_(svc) {
    port_ = server_.bind("127.0.0.1", 0);
    if (port_ > 0) thread_ = std::thread([this] { server_.listen(); });
  }
  ~LiveServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  int port() const { return port_; }

 private:
  HttpServer server_;
  std::thread thread_;
  int port_ = -1;
};

}  // namespace

TEST_F(ServeTest, SnapshotsVerifyAgainstTheirRun) {
  EXPECT_TRUE(a_->snapshot->verified());
  EXPECT_EQ(a_->snapshot->settings().beam, 32u);
  EXPECT_EQ(a_->snapshot->settings().max_k, 16u);
  EXPECT_NE(a_->snapshot->config_hash(), b_->snapshot->config_hash());
}

TEST_F(ServeTest, SuggestReturnsAtMostSixteenDistinctRankedItems) {
  TempDir dir("serve_k");
  const auto svc = service(*a_, dir.file("fb.jsonl"));
  bool any_full = false;
  for (const auto& p : kPrefixes) {
    for (std::size_t k : {1u, 5u, 16u, 32u, 100u}) {
      const auto s = svc->suggest("u0001", p, k);
      EXPECT_LE(s.size(), std::min<std::size_t>(k, 16));
      std::set<std::string> seen;
      for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_TRUE(seen.insert(s[i].query).second);
        if (i > 0) {
          EXPECT_GE(s[i - 1].score, s[i].score);
        }
      }
      any_full = any_full || s.size() == 16;
    }
  }
  EXPECT_TRUE(any_full) << "beam of 32 never filled 16 slots";
  EXPECT_THROW((void)svc->suggest("u", "", 4), std::invalid_argument);
  EXPECT_THROW((void)svc->suggest("u", "p", 0), std::invalid_argument);
}

TEST_F(ServeTest, UnknownUserIsServedLikeEmptyHistory) {
  TempDir dir("serve_unknown");
  const auto svc = service(*a_, dir.file("fb.jsonl"));
  const auto& snap = *a_->snapshot;
  for (const auto& p : kPrefixes) {
    UserContext ctx;
    ctx.user_id = "never-seen";
    ctx.prefix = p;
    ctx.related = snap.related(p);
    EXPECT_EQ(render(svc->suggest("never-seen", p, 16)), render(snap.generate(ctx, 16))) << p;
    EXPECT_TRUE(svc->history_of("never-seen").empty());
  }
}

TEST_F(ServeTest, SuggestIsByteIdenticalPerSnapshot) {
  TempDir d1("serve_det1"), d2("serve_det2");
  const auto svc1 = service(*a_, d1.file("fb.jsonl"));
  // A second load of the same artifacts is an equivalent snapshot.
  const auto svc2 = std::make_unique<SuggestService>(ModelSnapshot::load(a_->config),
                                                     d2.file("fb.jsonl"), a_->records,
                                                     a_->config.corpus.history_len);
  LiveServer s1(*svc1), s2(*svc2);
  ASSERT_GT(s1.port(), 0);
  ASSERT_GT(s2.port(), 0);
  httplib::Client c1("127.0.0.1", s1.port()), c2("127.0.0.1", s2.port());
  for (const auto& p : kPrefixes) {
    const std::string path = "/suggest?user=u0002&k=16&prefix=" + p;
    const auto r1 = c1.Get(path), r1b = c1.Get(path), r2 = c2.Get(path);
    ASSERT_TRUE(r1 && r1b && r2);
    EXPECT_EQ(r1->status, 200);
    EXPECT_EQ(r1->body, r1b->body);
    EXPECT_EQ(r1->body, r2->body);
    const auto j = json::parse(r1->body);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_LE(j["suggestions"].size(), 16u);
  }
  const auto bad = c1.Get("/suggest?user=u&prefix=");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  const auto bad_k = c1.Get("/suggest?prefix=s&k=-1");
  ASSERT_TRUE(bad_k);
  EXPECT_EQ(bad_k->status, 400);
}

TEST_F(ServeTest, ConcurrentFeedbackIsNeitherLostNorInterleaved) {
  TempDir dir("serve_fb");
  const auto log_path = dir.file("fb.jsonl");
  const auto svc = service(*a_, log_path);
  LiveServer server(*svc);
  ASSERT_GT(server.port(), 0);

  constexpr int kPosts = 100;
  std::atomic<int> ok{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < kPosts; ++i) {
    threads.emplace_back([&, i] {
      httplib::Client c("127.0.0.1", server.port());
      const json body = {{"user", "load" + std::to_string(i % 7)},
                         {"prefix", "pre" + std::to_string(i)},
                         {"query", "query number " + std::to_string(i) + std::string(200, 'x')},
                         {"level", i % 2 ? "Click" : "Show"},
                         {"ts", 1000 + i}};
      const auto r = c.Post("/feedback", body.dump(), "application/json");
      if (r && r->status == 200) ++ok;
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok.load(), kPosts);

  std::ifstream in(log_path);
  std::string line;
  std::set<std::string> prefixes;
  std::int64_t last_ts = 0;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    const auto e = event_from_jsonl(line);  // a torn line would not parse
    EXPECT_GT(e.server_ts, last_ts);
    last_ts = e.server_ts;
    EXPECT_EQ(e.query, "query number " + e.prefix.substr(3) + std::string(200, 'x'));
    prefixes.insert(e.prefix);
  }
  EXPECT_EQ(lines, kPosts);
  EXPECT_EQ(prefixes.size(), static_cast<std::size_t>(kPosts));
  const auto exported = export_feedback_dataset(log_path);
  EXPECT_EQ(exported.records.size(), static_cast<std::size_t>(kPosts));
  EXPECT_EQ(exported.corrupt_lines, 0u);
}

TEST_F(ServeTest, FeedbackValidatesLevelAndUpdatesHistory) {
  TempDir dir("serve_level");
  const auto svc = service(*a_, dir.file("fb.jsonl"));
  try {
    svc->record_feedback("u", "p", "q", "Clicked", 1);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("Order"), std::string::npos) << e.what();
  }
  svc->record_feedback("fresh", "ph", "phone case", "Show", 5);
  EXPECT_TRUE(svc->history_of("fresh").empty());
  svc->record_feedback("fresh", "ph", "phone case", "Click", 6);
  svc->record_feedback("fresh", "ca", "cable", "Order", 7);
  EXPECT_EQ(svc->history_of("fresh"), (std::vector<std::string>{"cable", "phone case"}));

  // A restarted service replays the log.
  const auto again = service(*a_, dir.file("fb.jsonl"));
  EXPECT_EQ(again->history_of("fresh"), svc->history_of("fresh"));

  LiveServer server(*svc);
  httplib::Client c("127.0.0.1", server.port());
  const auto bad = c.Post("/feedback", R"({"user":"u","prefix":"p","query":"q","level":"Nope"})",
                          "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  const auto junk = c.Post("/feedback", "{not json", "application/json");
  ASSERT_TRUE(junk);
  EXPECT_EQ(junk->status, 400);
}

TEST(FeedbackExport, CountsCorruptLines) {
  TempDir dir("export");
  const auto path = dir.file("fb.jsonl");
  {
    std::ofstream out(path);
    out << event_to_jsonl({"u1", "p", "q1", corpus::Level::kClick, 1, 10}) << '\n'
        << "{\"user\": \"u2\", \"prefix\": \"p\"\n"
        << R"({"user":"u3","prefix":"p","query":"q","level":"Bogus","ts":3})" << '\n'
        << '\n'
        << event_to_jsonl({"u4", "p", "q4", corpus::Level::kRand, 4, 11}) << '\n';
  }
  const auto r = export_feedback_dataset(path);
  EXPECT_EQ(r.corrupt_lines, 2u);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].user_id, "u1");
  EXPECT_EQ(r.records[1].level, corpus::Level::kRand);
  EXPECT_TRUE(export_feedback_dataset(dir.file("absent.jsonl")).records.empty());

  const FeedbackEvent e{"u", "pre", "q", corpus::Level::kItemClick, 9, 12};
  EXPECT_EQ(event_from_jsonl(event_to_jsonl(e)), e);
}

TEST_F(ServeTest, SwapRefusesUnverifiedOrUnexpectedSnapshots) {
  TempDir dir("serve_swap");
  const auto svc = service(*a_, dir.file("fb.jsonl"));
  const auto before = render(svc->suggest("u0001", "s", 16));

  auto parts = a_->snapshot->parts();
  parts.component_hashes["generator"] = "0000000000000000";
  auto tampered = std::make_shared<const ModelSnapshot>(std::move(parts));
  EXPECT_FALSE(tampered->verified());
  EXPECT_FALSE(svc->snapshot_swap(tampered).ok);
  EXPECT_FALSE(svc->snapshot_swap(nullptr).ok);
  const auto wrong = svc->snapshot_swap(b_->snapshot, a_->snapshot->config_hash());
  EXPECT_FALSE(wrong.ok);
  EXPECT_NE(wrong.reason.find("expected"), std::string::npos);
  EXPECT_EQ(svc->snapshot(), a_->snapshot);
  EXPECT_EQ(render(svc->suggest("u0001", "s", 16)), before);

  EXPECT_TRUE(svc->snapshot_swap(b_->snapshot, b_->snapshot->config_hash()).ok);
  EXPECT_EQ(svc->snapshot(), b_->snapshot);

  LiveServer server(*svc);
  httplib::Client c("127.0.0.1", server.port());
  const auto h = c.Get("/healthz");
  ASSERT_TRUE(h);
  EXPECT_EQ(json::parse(h->body)["snapshot_hash"], b_->snapshot->config_hash());
}

TEST_F(ServeTest, SwapUnderLoadNeverServesAMixedState) {
  TempDir dir("serve_mixed");
  const auto svc = service(*a_, dir.file("fb.jsonl"));
  std::map<std::string, std::pair<std::string, std::string>> expected;
  for (const auto& p : kPrefixes) {
    expected[p] = {render(svc->suggest_on(*a_->snapshot, "u0003", p, 16)),
                   render(svc->suggest_on(*b_->snapshot, "u0003", p, 16))};
  }
  bool differs = false;
  for (const auto& [p, ab] : expected) differs = differs || ab.first != ab.second;
  ASSERT_TRUE(differs) << "the two snapshots must disagree somewhere for this check to bite";

  std::atomic<bool> stop{false};
  std::atomic<int> served{0}, mixed{0};
  std::vector<std::thread> readers;
  for (int t = 0; t < 4; ++t) {
    readers.emplace_back([&, t] {
      std::size_t i = static_cast<std::size_t>(t);
      while (!stop.load()) {
        const auto& p = kPrefixes[i++ % kPrefixes.size()];
        const auto got = render(svc->suggest("u0003", p, 16));
        const auto& [ea, eb] = expected.at(p);
        if (got != ea && got != eb) ++mixed;
        ++served;
      }
    });
  }
  for (int s = 0; s < 40; ++s) {
    const auto& next = s % 2 ? a_->snapshot : b_->snapshot;
    EXPECT_TRUE(svc->snapshot_swap(next).ok);
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  stop = true;
  for (auto& r : readers) r.join();
  EXPECT_GT(served.load(), 0);
  EXPECT_EQ(mixed.load(), 0);
}
