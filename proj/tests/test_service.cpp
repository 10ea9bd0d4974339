#include <catch2/catch_amalgamated.hpp>

#include <future>
#include <set>
#include <sstream>

#include "crosshunt/cli.hpp"
#include "crosshunt/service.hpp"
#include "crosshunt/synthetic.hpp"
#include "support/temp_dir.hpp"

using namespace crosshunt;

namespace {

// Day-2 analog on disk, so the CLI and the API read the same store.
struct Fixture {
  testing::TempDir dir;
  Config cfg;

  Fixture() {
    const auto a = synth::day2_analog();
    GraphStore store(dir.path());
    const std::set<std::string> seeds(a.seed_ids.begin(), a.seed_ids.end());
    for (const auto& g : a.corpus.graphs()) store.put(g, seeds.contains(g.graph_id()));
    cfg.corpus_dir = dir.path();
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

struct Live {
  Workspace ws;
  ApiServer server;
  int port;
  httplib::Client client;

  // Workspaces are not movable; build in place from a factory.
  template <typename Make>
  explicit Live(Make make) : ws(make()), server(ws), port(server.bind()), client("127.0.0.1", port) {
    server.start();
  }
};

Workspace day2_workspace() { return Workspace::open(fixture().cfg); }

std::set<std::string> alerts_of(const std::string& body) {
  const auto j = json::parse(body);
  return {j.at("alerts").begin(), j.at("alerts").end()};
}

}  // namespace

TEST_CASE("graph listing and lookup", "[service]") {
  Live live(day2_workspace);
  auto res = live.client.Get("/graphs");
  REQUIRE(res);
  CHECK(res->status == 200);
  const auto listing = json::parse(res->body).at("graphs");
  CHECK(listing.size() == 70);
  std::size_t seeds = 0;
  for (const auto& g : listing) seeds += g.at("seed").get<bool>();
  CHECK(seeds == 3);

  res = live.client.Get("/graphs/g_a");
  REQUIRE(res);
  CHECK(res->status == 200);
  const auto g = json::parse(res->body);
  CHECK(g.at("graph_id") == "g_a");
  CHECK(g.at("host_id") == "host-001");
  CHECK(g.at("nodes").size() == live.ws.corpus()->at("g_a").node_count());
  CHECK(g.at("edges").size() == live.ws.corpus()->at("g_a").edge_count());

  res = live.client.Get("/graphs/missing");
  REQUIRE(res);
  CHECK(res->status == 404);
  const auto err = json::parse(res->body);
  CHECK(err.at("error") == "not-found");
  CHECK(err.at("message").get<std::string>().rfind("not-found", 0) == std::string::npos);
}

TEST_CASE("bucket dumps are memoized per parameter set", "[service]") {
  Live live(day2_workspace);
  auto res = live.client.Get("/buckets");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("X-Buckets-Recomputed") == "true");
  const auto j = json::parse(res->body);
  std::size_t members = 0;
  for (const auto& b : j.at("subjects")) members += b.at("members").size();
  for (const auto& b : j.at("objects")) members += b.at("members").size();
  CHECK(members == live.ws.corpus()->total_nodes());

  res = live.client.Get("/buckets");
  CHECK(res->get_header_value("X-Buckets-Recomputed") == "false");
  res = live.client.Get("/buckets?jaccard_threshold=0.8");
  CHECK(res->get_header_value("X-Buckets-Recomputed") == "true");
  CHECK(json::parse(res->body).at("params").at("jaccard_threshold") == 0.8);
  res = live.client.Get("/buckets?jaccard_threshold=nope");
  CHECK(res->status == 400);
  res = live.client.Get("/buckets?jaccard_threshold=0");
  CHECK(res->status == 400);
}

TEST_CASE("hunt requests re-score without re-bucketizing", "[service]") {
  Live live(day2_workspace);
  auto first = live.client.Post("/hunt", R"({"seeds": ["g_a", "g_b", "g_c"], "threshold": 0.5})", "application/json");
  REQUIRE(first);
  CHECK(first->status == 200);
  CHECK(first->get_header_value("X-Buckets-Recomputed") == "true");
  CHECK(alerts_of(first->body).size() == 7);

  auto second = live.client.Post("/hunt", R"({"threshold": 0.9, "weights": {"w2": 0.1}})", "application/json");
  REQUIRE(second);
  CHECK(second->status == 200);
  CHECK(second->get_header_value("X-Buckets-Recomputed") == "false");
  const auto a1 = alerts_of(first->body), a2 = alerts_of(second->body);
  CHECK(std::includes(a1.begin(), a1.end(), a2.begin(), a2.end()));

  auto rebucket = live.client.Post("/hunt", R"({"jaccard_threshold": 0.7})", "application/json");
  REQUIRE(rebucket);
  CHECK(rebucket->get_header_value("X-Buckets-Recomputed") == "true");
  CHECK(json::parse(rebucket->body).at("buckets").at("jaccard_threshold") == 0.7);
}

TEST_CASE("hunt responses match the CLI byte for byte", "[service]") {
  Live live(day2_workspace);
  auto res = live.client.Post("/hunt", R"({"weights": [1, 0.2, 0.8]})", "application/json");
  REQUIRE(res);
  REQUIRE(res->status == 200);

  const std::string corpus = fixture().cfg.corpus_dir.string();
  const char* argv[] = {"crosshunt", "hunt", "--corpus", corpus.c_str(), "--json"};
  std::ostringstream out, err;
  REQUIRE(run_cli(5, argv, out, err) == 0);
  CHECK(res->body == out.str());
}

TEST_CASE("malformed hunt requests are rejected", "[service]") {
  Live live(day2_workspace);
  const auto status = [&](const std::string& body) {
    auto res = live.client.Post("/hunt", body, "application/json");
    REQUIRE(res);
    return res->status;
  };
  CHECK(status("{") == 400);
  CHECK(status("[]") == 400);
  CHECK(status(R"({"threshold": 1.5})") == 400);
  CHECK(status(R"({"threshold": "high"})") == 400);
  CHECK(status(R"({"weights": [1, 2]})") == 400);
  CHECK(status(R"({"weights": {"w4": 1}})") == 400);
  CHECK(status(R"({"weights": {"w1": -1}})") == 400);
  CHECK(status(R"({"signature_length": 0})") == 400);
  CHECK(status(R"({"signature_length": -3})") == 400);
  CHECK(status(R"({"colour": "blue"})") == 400);
  CHECK(status(R"({"seeds": "g_a"})") == 400);
  CHECK(status(R"({"seeds": ["nope"]})") == 404);
  CHECK(status("") == 200);
}

TEST_CASE("pairwise comparison endpoint", "[service]") {
  Live live(day2_workspace);
  auto res = live.client.Get("/compare?a=g_d&b=g_a");
  REQUIRE(res);
  REQUIRE(res->status == 200);
  const auto j = json::parse(res->body);
  CHECK(j.at("first_graph") == "g_a");
  CHECK(j.at("mps_size").get<std::size_t>() == j.at("matched_pairs").size());
  double sum = 0.0;
  for (const auto& r : j.at("roots")) sum += r.at("contribution").get<double>();
  CHECK_THAT(sum, Catch::Matchers::WithinAbs(j.at("raw").get<double>(), 1e-9));
  for (const auto& p : j.at("matched_pairs")) {
    CHECK(p.at("first").get<std::string>().rfind("g_a/", 0) == 0);
    CHECK(p.at("second").get<std::string>().rfind("g_d/", 0) == 0);
  }

  res = live.client.Get("/compare?a=g_a&b=missing");
  REQUIRE(res);
  CHECK(res->status == 404);
  CHECK(live.client.Get("/compare?a=g_a")->status == 400);
  CHECK(live.client.Get("/compare?a=g_a&b=g_d&w1=x")->status == 400);

  const auto zero = json::parse(live.client.Get("/compare?a=g_a&b=g_d&w1=0&w2=0&w3=0")->body);
  CHECK(zero.at("raw").get<double>() == 0.0);
}

TEST_CASE("an empty corpus is a conflict", "[service]") {
  Live live([] { return Workspace(Config{}); });
  auto res = live.client.Post("/hunt", "{}", "application/json");
  REQUIRE(res);
  CHECK(res->status == 409);
  CHECK(json::parse(res->body).at("error") == "corpus-empty");
  CHECK(live.client.Get("/buckets")->status == 409);
  CHECK(live.client.Get("/compare?a=x&b=y")->status == 409);
  res = live.client.Get("/graphs");
  CHECK(res->status == 200);
  CHECK(json::parse(res->body).at("graphs").empty());
}

TEST_CASE("concurrent hunts see the same snapshot", "[service]") {
  Live live(day2_workspace);
  std::vector<std::future<std::string>> futures;
  for (int i = 0; i < 4; ++i) {
    futures.push_back(std::async(std::launch::async, [port = live.port] {
      httplib::Client c("127.0.0.1", port);
      auto res = c.Post("/hunt", R"({"threshold": 0.6})", "application/json");
      return res && res->status == 200 ? res->body : std::string();
    }));
  }
  std::set<std::string> bodies;
  for (auto& f : futures) bodies.insert(f.get());
  CHECK(bodies.size() == 1);
  CHECK_FALSE(bodies.begin()->empty());
}

TEST_CASE("replacing the corpus drops memoized buckets", "[service]") {
  Workspace ws = day2_workspace();
  CHECK(ws.buckets(BucketParams{}).recomputed);
  CHECK_FALSE(ws.buckets(BucketParams{}).recomputed);
  const auto before = ws.corpus();
  const auto v = ws.version();
  ws.replace_corpus(synth::day2_analog(3).corpus);
  CHECK(ws.version() == v + 1);
  CHECK(ws.buckets(BucketParams{}).recomputed);
  CHECK(before->size() == 70);
}

TEST_CASE("error classes map to HTTP statuses", "[service]") {
  CHECK(http_status(Errc::not_found) == 404);
  CHECK(http_status(Errc::missing_seed) == 404);
  CHECK(http_status(Errc::empty_corpus) == 409);
  CHECK(http_status(Errc::invalid_argument) == 400);
  CHECK(http_status(Errc::malformed_document) == 400);
}
