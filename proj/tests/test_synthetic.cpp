#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "crosshunt/correlator.hpp"
#include "crosshunt/synthetic.hpp"

using namespace crosshunt;

namespace {

std::string dump(const Corpus& c) {
  std::string out;
  for (const auto& g : c.graphs()) out += serialize_graph(g);
  return out;
}

}  // namespace

TEST_CASE("analog corpora are deterministic per seed", "[synthetic]") {
  CHECK(dump(synth::day2_analog(5).corpus) == dump(synth::day2_analog(5).corpus));
  CHECK(dump(synth::day2_analog(5).corpus) != dump(synth::day2_analog(6).corpus));
}

TEST_CASE("analog cardinalities and host layout", "[synthetic]") {
  const auto a = synth::day2_analog();
  CHECK(a.seed_ids == std::vector<std::string>{"g_a", "g_b", "g_c"});
  CHECK(a.planted_ids.size() == 7);
  CHECK(a.benign_ids.size() == 60);
  CHECK(a.corpus.size() == 70);
  CHECK(a.truth.size() == 70);
  CHECK(a.corpus.seed_ids() == a.seed_ids);

  std::set<std::string> seed_hosts, planted_hosts;
  for (const auto& id : a.seed_ids) seed_hosts.insert(a.corpus.at(id).host_id());
  for (const auto& id : a.planted_ids) planted_hosts.insert(a.corpus.at(id).host_id());
  CHECK(seed_hosts.size() == 1);
  CHECK(planted_hosts.size() == 7);
  CHECK_FALSE(planted_hosts.contains(*seed_hosts.begin()));
  for (const auto& id : a.benign_ids) CHECK_FALSE(a.truth.at(id));
  for (const auto& id : a.planted_ids) CHECK(a.truth.at(id));
}

TEST_CASE("generated graphs survive the interchange format", "[synthetic]") {
  const auto a = synth::day1_analog();
  CHECK(a.corpus.size() == 4 + 14 + 400);
  for (const auto& g : a.corpus.graphs()) {
    REQUIRE(g.node_count() > 0);
    CHECK(serialize_graph(parse_graph(serialize_graph(g))) == serialize_graph(g));
  }
}

TEST_CASE("large analogs switch to numbered ids", "[synthetic]") {
  const auto a = synth::make_campaign_analog({20, 10, 5, 50, 1});
  CHECK(a.seed_ids.front() == "G001");
  CHECK(a.planted_ids.back() == "G030");
  CHECK(a.benign_ids.front() == "b0001");
  CHECK_THROWS_AS(synth::make_campaign_analog({0, 1, 1, 10, 1}), Error);
  CHECK_THROWS_AS(synth::make_campaign_analog({1, 10, 1, 10, 1}), Error);
}

TEST_CASE("benchmark corpus reaches the requested size", "[synthetic]") {
  const auto c = synth::make_benchmark_corpus(1000);
  CHECK(c.total_nodes() >= 1000);
  CHECK(c.total_nodes() < 1100);
  CHECK(c.seed_ids().size() == 1);
  CHECK(synth::make_benchmark_corpus(0).empty());
}

TEST_CASE("seeds and planted graphs share the campaign stager", "[synthetic]") {
  const auto a = synth::day2_analog();
  const auto r = hunt(a.corpus, HuntConfig{});
  for (const auto& id : a.planted_ids) {
    double best = 0.0;
    for (const auto& p : r.scores) {
      if (p.candidate == id) best = std::max(best, p.clamped);
    }
    CHECK(best >= 0.5);
  }
  for (const auto& p : r.scores) {
    if (!a.truth.at(p.candidate)) CHECK(p.clamped < 0.5);
  }
}
