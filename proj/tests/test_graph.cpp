#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "crosshunt/graph.hpp"

using namespace crosshunt;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(CROSSHUNT_TEST_DATA) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Errc error_of(std::string_view doc) {
  try {
    parse_graph(doc);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("document parsed unexpectedly");
  return Errc::invalid_argument;
}

}  // namespace

TEST_CASE("minimal document parses", "[graph]") {
  const auto g = parse_graph("G g1 h1\nN a S cmd.exe /c dir\nN b O C:\\tmp\\x.txt\nE a b write Untrusted_Write 0\n");
  CHECK(g.graph_id() == "g1");
  CHECK(g.host_id() == "h1");
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.node("a").label == "cmd.exe /c dir");
  CHECK(g.node("b").kind == NodeKind::Object);
}

TEST_CASE("node label is the verbatim rest of the line", "[graph]") {
  const auto g = parse_graph("G g h\nN a S   powershell  -noP   -w 1\n");
  CHECK(g.node("a").label == "powershell  -noP   -w 1");
}

TEST_CASE("dangling edge names the missing node", "[graph]") {
  try {
    parse_graph("G g h\nN a S p\nE a x99 read R 1\n");
    FAIL("expected dangling-edge");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dangling_edge);
    CHECK(std::string(e.what()).find("x99") != std::string::npos);
  }
}

TEST_CASE("parse errors are classified", "[graph]") {
  CHECK(error_of("N a S p\n") == Errc::malformed_document);                  // no header first
  CHECK(error_of("G g h\nG g h\nN a S p\n") == Errc::malformed_document);    // second header
  CHECK(error_of("G g h\nN a S p\nN a O q\n") == Errc::duplicate_node_id);
  CHECK(error_of("G g h\nN a X p\n") == Errc::malformed_document);           // bad kind
  CHECK(error_of("G g h\nN a S p\nE a a read R -1\n") == Errc::malformed_document);
  CHECK(error_of("G g h\nN a S p\nE a a read R\n") == Errc::malformed_document);
  CHECK(error_of("G g h\n") == Errc::malformed_document);                    // no nodes
  CHECK(error_of("G g h\nN a S    \n") == Errc::malformed_document);         // blank label
  CHECK(error_of("G g h\nQ zzz\n") == Errc::malformed_document);
  CHECK(error_of("") == Errc::malformed_document);
}

TEST_CASE("error message names the offending line", "[graph]") {
  try {
    parse_graph("G g h\nN a S p\nN a S q\n");
    FAIL("expected duplicate");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("'a'") != std::string::npos);
  }
}

TEST_CASE("edges are ordered by seq and parallel edges are kept", "[graph]") {
  const auto g = parse_graph("G g h\nN a S p\nN b O f\nE a b write W 5\nE a b read R 2\nE a b read R 2\n");
  REQUIRE(g.edge_count() == 3);
  CHECK(g.edges()[0].seq == 2);
  CHECK(g.edges()[1].seq == 2);
  CHECK(g.edges()[2].seq == 5);
}

TEST_CASE("Host-101 fixture carries Untrusted_Exec edges", "[graph]") {
  const auto g = parse_graph(read_fixture("host101.tpg"));
  CHECK(g.host_id() == "host-101");
  const auto edges = g.edges();
  CHECK(std::any_of(edges.begin(), edges.end(),
                    [](const Edge& e) { return e.suspiciousness_label == "Untrusted_Exec"; }));
  CHECK(g.node("p2").label.find("PowerShell") != std::string::npos);
}

TEST_CASE("serialization is a left inverse of parsing", "[graph]") {
  std::mt19937_64 rng(42);
  const std::vector<std::string> words{"powershell.exe", "-noP", "C:\\Windows\\x.dll", "/usr/bin/ls", "-la", "10.0.0.1"};
  const std::vector<std::string> sys{"read", "write", "exec", "fork", "load"};
  for (int trial = 0; trial < 200; ++trial) {
    std::ostringstream doc;
    doc << "G graph" << trial << " host" << rng() % 7 << '\n';
    const int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      doc << "N n" << i << ' ' << (rng() % 2 ? 'S' : 'O');
      for (int w = 0; w <= static_cast<int>(rng() % 4); ++w) doc << ' ' << words[rng() % words.size()];
      doc << '\n';
    }
    const int m = static_cast<int>(rng() % 12);
    for (int i = 0; i < m; ++i) {
      doc << "E n" << rng() % n << " n" << rng() % n << ' ' << sys[rng() % sys.size()] << " T" << rng() % 3 << ' '
          << rng() % 5 << '\n';
    }
    const auto g = parse_graph(doc.str());
    const auto again = parse_graph(serialize_graph(g));
    REQUIRE(again == g);
    CHECK(serialize_graph(again) == serialize_graph(g));
  }
}

TEST_CASE("corpus rejects duplicate graphs and unknown seeds", "[graph]") {
  const auto g = parse_graph("G g h\nN a S p\n");
  CHECK_THROWS_AS(Corpus({g, g}), Error);
  try {
    Corpus c({g}, {"nope"});
    FAIL("expected missing seed");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::missing_seed);
  }
  const Corpus c({g}, {"g"});
  CHECK(c.seed_ids() == std::vector<std::string>{"g"});
  CHECK(c.at("g").node_count() == 1);
}
