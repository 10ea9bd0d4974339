#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>

#include "crosshunt/featurizer.hpp"
#include "support/ten_subjects_golden.hpp"

using namespace crosshunt;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<NodeText> ten_subjects() {
  std::vector<NodeText> out;
  for (std::size_t i = 0; i < testing::kTenSubjectLabels.size(); ++i) {
    out.push_back({DocId{"g", "n" + std::to_string(i)}, NodeKind::Subject, std::string(testing::kTenSubjectLabels[i])});
  }
  return out;
}

std::vector<std::string_view> set_terms(const FeatureMatrix& m, std::size_t row) {
  std::vector<std::string_view> out;
  for (auto c : m.rows[row]) out.push_back(m.vocabulary[c]);
  return out;
}

}  // namespace

TEST_CASE("tokenizer splits on whitespace and path separators", "[featurizer]") {
  CHECK(tokenize(R"(C:\Windows\System32\cmd.exe /c dir)") ==
        std::vector<std::string>{"c:", "windows", "system32", "cmd.exe", "c", "dir"});
  CHECK(tokenize("/usr/bin/ls -la /") == std::vector<std::string>{"usr", "bin", "ls", "-la", "/"});
  CHECK(tokenize("   ").empty());
}

TEST_CASE("term frequency and idf definitions", "[featurizer]") {
  DocumentSet set;
  set.docs = {{DocId{"g", "a"}, {"x", "y", "x"}}, {DocId{"g", "b"}, {"y"}}};
  CHECK_THAT(term_frequency("x", set.docs[0]), WithinAbs(2.0 / 3.0, 1e-15));
  CHECK(term_frequency("z", set.docs[0]) == 0.0);
  CHECK_THAT(inverse_document_frequency("x", set), WithinAbs(std::log(2.0), 1e-15));
  CHECK(inverse_document_frequency("y", set) == 0.0);
  CHECK_THROWS_AS(inverse_document_frequency("zzz", set), Error);
  CHECK_THROWS_AS(term_frequency("x", Document{DocId{"g", "e"}, {}}), Error);
}

TEST_CASE("ten-subject matrix matches the frozen oracle", "[featurizer]") {
  const auto nodes = ten_subjects();
  const auto f = build_feature_matrix(nodes, NodeKind::Subject);
  REQUIRE(f.matrix.row_count() == 10);
  CHECK(f.matrix.column_count() == testing::kTenSubjectVocabulary);
  for (std::size_t r = 0; r < 10; ++r) {
    INFO("row " << r);
    CHECK(set_terms(f.matrix, r) == testing::kTenSubjectCells[r]);
    CHECK_THAT(f.tfidf.per_doc_median[r], WithinAbs(testing::kTenSubjectMedians[r], 1e-12));
  }
}

TEST_CASE("terms shared by every document never set a cell unless nothing else exists", "[featurizer]") {
  const auto f = build_feature_matrix(ten_subjects(), NodeKind::Subject);
  const auto& vocab = f.matrix.vocabulary;
  for (const char* t : {"c:", "windows", "system32"}) {
    const auto col = static_cast<std::uint32_t>(std::find(vocab.begin(), vocab.end(), t) - vocab.begin());
    REQUIRE(col < vocab.size());
    for (std::size_t r = 0; r < 10; ++r) CHECK_FALSE(f.matrix.cell(r, col));
  }
  // A single document: every idf is 0 so every term is kept.
  const std::vector<NodeText> one{{DocId{"g", "a"}, NodeKind::Subject, "foo bar"}};
  CHECK(build_feature_matrix(one, NodeKind::Subject).matrix.rows[0].size() == 2);
}

TEST_CASE("featurizer input errors", "[featurizer]") {
  CHECK_THROWS_AS(build_feature_matrix({}, NodeKind::Subject), Error);
  const std::vector<NodeText> mixed{{DocId{"g", "a"}, NodeKind::Object, "x"}};
  CHECK_THROWS_AS(build_feature_matrix(mixed, NodeKind::Subject), Error);
  const std::vector<NodeText> dup{{DocId{"g", "a"}, NodeKind::Subject, "x"}, {DocId{"g", "a"}, NodeKind::Subject, "y"}};
  CHECK_THROWS_AS(build_feature_matrix(dup, NodeKind::Subject), Error);
}

TEST_CASE("matrix is invariant under input permutation", "[featurizer]") {
  auto nodes = ten_subjects();
  const auto base = build_feature_matrix(nodes, NodeKind::Subject).matrix;
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(nodes.begin(), nodes.end(), rng);
    const auto m = build_feature_matrix(nodes, NodeKind::Subject).matrix;
    CHECK(m.doc_ids == base.doc_ids);
    CHECK(m.rows == base.rows);
    CHECK(m.vocabulary == base.vocabulary);
  }
}

TEST_CASE("a document's row depends only on relative term frequencies", "[featurizer]") {
  // Repeating a label k times scales every count by k; tf and the median
  // scale together, so the set cells stay the same.
  auto nodes = ten_subjects();
  const auto base = build_feature_matrix(nodes, NodeKind::Subject).matrix;
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    auto copy = nodes;
    copy[r].label = copy[r].label + " " + copy[r].label + " " + copy[r].label;
    const auto m = build_feature_matrix(copy, NodeKind::Subject).matrix;
    CHECK(set_terms(m, r) == set_terms(base, r));
  }
}

TEST_CASE("every non-empty row has at least one cell", "[featurizer]") {
  std::mt19937 rng(11);
  const std::vector<std::string> words{"a", "b", "c", "d", "e", "f", "g", "h"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<NodeText> nodes;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      std::string label;
      for (int w = 0; w <= static_cast<int>(rng() % 5); ++w) label += words[rng() % words.size()] + " ";
      nodes.push_back({DocId{"g", "n" + std::to_string(i)}, NodeKind::Object, label});
    }
    const auto m = build_feature_matrix(nodes, NodeKind::Object).matrix;
    for (const auto& row : m.rows) CHECK_FALSE(row.empty());
  }
}

TEST_CASE("matrix dump lists one triplet per set cell", "[featurizer]") {
  const std::vector<NodeText> nodes{{DocId{"g", "a"}, NodeKind::Subject, "x y"},
                                    {DocId{"g", "b"}, NodeKind::Subject, "y z"}};
  std::ostringstream out;
  dump_matrix(build_feature_matrix(nodes, NodeKind::Subject).matrix, out);
  CHECK(out.str() == "g/a x 1\ng/b z 1\n");
}

TEST_CASE("doc ids round-trip through text", "[featurizer]") {
  const DocId d{"graph-1", "node.7"};
  CHECK(DocId::parse(d.str()) == d);
  CHECK_THROWS_AS(DocId::parse("nograph"), Error);
}
