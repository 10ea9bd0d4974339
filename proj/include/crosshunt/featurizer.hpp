#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crosshunt/detail/strings.hpp"
#include "crosshunt/error.hpp"
#include "crosshunt/graph.hpp"

namespace crosshunt {

/// Corpus-wide node identity. Text form is `graph_id/node_id`; graph ids never
/// contain '/', so the first slash splits the two.
struct DocId {
  std::string graph_id;
  std::string node_id;

  auto operator<=>(const DocId&) const = default;
  bool operator==(const DocId&) const = default;

  std::string str() const { return graph_id + '/' + node_id; }

  static DocId parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos || slash == 0 || slash + 1 == text.size()) {
      throw Error(Errc::invalid_argument, "bad doc id '" + std::string(text) + "'");
    }
    return {std::string(text.substr(0, slash)), std::string(text.substr(slash + 1))};
  }
};

struct DocIdHash {
  std::size_t operator()(const DocId& d) const noexcept {
    const std::size_t h = std::hash<std::string>{}(d.graph_id);
    return h ^ (std::hash<std::string>{}(d.node_id) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};

/// Whitespace tokenization with lowercasing. Each whitespace token is further
/// split on '\' and '/', so a path yields its directory components and its
/// final component as separate terms. A token made only of separators is kept
/// as-is so that a non-blank label never produces an empty document.
inline std::vector<std::string> tokenize(std::string_view label) {
  std::vector<std::string> out;
  for (std::string_view word : detail::split_ws(label)) {
    const std::size_t before = out.size();
    std::size_t start = 0;
    for (std::size_t i = 0; i <= word.size(); ++i) {
      if (i == word.size() || word[i] == '\\' || word[i] == '/') {
        if (i > start) out.push_back(detail::lowercase(word.substr(start, i - start)));
        start = i + 1;
      }
    }
    if (out.size() == before) out.push_back(detail::lowercase(word));
  }
  return out;
}

struct Document {
  DocId id;
  std::vector<std::string> terms;
};

struct DocumentSet {
  NodeKind kind = NodeKind::Subject;
  std::vector<Document> docs;
  std::vector<std::string> vocabulary;  // sorted, distinct
};

/// Occurrences of `term` in `doc` over the document's total term count.
inline double term_frequency(std::string_view term, const Document& doc) {
  if (doc.terms.empty()) throw Error(Errc::empty_document, "document " + doc.id.str() + " has no terms");
  const auto count = std::count(doc.terms.begin(), doc.terms.end(), term);
  return static_cast<double>(count) / static_cast<double>(doc.terms.size());
}

/// Natural log of |D| over the number of documents containing `term`.
inline double inverse_document_frequency(std::string_view term, const DocumentSet& set) {
  std::size_t df = 0;
  for (const auto& d : set.docs) {
    if (std::find(d.terms.begin(), d.terms.end(), term) != d.terms.end()) ++df;
  }
  if (df == 0) throw Error(Errc::unknown_term, "term '" + std::string(term) + "' occurs in no document");
  return std::log(static_cast<double>(set.docs.size()) / static_cast<double>(df));
}

struct TfIdfTable {
  // Per document: (vocabulary index, tf-idf score) for each distinct term, by index.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> scores;
  std::vector<double> per_doc_median;

  double score(std::size_t doc, std::uint32_t term) const {
    const auto& row = scores.at(doc);
    auto it = std::lower_bound(row.begin(), row.end(), term,
                               [](const auto& cell, std::uint32_t t) { return cell.first < t; });
    return (it != row.end() && it->first == term) ? it->second : 0.0;
  }
};

/// Binary node-by-term matrix, stored as the sorted set columns of each row.
struct FeatureMatrix {
  NodeKind kind = NodeKind::Subject;
  std::vector<DocId> doc_ids;
  std::vector<std::string> vocabulary;
  std::vector<std::vector<std::uint32_t>> rows;

  std::size_t row_count() const noexcept { return rows.size(); }
  std::size_t column_count() const noexcept { return vocabulary.size(); }

  bool cell(std::size_t row, std::uint32_t column) const {
    const auto& r = rows.at(row);
    return std::binary_search(r.begin(), r.end(), column);
  }
};

struct Featurization {
  DocumentSet documents;
  TfIdfTable tfidf;
  FeatureMatrix matrix;
};

struct NodeText {
  DocId id;
  NodeKind kind = NodeKind::Subject;
  std::string label;
};

inline double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

/// Builds the document set, tf-idf table and median-thresholded feature
/// matrix for one node kind. Rows follow DocId order.
///
/// A cell is 1 when the term occurs in the document and its score is at least
/// the document's median score. When the median is 0 (idf-0 terms dominate),
/// only strictly positive terms are kept, unless none are, in which case every
/// term of the document is kept.
inline Featurization build_feature_matrix(std::span<const NodeText> nodes, NodeKind kind) {
  if (nodes.empty()) throw Error(Errc::empty_input, "no nodes of kind " + std::string(kind_name(kind)));
  std::vector<const NodeText*> ordered;
  ordered.reserve(nodes.size());
  for (const auto& n : nodes) {
    if (n.kind != kind) {
      throw Error(Errc::invalid_argument, "node " + n.id.str() + " is not a " + std::string(kind_name(kind)));
    }
    ordered.push_back(&n);
  }
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i - 1]->id == ordered[i]->id) {
      throw Error(Errc::invalid_argument, "duplicate document " + ordered[i]->id.str());
    }
  }

  Featurization out;
  DocumentSet& set = out.documents;
  set.kind = kind;
  set.docs.reserve(ordered.size());
  for (const auto* n : ordered) set.docs.push_back(Document{n->id, tokenize(n->label)});

  for (const auto& d : set.docs) set.vocabulary.insert(set.vocabulary.end(), d.terms.begin(), d.terms.end());
  std::sort(set.vocabulary.begin(), set.vocabulary.end());
  set.vocabulary.erase(std::unique(set.vocabulary.begin(), set.vocabulary.end()), set.vocabulary.end());

  std::unordered_map<std::string_view, std::uint32_t> column;
  column.reserve(set.vocabulary.size());
  for (std::uint32_t i = 0; i < set.vocabulary.size(); ++i) column.emplace(set.vocabulary[i], i);

  // Per-document term counts by column, and document frequencies.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> counts(set.docs.size());
  std::vector<std::uint32_t> df(set.vocabulary.size(), 0);
  for (std::size_t d = 0; d < set.docs.size(); ++d) {
    std::map<std::uint32_t, std::uint32_t> c;
    for (const auto& t : set.docs[d].terms) ++c[column.at(t)];
    counts[d].assign(c.begin(), c.end());
    for (const auto& [col, _] : counts[d]) ++df[col];
  }

  const double n_docs = static_cast<double>(set.docs.size());
  std::vector<double> idf(set.vocabulary.size());
  for (std::size_t t = 0; t < idf.size(); ++t) idf[t] = std::log(n_docs / static_cast<double>(df[t]));

  TfIdfTable& table = out.tfidf;
  table.scores.resize(set.docs.size());
  table.per_doc_median.resize(set.docs.size());
  FeatureMatrix& m = out.matrix;
  m.kind = kind;
  m.vocabulary = set.vocabulary;
  m.rows.resize(set.docs.size());
  m.doc_ids.reserve(set.docs.size());

  for (std::size_t d = 0; d < set.docs.size(); ++d) {
    m.doc_ids.push_back(set.docs[d].id);
    const double total = static_cast<double>(set.docs[d].terms.size());
    std::vector<double> values;
    values.reserve(counts[d].size());
    for (const auto& [col, cnt] : counts[d]) {
      const double s = (static_cast<double>(cnt) / total) * idf[col];
      table.scores[d].emplace_back(col, s);
      values.push_back(s);
    }
    const double median = median_of(values);
    table.per_doc_median[d] = median;

    auto& row = m.rows[d];
    if (median > 0.0) {
      for (const auto& [col, s] : table.scores[d]) {
        if (s >= median) row.push_back(col);
      }
    } else {
      for (const auto& [col, s] : table.scores[d]) {
        if (s > 0.0) row.push_back(col);
      }
      if (row.empty()) {
        for (const auto& [col, s] : table.scores[d]) row.push_back(col);
      }
    }
  }
  return out;
}

inline std::vector<NodeText> collect_nodes(std::span<const Graph> graphs, NodeKind kind) {
  std::vector<NodeText> out;
  for (const auto& g : graphs) {
    for (const auto& n : g.nodes()) {
      if (n.kind == kind) out.push_back(NodeText{DocId{g.graph_id(), n.id}, kind, n.label});
    }
  }
  return out;
}

/// Sparse triplet dump: one `<doc_id> <term> 1` line per set cell.
inline void dump_matrix(const FeatureMatrix& m, std::ostream& out) {
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    for (auto c : m.rows[r]) out << m.doc_ids[r].str() << ' ' << m.vocabulary[c] << " 1\n";
  }
}

}  // namespace crosshunt
