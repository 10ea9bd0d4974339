#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "crosshunt/detail/strings.hpp"
#include "crosshunt/error.hpp"

namespace crosshunt {

// Subject: process-like entity. Object: file, socket, registry entry, pipe.
enum class NodeKind : std::uint8_t { Subject, Object };

constexpr char kind_code(NodeKind kind) noexcept { return kind == NodeKind::Subject ? 'S' : 'O'; }
constexpr std::string_view kind_name(NodeKind kind) noexcept {
  return kind == NodeKind::Subject ? "subject" : "object";
}

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Subject;
  std::string label;

  friend bool operator==(const Node&, const Node&) = default;
};

// Parallel edges are allowed; an edge is identified by all five fields.
struct Edge {
  std::string src;
  std::string dst;
  std::string syscall_label;
  std::string suspiciousness_label;
  std::uint64_t seq = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

namespace detail {

inline bool is_token(std::string_view s) noexcept {
  return !s.empty() && std::none_of(s.begin(), s.end(), is_space);
}

// Graph ids double as file names in the store.
inline bool is_graph_id(std::string_view s) noexcept {
  return is_token(s) && s != "." && s != ".." &&
         s.find_first_of("/\\") == std::string_view::npos;
}

}  // namespace detail

/// A host-scoped provenance graph whose edges carry a system-call label and a
/// suspiciousness label. Immutable once constructed: nodes are kept sorted by
/// id and edges stably sorted by seq, so node index order is id order.
class TaggedProvenanceGraph {
 public:
  TaggedProvenanceGraph(std::string graph_id, std::string host_id, std::vector<Node> nodes,
                        std::vector<Edge> edges)
      : graph_id_(std::move(graph_id)),
        host_id_(std::move(host_id)),
        nodes_(std::move(nodes)),
        edges_(std::move(edges)) {
    if (!detail::is_graph_id(graph_id_)) {
      throw Error(Errc::malformed_document, "invalid graph id '" + graph_id_ + "'");
    }
    if (!detail::is_token(host_id_)) {
      throw Error(Errc::malformed_document, "invalid host id '" + host_id_ + "'");
    }
    if (nodes_.empty()) {
      throw Error(Errc::malformed_document, "graph '" + graph_id_ + "' has no nodes");
    }
    std::sort(nodes_.begin(), nodes_.end(),
              [](const Node& a, const Node& b) { return a.id < b.id; });
    index_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      if (!detail::is_token(n.id) || n.id.find('/') != std::string::npos) {
        throw Error(Errc::malformed_document, "invalid node id '" + n.id + "'");
      }
      if (detail::trim(n.label).empty() || n.label.find('\n') != std::string::npos) {
        throw Error(Errc::malformed_document, "node '" + n.id + "' has an empty or multi-line label");
      }
      if (!index_.emplace(n.id, i).second) {
        throw Error(Errc::duplicate_node_id, "node id '" + n.id + "' appears more than once");
      }
    }
    for (const Edge& e : edges_) {
      if (!detail::is_token(e.syscall_label) || !detail::is_token(e.suspiciousness_label)) {
        throw Error(Errc::malformed_document,
                    "edge " + e.src + " -> " + e.dst + " has an empty label");
      }
      for (const std::string* end : {&e.src, &e.dst}) {
        if (!index_.contains(*end)) {
          throw Error(Errc::dangling_edge, "edge endpoint '" + *end + "' is not a node");
        }
      }
    }
    std::stable_sort(edges_.begin(), edges_.end(),
                     [](const Edge& a, const Edge& b) { return a.seq < b.seq; });
  }

  const std::string& graph_id() const noexcept { return graph_id_; }
  const std::string& host_id() const noexcept { return host_id_; }
  std::span<const Node> nodes() const noexcept { return nodes_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::optional<std::size_t> find_node(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const Node& node(std::size_t index) const { return nodes_.at(index); }
  const Node& node(std::string_view id) const {
    auto idx = find_node(id);
    if (!idx) throw Error(Errc::not_found, "node '" + std::string(id) + "'");
    return nodes_[*idx];
  }

  friend bool operator==(const TaggedProvenanceGraph& a, const TaggedProvenanceGraph& b) {
    return a.graph_id_ == b.graph_id_ && a.host_id_ == b.host_id_ && a.nodes_ == b.nodes_ &&
           a.edges_ == b.edges_;
  }

 private:
  std::string graph_id_;
  std::string host_id_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
};

using Graph = TaggedProvenanceGraph;

/// Parses the line-oriented interchange format:
///
///     G <graph_id> <host_id>
///     N <id> <S|O> <label...>
///     E <src> <dst> <syscall_label> <suspiciousness_label> <seq>
///
/// The header must be the first record. Blank lines and lines starting with
/// '#' are ignored. Errors name the offending line.
inline Graph parse_graph(std::string_view document) {
  std::optional<std::pair<std::string, std::string>> header;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::unordered_set<std::string> seen;

  std::size_t line_no = 0;
  for (std::string_view raw : detail::split(document, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::trim(line).empty() || detail::trim(line).front() == '#') continue;
    const auto fail = [&](Errc code, const std::string& what) {
      throw Error(code, "line " + std::to_string(line_no) + ": " + what);
    };
    auto fields = detail::split_ws(line);
    const std::string_view tag = fields.front();
    if (!header && tag != "G") fail(Errc::malformed_document, "expected 'G' header record first");

    if (tag == "G") {
      if (header) fail(Errc::malformed_document, "second 'G' header record");
      if (fields.size() != 3) fail(Errc::malformed_document, "header needs <graph_id> <host_id>");
      header.emplace(std::string(fields[1]), std::string(fields[2]));
    } else if (tag == "N") {
      if (fields.size() < 4) fail(Errc::malformed_document, "node record needs <id> <S|O> <label>");
      NodeKind kind{};
      if (fields[2] == "S") {
        kind = NodeKind::Subject;
      } else if (fields[2] == "O") {
        kind = NodeKind::Object;
      } else {
        fail(Errc::malformed_document, "node kind must be S or O, got '" + std::string(fields[2]) + "'");
      }
      // Label is the rest of the line after the kind token.
      std::size_t pos = static_cast<std::size_t>(fields[2].data() + fields[2].size() - line.data());
      while (pos < line.size() && detail::is_space(line[pos])) ++pos;
      std::string id(fields[1]);
      if (!seen.insert(id).second) fail(Errc::duplicate_node_id, "duplicate node id '" + id + "'");
      nodes.push_back(Node{std::move(id), kind, std::string(line.substr(pos))});
    } else if (tag == "E") {
      if (fields.size() != 6) {
        fail(Errc::malformed_document, "edge record needs <src> <dst> <syscall> <suspiciousness> <seq>");
      }
      auto seq = detail::parse_u64(fields[5]);
      if (!seq) fail(Errc::malformed_document, "edge seq '" + std::string(fields[5]) + "' is not a non-negative integer");
      edges.push_back(Edge{std::string(fields[1]), std::string(fields[2]), std::string(fields[3]),
                           std::string(fields[4]), *seq});
    } else {
      fail(Errc::malformed_document, "unknown record tag '" + std::string(tag) + "'");
    }
  }
  if (!header) throw Error(Errc::malformed_document, "document has no 'G' header record");
  for (const Edge& e : edges) {
    for (const std::string* end : {&e.src, &e.dst}) {
      if (!seen.contains(*end)) {
        throw Error(Errc::dangling_edge, "edge references missing node '" + *end + "'");
      }
    }
  }
  return Graph(std::move(header->first), std::move(header->second), std::move(nodes),
               std::move(edges));
}

inline std::string serialize_graph(const Graph& g) {
  std::ostringstream out;
  out << "G " << g.graph_id() << ' ' << g.host_id() << '\n';
  for (const Node& n : g.nodes()) {
    out << "N " << n.id << ' ' << kind_code(n.kind) << ' ' << n.label << '\n';
  }
  for (const Edge& e : g.edges()) {
    out << "E " << e.src << ' ' << e.dst << ' ' << e.syscall_label << ' '
        << e.suspiciousness_label << ' ' << e.seq << '\n';
  }
  return out.str();
}

/// A set of graphs plus the ids designated as known-attack seeds.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Graph> graphs, std::vector<std::string> seed_ids = {})
      : graphs_(std::move(graphs)), seed_ids_(std::move(seed_ids)) {
    std::sort(graphs_.begin(), graphs_.end(),
              [](const Graph& a, const Graph& b) { return a.graph_id() < b.graph_id(); });
    for (std::size_t i = 0; i < graphs_.size(); ++i) {
      if (!index_.emplace(graphs_[i].graph_id(), i).second) {
        throw Error(Errc::duplicate_graph_id, "graph id '" + graphs_[i].graph_id() + "'");
      }
    }
    std::sort(seed_ids_.begin(), seed_ids_.end());
    seed_ids_.erase(std::unique(seed_ids_.begin(), seed_ids_.end()), seed_ids_.end());
    for (const auto& s : seed_ids_) {
      if (!index_.contains(s)) throw Error(Errc::missing_seed, "seed '" + s + "' is not in the corpus");
    }
  }

  std::span<const Graph> graphs() const noexcept { return graphs_; }
  const std::vector<std::string>& seed_ids() const noexcept { return seed_ids_; }
  std::size_t size() const noexcept { return graphs_.size(); }
  bool empty() const noexcept { return graphs_.empty(); }

  const Graph* find(std::string_view graph_id) const {
    auto it = index_.find(std::string(graph_id));
    return it == index_.end() ? nullptr : &graphs_[it->second];
  }

  const Graph& at(std::string_view graph_id) const {
    const Graph* g = find(graph_id);
    if (!g) throw Error(Errc::not_found, "graph '" + std::string(graph_id) + "'");
    return *g;
  }

  std::size_t total_nodes() const noexcept {
    std::size_t n = 0;
    for (const auto& g : graphs_) n += g.node_count();
    return n;
  }

 private:
  std::vector<Graph> graphs_;
  std::vector<std::string> seed_ids_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace crosshunt
