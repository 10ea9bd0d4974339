#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "crosshunt/bucketizer.hpp"
#include "crosshunt/edge_rules.hpp"
#include "crosshunt/graph.hpp"

namespace crosshunt {

/// W1: bucket match and similar edges. W2: bucket match, dissimilar edges.
/// W3: similar edges to neighbours that are not a matched pair.
struct Weights {
  double w1 = 1.0;
  double w2 = 0.2;
  double w3 = 0.8;

  void validate() const {
    if (!(w1 >= 0.0 && w2 >= 0.0 && w3 >= 0.0)) throw Error(Errc::invalid_argument, "weights must be non-negative");
  }

  friend bool operator==(const Weights&, const Weights&) = default;
};

/// Subject and object bucket maps from one bucketization run.
struct BucketIndex {
  BucketMap subjects;
  BucketMap objects;

  const DocId* bucket_of(const DocId& doc, NodeKind kind) const {
    return (kind == NodeKind::Subject ? subjects : objects).bucket_of(doc);
  }
};

struct NodePair {
  std::uint32_t s = 0;
  std::uint32_t l = 0;

  auto operator<=>(const NodePair&) const = default;
};

/// Cross-graph node pairs sharing a bucket. Membership is a dense bitmap over
/// (node index in the first graph) x (node index in the second); iteration
/// order is lexicographic by node id because graph nodes are id-sorted.
class MatchedPairSet {
 public:
  MatchedPairSet(std::size_t first_nodes, std::size_t second_nodes, const std::vector<NodePair>& pairs)
      : cols_(second_nodes), bits_(first_nodes * second_nodes, 0) {
    for (const auto& p : pairs) {
      auto& b = bits_.at(index(p));
      remaining_ += b == 0;
      b = 1;
    }
    original_size_ = remaining_;
  }

  std::size_t original_size() const noexcept { return original_size_; }
  std::size_t size() const noexcept { return remaining_; }
  bool empty() const noexcept { return remaining_ == 0; }

  bool contains(NodePair p) const { return bits_[index(p)] != 0; }

  bool erase(NodePair p) {
    auto& b = bits_[index(p)];
    if (b == 0) return false;
    b = 0;
    --remaining_;
    return true;
  }

  /// Smallest remaining pair, or nothing once exhausted.
  std::optional<NodePair> next() {
    while (cursor_ < bits_.size() && bits_[cursor_] == 0) ++cursor_;
    if (cursor_ == bits_.size()) return std::nullopt;
    return NodePair{static_cast<std::uint32_t>(cursor_ / cols_), static_cast<std::uint32_t>(cursor_ % cols_)};
  }

  std::vector<NodePair> pairs() const {
    std::vector<NodePair> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) out.push_back({static_cast<std::uint32_t>(i / cols_), static_cast<std::uint32_t>(i % cols_)});
    }
    return out;
  }

 private:
  std::size_t index(NodePair p) const noexcept { return static_cast<std::size_t>(p.s) * cols_ + p.l; }

  std::size_t cols_;
  std::vector<std::uint8_t> bits_;
  std::size_t remaining_ = 0;
  std::size_t original_size_ = 0;
  std::size_t cursor_ = 0;
};

/// Undirected adjacency with the connecting edges of each neighbour, plus
/// precomputed edge contexts. Built once per graph and reused across pairs.
class PreparedGraph {
 public:
  struct Neighbor {
    std::uint32_t node;
    std::vector<std::uint32_t> edges;
  };

  explicit PreparedGraph(const Graph& g) : graph_(&g), adjacency_(g.node_count()) {
    contexts_.reserve(g.edge_count());
    std::vector<std::unordered_map<std::uint32_t, std::size_t>> slot(g.node_count());
    const auto link = [&](std::uint32_t from, std::uint32_t to, std::uint32_t edge) {
      auto [it, fresh] = slot[from].try_emplace(to, adjacency_[from].size());
      if (fresh) adjacency_[from].push_back({to, {}});
      auto& edges = adjacency_[from][it->second].edges;
      if (edges.empty() || edges.back() != edge) edges.push_back(edge);
    };
    for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
      const Edge& edge = g.edges()[e];
      contexts_.push_back(make_edge_context(g, edge));
      const auto src = static_cast<std::uint32_t>(*g.find_node(edge.src));
      const auto dst = static_cast<std::uint32_t>(*g.find_node(edge.dst));
      link(src, dst, e);
      link(dst, src, e);
    }
    for (auto& adj : adjacency_) {
      std::sort(adj.begin(), adj.end(), [](const auto& a, const auto& b) { return a.node < b.node; });
    }
  }

  const Graph& graph() const noexcept { return *graph_; }
  const std::vector<Neighbor>& neighbors(std::uint32_t node) const { return adjacency_.at(node); }
  const EdgeContext& context(std::uint32_t edge) const { return contexts_[edge]; }

 private:
  const Graph* graph_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<EdgeContext> contexts_;
};

/// All same-bucket node pairs across the two graphs.
inline MatchedPairSet build_mps(const Graph& first, const Graph& second, const BucketIndex& buckets) {
  const auto buckets_of = [&](const Graph& g) {
    std::vector<const DocId*> out;
    out.reserve(g.node_count());
    for (const auto& n : g.nodes()) {
      const DocId* b = buckets.bucket_of(DocId{g.graph_id(), n.id}, n.kind);
      if (!b) throw Error(Errc::unbucketized_node, "node " + g.graph_id() + "/" + n.id + " has no bucket");
      out.push_back(b);
    }
    return out;
  };
  const auto first_b = buckets_of(first);
  const auto second_b = buckets_of(second);
  // Bucket ids are unique DocId objects inside their map, so pointer identity
  // is bucket identity; subject and object maps never share objects.
  std::unordered_map<const DocId*, std::vector<std::uint32_t>> members;
  for (std::uint32_t j = 0; j < second_b.size(); ++j) members[second_b[j]].push_back(j);
  std::vector<NodePair> pairs;
  for (std::uint32_t i = 0; i < first_b.size(); ++i) {
    auto it = members.find(first_b[i]);
    if (it == members.end()) continue;
    for (auto j : it->second) pairs.push_back({i, j});
  }
  return MatchedPairSet(first.node_count(), second.node_count(), pairs);
}

namespace detail {

inline bool connecting_edges_similar(const PreparedGraph& gs, const PreparedGraph::Neighbor& a,
                                     const PreparedGraph& gl, const PreparedGraph::Neighbor& b,
                                     const RuleSet& rules) {
  for (auto ea : a.edges) {
    for (auto eb : b.edges) {
      if (rules.edges_similar(gs.context(ea), gl.context(eb))) return true;
    }
  }
  return false;
}

}  // namespace detail

/// Dual breadth-first traversal from `start`. Each dequeued pair's
/// neighbourhoods (edges in either direction) are crossed: neighbour pairs
/// still in the MPS are consumed, enqueued and earn W1 (similar connecting
/// edges) or W2; other neighbour pairs earn W3 when their connecting edges are
/// similar. Runs until the queue drains.
inline double parallel_bfs(NodePair start, const PreparedGraph& gs, const PreparedGraph& gl, MatchedPairSet& mps,
                           const RuleSet& rules, const Weights& w) {
  double sim = 0.0;
  std::deque<NodePair> queue{start};
  while (!queue.empty()) {
    const NodePair cur = queue.front();
    queue.pop_front();
    mps.erase(cur);
    for (const auto& a : gs.neighbors(cur.s)) {
      for (const auto& b : gl.neighbors(cur.l)) {
        const NodePair next{a.node, b.node};
        const bool edges_match = detail::connecting_edges_similar(gs, a, gl, b, rules);
        if (mps.erase(next)) {
          queue.push_back(next);
          sim += edges_match ? w.w1 : w.w2;
        } else if (edges_match) {
          sim += w.w3;
        }
      }
    }
  }
  return sim;
}

struct PairContribution {
  DocId first;
  DocId second;
  double accumulated = 0.0;   // BFS total from this root
  double contribution = 0.0;  // accumulated / original MPS size
};

struct SimilarityScore {
  std::string first_graph;
  std::string second_graph;
  double raw = 0.0;
  double clamped = 0.0;
  std::size_t mps_size = 0;
  std::vector<PairContribution> roots;
};

/// Final similarity of two prepared graphs. Roles are canonicalized by
/// graph id, so the result does not depend on argument order. Roots are the
/// remaining MPS pairs in lexicographic order, each removed before its
/// traversal; the raw score is the sum of per-root contributions, i.e.
/// total accumulated weight over the original MPS size.
inline SimilarityScore similarity(const PreparedGraph& a, const PreparedGraph& b, const BucketIndex& buckets,
                                  const RuleSet& rules, const Weights& w) {
  const bool swap = b.graph().graph_id() < a.graph().graph_id();
  const PreparedGraph& gs = swap ? b : a;
  const PreparedGraph& gl = swap ? a : b;
  MatchedPairSet mps = build_mps(gs.graph(), gl.graph(), buckets);

  SimilarityScore score;
  score.first_graph = gs.graph().graph_id();
  score.second_graph = gl.graph().graph_id();
  score.mps_size = mps.original_size();
  if (score.mps_size == 0) return score;

  const double len = static_cast<double>(score.mps_size);
  while (auto root = mps.next()) {
    mps.erase(*root);
    const double acc = parallel_bfs(*root, gs, gl, mps, rules, w);
    score.roots.push_back({DocId{score.first_graph, gs.graph().node(root->s).id},
                           DocId{score.second_graph, gl.graph().node(root->l).id}, acc, acc / len});
    score.raw += acc / len;
  }
  score.clamped = std::min(score.raw, 1.0);
  return score;
}

inline SimilarityScore similarity(const Graph& a, const Graph& b, const BucketIndex& buckets, const RuleSet& rules,
                                  const Weights& w) {
  const PreparedGraph pa(a);
  const PreparedGraph pb(b);
  return similarity(pa, pb, buckets, rules, w);
}

/// `FINAL <raw> <clamped>` followed by `<doc_id_s> <doc_id_l> <contribution>` per root.
inline void dump_explanation(const SimilarityScore& s, std::ostream& out) {
  out << "FINAL " << detail::format_double(s.raw) << ' ' << detail::format_double(s.clamped) << '\n';
  for (const auto& r : s.roots) {
    out << r.first.str() << ' ' << r.second.str() << ' ' << detail::format_double(r.contribution) << '\n';
  }
}

}  // namespace crosshunt
