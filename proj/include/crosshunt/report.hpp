#pragma once

#include <cstdio>
#include <ostream>
#include <set>
#include <string>

#include <json.hpp>

#include "crosshunt/correlator.hpp"
#include "crosshunt/workspace.hpp"

namespace crosshunt {

using json = nlohmann::json;

inline json weights_json(const Weights& w) { return {{"w1", w.w1}, {"w2", w.w2}, {"w3", w.w3}}; }

inline json bucket_params_json(const BucketParams& p) {
  return {{"jaccard_threshold", p.jaccard_threshold},
          {"signature_length", p.signature_length},
          {"seed", p.seed},
          {"exact_jaccard", p.exact_jaccard},
          {"bands", p.bands}};
}

inline json graph_json(const Graph& g) {
  json nodes = json::array(), edges = json::array();
  for (const auto& n : g.nodes()) {
    nodes.push_back({{"id", n.id}, {"kind", n.kind == NodeKind::Subject ? "S" : "O"}, {"label", n.label}});
  }
  for (const auto& e : g.edges()) {
    edges.push_back({{"src", e.src},
                     {"dst", e.dst},
                     {"syscall_label", e.syscall_label},
                     {"suspiciousness_label", e.suspiciousness_label},
                     {"seq", e.seq}});
  }
  return {{"graph_id", g.graph_id()}, {"host_id", g.host_id()}, {"nodes", nodes}, {"edges", edges}};
}

inline json graph_listing_json(const Corpus& c) {
  const std::set<std::string> seeds(c.seed_ids().begin(), c.seed_ids().end());
  json out = json::array();
  for (const auto& g : c.graphs()) {
    out.push_back({{"graph_id", g.graph_id()},
                   {"host_id", g.host_id()},
                   {"node_count", g.node_count()},
                   {"edge_count", g.edge_count()},
                   {"seed", seeds.contains(g.graph_id())}});
  }
  return {{"graphs", out}};
}

/// Buckets grouped by id, members in member order.
inline json bucket_map_json(const BucketMap& b) {
  json out = json::array();
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto rep = b.representative(i);
    auto [it, fresh] = slot.try_emplace(rep, out.size());
    if (fresh) out.push_back({{"bucket_id", b.docs()[rep].str()}, {"members", json::array()}});
    out[it->second]["members"].push_back(b.docs()[i].str());
  }
  return out;
}

inline json buckets_json(const BucketIndex& index, const BucketParams& params) {
  return {{"params", bucket_params_json(params)},
          {"subjects", bucket_map_json(index.subjects)},
          {"objects", bucket_map_json(index.objects)}};
}

inline json hunt_json(const HuntReport& r) {
  json scores = json::array();
  for (const auto& p : r.scores) {
    scores.push_back({{"seed", p.seed},
                      {"candidate", p.candidate},
                      {"raw", p.raw},
                      {"clamped", p.clamped},
                      {"seed_pair", p.seed_pair}});
  }
  return {{"seeds", r.seeds},
          {"threshold", r.threshold},
          {"weights", weights_json(r.weights)},
          {"buckets", bucket_params_json(r.buckets)},
          {"scores", scores},
          {"alerts", r.alerts},
          {"correlated_hosts", r.correlated_hosts}};
}

inline json comparison_json(const Workspace::Comparison& c) {
  const auto& s = c.score;
  json roots = json::array(), pairs = json::array();
  for (const auto& r : s.roots) {
    roots.push_back({{"first", r.first.str()},
                     {"second", r.second.str()},
                     {"accumulated", r.accumulated},
                     {"contribution", r.contribution}});
  }
  for (const auto& [a, b] : c.matched_pairs) pairs.push_back({{"first", a.str()}, {"second", b.str()}});
  return {{"first_graph", s.first_graph},
          {"second_graph", s.second_graph},
          {"raw", s.raw},
          {"clamped", s.clamped},
          {"mps_size", s.mps_size},
          {"roots", roots},
          {"matched_pairs", pairs}};
}

inline json eval_json(const EvalReport& e) {
  const auto& c = e.confusion;
  return {{"threshold", e.threshold}, {"tp", c.tp},         {"tn", c.tn},
          {"fp", c.fp},               {"fn", c.fn},         {"precision", e.precision()},
          {"recall", e.recall()},     {"f1", e.f1()},       {"accuracy", e.accuracy()}};
}

inline std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

/// Seed x candidate score grid, alerted candidates marked with '*'.
inline void print_hunt_table(const HuntReport& r, std::ostream& out) {
  std::vector<std::string> candidates;
  std::map<std::pair<std::string, std::string>, double> cell;
  for (const auto& p : r.scores) {
    if (cell.emplace(std::pair{p.seed, p.candidate}, p.clamped).second &&
        std::find(candidates.begin(), candidates.end(), p.candidate) == candidates.end()) {
      candidates.push_back(p.candidate);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  std::size_t width = 9;
  for (const auto& c : candidates) width = std::max(width, c.size() + 1);
  const std::set<std::string> alerted(r.alerts.begin(), r.alerts.end());

  const auto pad = [&](const std::string& s) { return s + std::string(width > s.size() ? width - s.size() : 1, ' '); };
  out << pad("candidate");
  for (const auto& s : r.seeds) out << pad(s);
  out << '\n';
  for (const auto& c : candidates) {
    out << pad(c + (alerted.contains(c) ? "*" : ""));
    for (const auto& s : r.seeds) {
      auto it = cell.find({s, c});
      out << pad(it == cell.end() ? "-" : fixed(it->second));
    }
    out << '\n';
  }
  out << "threshold " << fixed(r.threshold, 2) << ": " << r.alerts.size() << " alerted graph(s) on "
      << r.correlated_hosts.size() << " host(s)\n";
}

inline void print_eval(const EvalReport& e, std::ostream& out) {
  const auto& c = e.confusion;
  out << "threshold " << fixed(e.threshold, 2) << "  TP " << c.tp << "  TN " << c.tn << "  FP " << c.fp << "  FN "
      << c.fn << '\n'
      << "precision " << fixed(e.precision()) << "  recall " << fixed(e.recall()) << "  F1 " << fixed(e.f1())
      << "  accuracy " << fixed(e.accuracy()) << '\n';
}

/// `<threshold> <precision> <recall> <f1> <accuracy>` per row.
inline void print_sweep(const std::vector<EvalReport>& rows, std::ostream& out) {
  for (const auto& e : rows) {
    out << fixed(e.threshold, 4) << ' ' << fixed(e.precision(), 6) << ' ' << fixed(e.recall(), 6) << ' '
        << fixed(e.f1(), 6) << ' ' << fixed(e.accuracy(), 6) << '\n';
  }
}

}  // namespace crosshunt
