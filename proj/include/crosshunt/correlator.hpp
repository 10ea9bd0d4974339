#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "crosshunt/bucketizer.hpp"
#include "crosshunt/detail/parallel.hpp"
#include "crosshunt/edge_rules.hpp"
#include "crosshunt/featurizer.hpp"
#include "crosshunt/graph.hpp"
#include "crosshunt/metrics.hpp"
#include "crosshunt/similarity.hpp"

namespace crosshunt {

struct HuntConfig {
  std::vector<std::string> seed_ids;
  double alert_threshold = 0.5;
  Weights weights;
  BucketParams buckets;
  std::size_t workers = 0;  // 0 = hardware concurrency

  void validate() const {
    if (!(alert_threshold >= 0.0 && alert_threshold <= 1.0)) {
      throw Error(Errc::invalid_argument, "alert threshold must lie in [0, 1]");
    }
    weights.validate();
    buckets.validate();
  }
};

struct PairScore {
  std::string seed;
  std::string candidate;
  double raw = 0.0;
  double clamped = 0.0;
  bool seed_pair = false;  // both graphs are seeds; reported, never evaluated
};

struct HuntReport {
  std::vector<std::string> seeds;
  double threshold = 0.5;
  Weights weights;
  BucketParams buckets;
  std::vector<PairScore> scores;  // seed-major, candidates by graph id
  std::vector<std::string> alerts;
  std::vector<std::string> correlated_hosts;
};

/// Featurizes and bucketizes subjects and objects over every node in `graphs`.
inline BucketIndex build_buckets(std::span<const Graph> graphs, const BucketParams& params, std::size_t workers = 0) {
  params.validate();
  BucketIndex index;
  for (NodeKind kind : {NodeKind::Subject, NodeKind::Object}) {
    const auto nodes = collect_nodes(graphs, kind);
    BucketMap map;
    if (!nodes.empty()) map = bucketize(build_feature_matrix(nodes, kind).matrix, params, workers);
    (kind == NodeKind::Subject ? index.subjects : index.objects) = std::move(map);
  }
  return index;
}

inline std::vector<std::string> resolve_seeds(const Corpus& corpus, std::vector<std::string> seeds) {
  if (seeds.empty()) seeds = corpus.seed_ids();
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  if (seeds.empty()) throw Error(Errc::missing_seed, "hunt needs at least one seed graph");
  for (const auto& s : seeds) {
    if (!corpus.find(s)) throw Error(Errc::missing_seed, "seed '" + s + "' is not in the corpus");
  }
  return seeds;
}

/// Scores every seed against every other graph and alerts on non-seed graphs
/// whose clamped score against any seed reaches the threshold.
inline HuntReport hunt(const Corpus& corpus, const HuntConfig& cfg, const RuleSet& rules, const BucketIndex& buckets) {
  cfg.validate();
  HuntReport report;
  report.seeds = resolve_seeds(corpus, cfg.seed_ids);
  report.threshold = cfg.alert_threshold;
  report.weights = cfg.weights;
  report.buckets = cfg.buckets;

  const auto graphs = corpus.graphs();
  std::vector<PreparedGraph> prepared;
  prepared.reserve(graphs.size());
  for (const auto& g : graphs) prepared.emplace_back(g);
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < graphs.size(); ++i) position.emplace(graphs[i].graph_id(), i);
  const std::set<std::string> seed_set(report.seeds.begin(), report.seeds.end());

  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (const auto& s : report.seeds) {
    for (std::size_t c = 0; c < graphs.size(); ++c) {
      if (graphs[c].graph_id() != s) jobs.emplace_back(position.at(s), c);
    }
  }
  report.scores.resize(jobs.size());
  detail::parallel_for(
      jobs.size(),
      [&](std::size_t j) {
        const auto [si, ci] = jobs[j];
        const auto sc = similarity(prepared[si], prepared[ci], buckets, rules, cfg.weights);
        const auto& cand = graphs[ci].graph_id();
        report.scores[j] = PairScore{graphs[si].graph_id(), cand, sc.raw, sc.clamped, seed_set.contains(cand)};
      },
      cfg.workers);

  std::set<std::string> alerts, hosts;
  for (const auto& p : report.scores) {
    if (!p.seed_pair && p.clamped >= cfg.alert_threshold) {
      alerts.insert(p.candidate);
      hosts.insert(corpus.at(p.candidate).host_id());
    }
  }
  report.alerts.assign(alerts.begin(), alerts.end());
  report.correlated_hosts.assign(hosts.begin(), hosts.end());
  return report;
}

inline HuntReport hunt(const Corpus& corpus, const HuntConfig& cfg, const RuleSet& rules = RuleSet::defaults()) {
  cfg.validate();
  resolve_seeds(corpus, cfg.seed_ids);
  return hunt(corpus, cfg, rules, build_buckets(corpus.graphs(), cfg.buckets, cfg.workers));
}

/// graph_id -> true for attack graphs, false for benign.
using GroundTruth = std::map<std::string, bool>;

/// Lines of `<graph_id> attack|benign`; '#' starts a comment.
inline GroundTruth parse_ground_truth(std::string_view text) {
  GroundTruth truth;
  std::size_t line_no = 0;
  for (std::string_view line : detail::split(text, '\n')) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto f = detail::split_ws(line);
    if (f.empty()) continue;
    if (f.size() != 2 || (f[1] != "attack" && f[1] != "benign")) {
      throw Error(Errc::malformed_document, "truth line " + std::to_string(line_no) + ": expected <graph_id> attack|benign");
    }
    truth[std::string(f[0])] = f[1] == "attack";
  }
  return truth;
}

struct EvalReport {
  double threshold = 0.5;
  Confusion confusion;

  double precision() const noexcept { return confusion.precision(); }
  double recall() const noexcept { return confusion.recall(); }
  double f1() const noexcept { return confusion.f1(); }
  double accuracy() const noexcept { return confusion.accuracy(); }
};

/// Confusion over seed/candidate pairs (seed-seed pairs excluded). A pair is
/// positive when both graphs are attack graphs and predicted positive when its
/// clamped score reaches the threshold.
inline EvalReport evaluate(const HuntReport& report, const GroundTruth& truth, double threshold) {
  EvalReport out;
  out.threshold = threshold;
  const auto label = [&](const std::string& id) {
    auto it = truth.find(id);
    if (it == truth.end()) throw Error(Errc::coverage_gap, "ground truth has no label for '" + id + "'");
    return it->second;
  };
  for (const auto& p : report.scores) {
    if (p.seed_pair) continue;
    const bool actual = label(p.seed) && label(p.candidate);
    const bool predicted = p.clamped >= threshold;
    auto& c = out.confusion;
    (actual ? (predicted ? c.tp : c.fn) : (predicted ? c.fp : c.tn)) += 1;
  }
  return out;
}

/// Thresholds lo, lo+step, ..., up to and including hi (within rounding).
inline std::vector<double> sweep_thresholds(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw Error(Errc::invalid_argument, "sweep needs lo <= hi and step > 0");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

inline std::vector<EvalReport> sweep(const HuntReport& report, const GroundTruth& truth, double lo, double hi,
                                     double step) {
  std::vector<EvalReport> out;
  for (double t : sweep_thresholds(lo, hi, step)) out.push_back(evaluate(report, truth, t));
  return out;
}

struct BucketQuality {
  double nmi = 0.0;
  double ars = 0.0;
};

/// Compares a bucketization with a labelled assignment of the same documents.
template <typename Label>
BucketQuality bucket_quality(const BucketMap& predicted, const std::map<DocId, Label>& truth) {
  const auto pred = predicted.labels();
  std::vector<std::size_t> actual;
  std::map<Label, std::size_t> dense;
  for (const auto& doc : predicted.docs()) {
    auto it = truth.find(doc);
    if (it == truth.end()) throw Error(Errc::coverage_gap, "no ground-truth bucket for " + doc.str());
    actual.push_back(dense.try_emplace(it->second, dense.size()).first->second);
  }
  return {normalized_mutual_information(pred, actual), adjusted_rand_index(pred, actual)};
}

struct StageTiming {
  std::size_t graphs = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double featurize_s = 0.0;
  double bucketize_s = 0.0;
  double similarity_s = 0.0;
};

/// Wall-clock time of each pipeline stage on one corpus: featurization,
/// bucketization (signatures and pairwise comparison), and seed scoring.
inline StageTiming measure_stages(const Corpus& corpus, const HuntConfig& cfg, const RuleSet& rules = RuleSet::defaults()) {
  using clock = std::chrono::steady_clock;
  const auto seconds = [](clock::duration d) { return std::chrono::duration<double>(d).count(); };
  StageTiming t;
  t.graphs = corpus.size();
  for (const auto& g : corpus.graphs()) {
    t.nodes += g.node_count();
    t.edges += g.edge_count();
  }
  if (corpus.empty()) return t;

  BucketIndex index;
  for (NodeKind kind : {NodeKind::Subject, NodeKind::Object}) {
    const auto nodes = collect_nodes(corpus.graphs(), kind);
    if (nodes.empty()) continue;
    auto t0 = clock::now();
    const auto f = build_feature_matrix(nodes, kind);
    auto t1 = clock::now();
    auto map = bucketize(f.matrix, cfg.buckets, cfg.workers);
    auto t2 = clock::now();
    t.featurize_s += seconds(t1 - t0);
    t.bucketize_s += seconds(t2 - t1);
    (kind == NodeKind::Subject ? index.subjects : index.objects) = std::move(map);
  }
  HuntConfig scoring = cfg;
  if (scoring.seed_ids.empty() && corpus.seed_ids().empty()) scoring.seed_ids = {corpus.graphs().front().graph_id()};
  auto t0 = clock::now();
  hunt(corpus, scoring, rules, index);
  t.similarity_s = seconds(clock::now() - t0);
  return t;
}

}  // namespace crosshunt
