#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "crosshunt/config.hpp"
#include "crosshunt/correlator.hpp"
#include "crosshunt/store.hpp"

namespace crosshunt {

/// Hunting state shared by the CLI and the HTTP service: an immutable corpus
/// snapshot plus bucket indexes memoized per (corpus version, bucket params).
/// Replacing the corpus bumps the version and drops the cache; callers holding
/// the previous snapshot keep a consistent view.
class Workspace {
 public:
  struct Buckets {
    std::shared_ptr<const BucketIndex> index;
    bool recomputed = false;
  };

  struct Hunt {
    HuntReport report;
    bool buckets_recomputed = false;
  };

  struct Comparison {
    SimilarityScore score;
    std::vector<std::pair<DocId, DocId>> matched_pairs;
  };

  explicit Workspace(Config cfg, Corpus corpus = {})
      : cfg_(std::move(cfg)), rules_(cfg_.rules()), corpus_(std::make_shared<const Corpus>(std::move(corpus))) {
    cfg_.validate();
  }

  /// Workspace over the graph store in `cfg.corpus_dir`.
  static Workspace open(Config cfg) {
    Corpus c = GraphStore(cfg.corpus_dir).load_corpus();
    return Workspace(std::move(cfg), std::move(c));
  }

  const Config& config() const noexcept { return cfg_; }
  const RuleSet& rules() const noexcept { return rules_; }

  std::shared_ptr<const Corpus> corpus() const {
    std::lock_guard lock(mutex_);
    return corpus_;
  }

  std::uint64_t version() const {
    std::lock_guard lock(mutex_);
    return version_;
  }

  void replace_corpus(Corpus c) {
    auto next = std::make_shared<const Corpus>(std::move(c));
    std::lock_guard lock(mutex_);
    corpus_ = std::move(next);
    ++version_;
    cache_.clear();
  }

  Buckets buckets(const BucketParams& params) {
    params.validate();
    std::shared_ptr<const Corpus> snapshot;
    std::uint64_t version = 0;
    {
      std::lock_guard lock(mutex_);
      snapshot = corpus_;
      version = version_;
      if (auto it = cache_.find(key(version, params)); it != cache_.end()) return {it->second, false};
    }
    auto index = std::make_shared<const BucketIndex>(build_buckets(snapshot->graphs(), params, cfg_.workers));
    std::lock_guard lock(mutex_);
    if (version == version_) cache_.emplace(key(version, params), index);
    return {index, true};
  }

  Hunt hunt(const HuntConfig& cfg) {
    cfg.validate();
    const auto snapshot = non_empty_corpus();
    resolve_seeds(*snapshot, cfg.seed_ids);
    auto b = buckets(cfg.buckets);
    return {crosshunt::hunt(*snapshot, cfg, rules_, *b.index), b.recomputed};
  }

  Hunt hunt(std::vector<std::string> seeds = {}) { return hunt(cfg_.hunt_config(std::move(seeds))); }

  Comparison compare(const std::string& a, const std::string& b, const BucketParams& params, const Weights& w) {
    w.validate();
    const auto snapshot = non_empty_corpus();
    const Graph& ga = snapshot->at(a);
    const Graph& gb = snapshot->at(b);
    const auto index = buckets(params).index;
    Comparison out{similarity(ga, gb, *index, rules_, w), {}};
    const Graph& first = ga.graph_id() <= gb.graph_id() ? ga : gb;
    const Graph& second = &first == &ga ? gb : ga;
    for (auto p : build_mps(first, second, *index).pairs()) {
      out.matched_pairs.emplace_back(DocId{first.graph_id(), first.node(p.s).id},
                                     DocId{second.graph_id(), second.node(p.l).id});
    }
    return out;
  }

  Comparison compare(const std::string& a, const std::string& b) { return compare(a, b, cfg_.buckets, cfg_.weights); }

 private:
  using Key = std::tuple<std::uint64_t, double, std::size_t, std::uint64_t, bool, std::size_t>;

  static Key key(std::uint64_t version, const BucketParams& p) {
    return {version, p.jaccard_threshold, p.signature_length, p.seed, p.exact_jaccard, p.bands};
  }

  std::shared_ptr<const Corpus> non_empty_corpus() const {
    auto snapshot = corpus();
    if (snapshot->empty()) throw Error(Errc::empty_corpus, "no graphs have been ingested");
    return snapshot;
  }

  Config cfg_;
  RuleSet rules_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Corpus> corpus_;
  std::uint64_t version_ = 0;
  std::map<Key, std::shared_ptr<const BucketIndex>> cache_;
};

}  // namespace crosshunt
