#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "crosshunt/detail/parallel.hpp"
#include "crosshunt/error.hpp"
#include "crosshunt/featurizer.hpp"
#include "crosshunt/union_find.hpp"

namespace crosshunt {

struct MinHashSignature {
  DocId doc_id;
  std::vector<std::uint64_t> values;
  std::uint64_t seed = 0;
};

/// D hash functions h_k(x) = (a_k * x + b_k) mod p over column indices, with
/// p = 2^61 - 1 and (a_k, b_k) drawn from a seeded mt19937_64. The output
/// range is p itself. Raw engine output is reduced by hand so the coefficients
/// are identical across standard libraries.
class MinHasher {
 public:
  static constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

  MinHasher(std::size_t signature_length, std::uint64_t seed) : seed_(seed) {
    if (signature_length == 0) throw Error(Errc::invalid_argument, "signature length must be >= 1");
    std::mt19937_64 rng(seed);
    a_.resize(signature_length);
    b_.resize(signature_length);
    for (std::size_t k = 0; k < signature_length; ++k) {
      a_[k] = 1 + rng() % (kPrime - 1);
      b_[k] = rng() % kPrime;
    }
  }

  std::size_t length() const noexcept { return a_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t hash(std::size_t k, std::uint64_t x) const noexcept {
    const unsigned __int128 v = static_cast<unsigned __int128>(a_[k]) * x + b_[k];
    return mod_prime(v);
  }

  MinHashSignature sign(std::span<const std::uint32_t> set_columns, DocId doc = {}) const {
    if (set_columns.empty()) {
      throw Error(Errc::empty_row, "row " + doc.str() + " has no set columns");
    }
    MinHashSignature sig{std::move(doc), std::vector<std::uint64_t>(a_.size()), seed_};
    for (std::size_t k = 0; k < a_.size(); ++k) {
      std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
      for (std::uint32_t c : set_columns) best = std::min(best, hash(k, c));
      sig.values[k] = best;
    }
    return sig;
  }

 private:
  static std::uint64_t mod_prime(unsigned __int128 v) noexcept {
    std::uint64_t lo = static_cast<std::uint64_t>(v & kPrime);
    std::uint64_t hi = static_cast<std::uint64_t>(v >> 61);
    std::uint64_t r = lo + (hi & kPrime) + (hi >> 61);
    while (r >= kPrime) r -= kPrime;
    return r;
  }

  std::uint64_t seed_;
  std::vector<std::uint64_t> a_;
  std::vector<std::uint64_t> b_;
};

inline MinHashSignature minhash_signature(std::span<const std::uint32_t> set_columns,
                                          std::size_t signature_length, std::uint64_t seed,
                                          DocId doc = {}) {
  return MinHasher(signature_length, seed).sign(set_columns, std::move(doc));
}

/// Fraction of slots where the two signatures agree.
inline double signature_similarity(const MinHashSignature& a, const MinHashSignature& b) {
  if (a.values.size() != b.values.size() || a.seed != b.seed || a.values.empty()) {
    throw Error(Errc::signature_mismatch, "signatures of " + a.doc_id.str() + " and " + b.doc_id.str() +
                                              " were built with different length or seed");
  }
  std::size_t agree = 0;
  for (std::size_t k = 0; k < a.values.size(); ++k) agree += a.values[k] == b.values[k];
  return static_cast<double>(agree) / static_cast<double>(a.values.size());
}

/// |A ∩ B| / |A ∪ B| over sorted set-column lists; 0 when both are empty.
inline double exact_jaccard(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  std::size_t i = 0, j = 0, common = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++common, ++i, ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

struct BucketParams {
  double jaccard_threshold = 0.6;  // J_T
  std::size_t signature_length = 128;
  std::uint64_t seed = 1;
  bool exact_jaccard = false;  // oracle mode: bucket on exact row Jaccard
  std::size_t bands = 0;       // 0 = compare all pairs; otherwise LSH banding prefilter

  void validate() const {
    if (!(jaccard_threshold > 0.0 && jaccard_threshold <= 1.0)) {
      throw Error(Errc::invalid_argument, "J_T must lie in (0, 1]");
    }
    if (signature_length == 0) throw Error(Errc::invalid_argument, "signature length must be >= 1");
    if (bands != 0 && signature_length % bands != 0) {
      throw Error(Errc::invalid_argument, "bands must divide the signature length");
    }
  }

  friend bool operator==(const BucketParams&, const BucketParams&) = default;
};

/// Partition of one node kind into buckets. Bucket ids are the lowest member
/// DocId of each bucket.
class BucketMap {
 public:
  BucketMap() = default;

  BucketMap(NodeKind kind, std::vector<DocId> docs, std::vector<std::size_t> representative,
            BucketParams params)
      : kind_(kind), docs_(std::move(docs)), rep_(std::move(representative)), params_(params) {
    lookup_.reserve(docs_.size());
    for (std::size_t i = 0; i < docs_.size(); ++i) lookup_.emplace(docs_[i], i);
  }

  /// Builds a map from an explicit assignment, e.g. a hand-labelled ground truth.
  /// Members sharing a label share a bucket.
  template <typename Label>
  static BucketMap from_assignment(NodeKind kind, std::vector<std::pair<DocId, Label>> assignment) {
    std::sort(assignment.begin(), assignment.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<DocId> docs;
    std::vector<std::size_t> rep;
    std::vector<std::pair<Label, std::size_t>> first_seen;
    for (auto& [doc, label] : assignment) {
      std::size_t r = docs.size();
      bool found = false;
      for (const auto& [l, idx] : first_seen) {
        if (l == label) {
          r = idx;
          found = true;
          break;
        }
      }
      if (!found) first_seen.emplace_back(label, docs.size());
      docs.push_back(doc);
      rep.push_back(r);
    }
    return BucketMap(kind, std::move(docs), std::move(rep), BucketParams{});
  }

  NodeKind kind() const noexcept { return kind_; }
  const BucketParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return docs_.size(); }
  const std::vector<DocId>& docs() const noexcept { return docs_; }

  /// Index of the bucket representative of member i.
  std::size_t representative(std::size_t i) const { return rep_.at(i); }

  std::optional<std::size_t> index_of(const DocId& doc) const {
    auto it = lookup_.find(doc);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  /// Bucket id (lowest member) of `doc`, if bucketized.
  const DocId* bucket_of(const DocId& doc) const {
    auto i = index_of(doc);
    return i ? &docs_[rep_[*i]] : nullptr;
  }

  std::size_t bucket_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < rep_.size(); ++i) n += rep_[i] == i;
    return n;
  }

  /// Dense bucket labels aligned with docs(), numbered by first appearance.
  std::vector<std::size_t> labels() const {
    std::vector<std::size_t> out(rep_.size());
    std::unordered_map<std::size_t, std::size_t> dense;
    for (std::size_t i = 0; i < rep_.size(); ++i) {
      out[i] = dense.try_emplace(rep_[i], dense.size()).first->second;
    }
    return out;
  }

 private:
  NodeKind kind_ = NodeKind::Subject;
  std::vector<DocId> docs_;
  std::vector<std::size_t> rep_;
  BucketParams params_;
  std::unordered_map<DocId, std::size_t, DocIdHash> lookup_;
};

namespace detail {

inline BucketMap components_to_buckets(const FeatureMatrix& m, UnionFind& uf, const BucketParams& p) {
  // Rows are in DocId order, so the first row seen for a root is its lowest member.
  std::vector<std::size_t> rep(m.row_count());
  std::unordered_map<std::size_t, std::size_t> lowest;
  for (std::size_t i = 0; i < m.row_count(); ++i) {
    rep[i] = lowest.try_emplace(uf.find(i), i).first->second;
  }
  return BucketMap(m.kind, m.doc_ids, std::move(rep), p);
}

}  // namespace detail

inline std::vector<MinHashSignature> compute_signatures(const FeatureMatrix& m, std::size_t length,
                                                        std::uint64_t seed, std::size_t workers = 0) {
  const MinHasher hasher(length, seed);
  std::vector<MinHashSignature> sigs(m.row_count());
  detail::parallel_for(m.row_count(), [&](std::size_t i) { sigs[i] = hasher.sign(m.rows[i], m.doc_ids[i]); },
                       workers);
  return sigs;
}

/// Buckets are the connected components of the graph linking every row pair
/// whose signature similarity (or exact Jaccard in oracle mode) is >= J_T.
inline BucketMap bucketize(const FeatureMatrix& m, const BucketParams& params, std::size_t workers = 0) {
  params.validate();
  const std::size_t n = m.row_count();
  UnionFind uf(n);
  const double jt = params.jaccard_threshold;

  if (params.exact_jaccard) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!uf.connected(i, j) && exact_jaccard(m.rows[i], m.rows[j]) >= jt) uf.unite(i, j);
      }
    }
    return detail::components_to_buckets(m, uf, params);
  }

  const auto sigs = compute_signatures(m, params.signature_length, params.seed, workers);
  const std::size_t len = params.signature_length;
  // Agreement count needed to reach J_T, avoiding float division per pair.
  std::size_t needed = static_cast<std::size_t>(jt * static_cast<double>(len));
  while (static_cast<double>(needed) / static_cast<double>(len) < jt) ++needed;
  while (needed > 0 && static_cast<double>(needed - 1) / static_cast<double>(len) >= jt) --needed;

  const auto similar = [&](std::size_t i, std::size_t j) {
    const auto* a = sigs[i].values.data();
    const auto* b = sigs[j].values.data();
    std::size_t agree = 0;
    for (std::size_t k = 0; k < len; ++k) agree += a[k] == b[k];
    return agree >= needed;
  };

  if (params.bands == 0) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!uf.connected(i, j) && similar(i, j)) uf.unite(i, j);
      }
    }
  } else {
    const std::size_t rows_per_band = len / params.bands;
    for (std::size_t band = 0; band < params.bands; ++band) {
      std::unordered_map<std::uint64_t, std::vector<std::size_t>> groups;
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t h = 1469598103934665603ULL;
        for (std::size_t k = band * rows_per_band; k < (band + 1) * rows_per_band; ++k) {
          h = (h ^ sigs[i].values[k]) * 1099511628211ULL;
        }
        groups[h].push_back(i);
      }
      for (const auto& [_, members] : groups) {
        for (std::size_t x = 0; x < members.size(); ++x) {
          for (std::size_t y = x + 1; y < members.size(); ++y) {
            const auto i = members[x], j = members[y];
            if (!uf.connected(i, j) && similar(i, j)) uf.unite(i, j);
          }
        }
      }
    }
  }
  return detail::components_to_buckets(m, uf, params);
}

/// Text dump: one `<bucket_id> <doc_id>` line per member, in member order.
inline void dump_buckets(const BucketMap& b, std::ostream& out) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    out << b.docs()[b.representative(i)].str() << ' ' << b.docs()[i].str() << '\n';
  }
}

}  // namespace crosshunt
