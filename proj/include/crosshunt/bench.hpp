#pragma once

#include <cstdio>
#include <ostream>
#include <span>
#include <vector>

#include "crosshunt/correlator.hpp"
#include "crosshunt/synthetic.hpp"

namespace crosshunt {

/// Stage timings on synthetic corpora of roughly each requested node count.
inline std::vector<StageTiming> benchmark(std::span<const std::size_t> sizes, const HuntConfig& cfg = {},
                                          std::uint64_t rng_seed = 7) {
  std::vector<StageTiming> rows;
  for (auto n : sizes) rows.push_back(measure_stages(synth::make_benchmark_corpus(n, rng_seed), cfg));
  return rows;
}

/// Whitespace-separated table with a header row, one line per corpus.
inline void print_benchmark(const std::vector<StageTiming>& rows, std::ostream& out) {
  out << "nodes graphs edges featurize_s bucketize_s similarity_s\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu %zu %zu %.6f %.6f %.6f\n", r.nodes, r.graphs, r.edges, r.featurize_s,
                  r.bucketize_s, r.similarity_s);
    out << buf;
  }
}

}  // namespace crosshunt
