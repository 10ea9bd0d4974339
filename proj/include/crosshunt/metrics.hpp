#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "crosshunt/error.hpp"

namespace crosshunt {

struct Confusion {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + tn + fp + fn; }
  double precision() const noexcept { return tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp); }
  double recall() const noexcept { return tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn); }
  double f1() const noexcept {
    const double p = precision(), r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }
  double accuracy() const noexcept { return total() == 0 ? 0.0 : double(tp + tn) / double(total()); }

  friend bool operator==(const Confusion&, const Confusion&) = default;
};

namespace detail {

struct Contingency {
  std::map<std::pair<std::size_t, std::size_t>, double> cells;
  std::map<std::size_t, double> rows;
  std::map<std::size_t, double> cols;
  double n = 0.0;
};

inline Contingency contingency(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) throw Error(Errc::invalid_argument, "labelings differ in length");
  Contingency c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    c.cells[{a[i], b[i]}] += 1.0;
    c.rows[a[i]] += 1.0;
    c.cols[b[i]] += 1.0;
  }
  c.n = static_cast<double>(a.size());
  return c;
}

inline double entropy(const std::map<std::size_t, double>& sizes, double n) {
  double h = 0.0;
  for (const auto& [_, s] : sizes) h -= (s / n) * std::log(s / n);
  return h;
}

inline double comb2(double x) noexcept { return x * (x - 1.0) / 2.0; }

}  // namespace detail

/// Normalized mutual information with arithmetic-mean normalization. Two
/// single-cluster labelings count as identical (1); otherwise a zero-entropy
/// side gives 0.
inline double normalized_mutual_information(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  const auto c = detail::contingency(a, b);
  if (c.n == 0.0) return 1.0;
  const double ha = detail::entropy(c.rows, c.n);
  const double hb = detail::entropy(c.cols, c.n);
  if (c.rows.size() == 1 && c.cols.size() == 1) return 1.0;
  double mi = 0.0;
  for (const auto& [key, nij] : c.cells) {
    const double ai = c.rows.at(key.first), bj = c.cols.at(key.second);
    mi += (nij / c.n) * std::log(nij * c.n / (ai * bj));
  }
  const double norm = (ha + hb) / 2.0;
  if (norm <= 0.0) return 0.0;
  return std::max(0.0, std::min(1.0, mi / norm));
}

/// Adjusted Rand index; 1 when the chance-corrected denominator vanishes
/// (both labelings trivial in the same way).
inline double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  const auto c = detail::contingency(a, b);
  double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [_, v] : c.cells) sum_cells += detail::comb2(v);
  for (const auto& [_, v] : c.rows) sum_rows += detail::comb2(v);
  for (const auto& [_, v] : c.cols) sum_cols += detail::comb2(v);
  const double total = detail::comb2(c.n);
  if (total == 0.0) return 1.0;
  const double expected = sum_rows * sum_cols / total;
  const double max_index = (sum_rows + sum_cols) / 2.0;
  if (max_index == expected) return 1.0;
  return (sum_cells - expected) / (max_index - expected);
}

}  // namespace crosshunt
