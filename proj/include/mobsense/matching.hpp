#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace mobsense {

/// Largest assignment the dense O(n^3) solver accepts.
inline constexpr std::size_t kMaxAssignmentSize = 2500;

/// Dense n x n matrix of non-negative, finite assignment costs, row-major.
class CostMatrix {
 public:
  explicit CostMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {
    if (n == 0) throw std::invalid_argument("CostMatrix: n must be >= 1");
    if (n > kMaxAssignmentSize) throw std::invalid_argument("CostMatrix: n exceeds 2500");
  }

  CostMatrix(std::size_t n, std::vector<double> entries) : CostMatrix(n) {
    if (entries.size() != n * n) throw std::invalid_argument("CostMatrix: expected n*n entries");
    for (double v : entries) check(v);
    entries_ = std::move(entries);
  }

  std::size_t size() const { return n_; }

  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

  void set(std::size_t i, std::size_t j, double v) {
    check(v);
    entries_[i * n_ + j] = v;
  }

  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }

 private:
  static void check(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("CostMatrix: entries must be finite");
    if (v < 0.0) throw std::invalid_argument("CostMatrix: entries must be non-negative");
  }

  std::size_t n_;
  std::vector<double> entries_;
};

struct Assignment {
  std::vector<std::size_t> row_to_col;
  double total_cost = 0.0;  ///< sum of c(i, row_to_col[i]) accumulated in row order
};

/**
 * @brief Exact min-cost perfect matching (Kuhn-Munkres with potentials,
 * shortest augmenting paths), O(n^3).
 */
inline Assignment hungarian(const CostMatrix& c) {
  const std::size_t n = c.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based with column 0 as the virtual source, as in the classic formulation.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), char{0});
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      const auto row = c.row(i0 - 1);
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) out.row_to_col[match[j] - 1] = j - 1;
  for (std::size_t i = 0; i < n; ++i) out.total_cost += c(i, out.row_to_col[i]);
  return out;
}

/// Cost of pairing the i-th smallest x with the i-th smallest y: sum |x_i - y_i|^a.
inline double sorted_matching_cost_1d(std::span<const double> xs, std::span<const double> ys, double a) {
  if (xs.size() != ys.size()) throw std::invalid_argument("sorted_matching_cost_1d: length mismatch");
  if (!(a > 0.0)) throw std::invalid_argument("sorted_matching_cost_1d: a must be > 0");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] < xs[i - 1] || ys[i] < ys[i - 1])
      throw std::invalid_argument("sorted_matching_cost_1d: inputs must be sorted");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) total += std::pow(std::abs(xs[i] - ys[i]), a);
  return total;
}

}  // namespace mobsense
