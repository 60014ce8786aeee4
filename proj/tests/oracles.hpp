// Independent reference computations for the test suites. Nothing here calls
// into the clustering or partition code it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "lwhac/condensed_matrix.hpp"
#include "lwhac/dendrogram.hpp"

namespace oracle {

/// Offset of (i, j) found by walking every pair in row-major order.
inline std::size_t enumerate_offset(std::size_t i, std::size_t j, std::size_t n) {
  std::size_t off = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (a == i && b == j) return off;
      ++off;
    }
  }
  return std::numeric_limits<std::size_t>::max();
}

/// Full symmetric matrix as nested vectors.
using Square = std::vector<std::vector<double>>;

inline Square to_square(const lwhac::CondensedMatrix& m) {
  Square s(m.n(), std::vector<double>(m.n(), 0.0));
  for (std::size_t i = 0; i < m.n(); ++i) {
    for (std::size_t j = i + 1; j < m.n(); ++j) s[i][j] = s[j][i] = m(i, j);
  }
  return s;
}

/// Original members of every cluster id 0..2n-2 reconstructed from a merge list.
inline std::vector<std::vector<std::size_t>> members(const lwhac::Dendrogram& d) {
  std::vector<std::vector<std::size_t>> out(d.n + d.merges.size());
  for (std::size_t i = 0; i < d.n; ++i) out[i] = {i};
  for (std::size_t k = 0; k < d.merges.size(); ++k) {
    auto& m = out[d.n + k];
    m = out[d.merges[k].left];
    m.insert(m.end(), out[d.merges[k].right].begin(), out[d.merges[k].right].end());
    std::sort(m.begin(), m.end());
  }
  return out;
}

inline double max_pairwise(const Square& s, const std::vector<std::size_t>& a,
                           const std::vector<std::size_t>& b) {
  double best = -1;
  for (auto x : a)
    for (auto y : b) best = std::max(best, s[x][y]);
  return best;
}

inline double min_pairwise(const Square& s, const std::vector<std::size_t>& a,
                           const std::vector<std::size_t>& b) {
  double best = std::numeric_limits<double>::infinity();
  for (auto x : a)
    for (auto y : b) best = std::min(best, s[x][y]);
  return best;
}

inline double mean_pairwise(const Square& s, const std::vector<std::size_t>& a,
                            const std::vector<std::size_t>& b) {
  long double sum = 0;
  for (auto x : a)
    for (auto y : b) sum += s[x][y];
  return static_cast<double>(sum / static_cast<long double>(a.size() * b.size()));
}

/// Edge weights of a minimum spanning tree of the complete graph (Prim, O(n^2)).
inline std::vector<double> mst_weights(const Square& s) {
  const std::size_t n = s.size();
  std::vector<double> out;
  if (n < 2) return out;
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<bool> in_tree(n, false);
  dist[0] = 0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && (u == n || dist[v] < dist[u])) u = v;
    }
    in_tree[u] = true;
    if (step > 0) out.push_back(dist[u]);
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v]) dist[v] = std::min(dist[v], s[u][v]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Uniform distances in [0.5, 100); with ties=true values are drawn from a few
/// integers so equal minima are common.
inline lwhac::CondensedMatrix random_matrix(std::size_t n, std::mt19937_64& rng, bool ties) {
  std::vector<double> cells(lwhac::triangle_size(n));
  std::uniform_real_distribution<double> real(0.5, 100.0);
  std::uniform_int_distribution<int> small(1, 5);
  for (double& c : cells) c = ties ? small(rng) : real(rng);
  return lwhac::CondensedMatrix(n, std::move(cells));
}

/// Same matrix with items relabeled: new item perm[a] is old item a.
inline lwhac::CondensedMatrix permuted(const lwhac::CondensedMatrix& m,
                                       const std::vector<std::size_t>& perm) {
  const std::size_t n = m.n();
  std::vector<std::size_t> inverse(n);
  for (std::size_t a = 0; a < n; ++a) inverse[perm[a]] = a;
  std::vector<double> cells;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) cells.push_back(m(inverse[i], inverse[j]));
  return lwhac::CondensedMatrix(n, std::move(cells));
}

}  // namespace oracle
