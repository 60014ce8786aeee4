#include "lwhac/serial.hpp"

#include <limits>

namespace lwhac {

Dendrogram serial_cluster(CondensedMatrix matrix, LinkageScheme scheme,
                          const SerialObserver& observer) {
  const std::size_t n = matrix.n();
  Dendrogram result{n, {}};
  if (n < 2) return result;
  result.merges.reserve(n - 1);

  ClusterState clusters(n);
  for (std::size_t iter = 0; iter + 1 < n; ++iter) {
    // Row-major scan with strict '<' keeps the lexicographically first minimum.
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!clusters.is_active(i)) continue;
      const std::size_t base = row_start(i, n) - (i + 1);
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::size_t off = base + j;
        if (matrix.alive(off) && matrix.distance(off) < best) {
          best = matrix.distance(off);
          bi = i;
          bj = j;
        }
      }
    }

    const std::size_t ni = clusters.size(bi);
    const std::size_t nj = clusters.size(bj);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == bi || k == bj || !clusters.is_active(k)) continue;
      const std::size_t ki = pair_offset(k, bi, n);
      const auto coeffs = scheme_coefficients(scheme, ni, nj, clusters.size(k));
      matrix.set_distance(ki, lw_update(matrix.distance(ki), matrix(k, bj), best, coeffs));
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (k != bj) matrix.kill(pair_offset(k, bj, n));
    }

    result.merges.push_back(clusters.merge(bi, bj, best));
    if (observer) observer(matrix, clusters, result.merges.back());
  }
  return result;
}

}  // namespace lwhac
