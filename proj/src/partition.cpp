#include "lwhac/partition.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "lwhac/condensed_matrix.hpp"

namespace lwhac {

PartitionMap::PartitionMap(std::size_t n, std::vector<std::size_t> boundaries)
    : n_(n), boundaries_(std::move(boundaries)) {
  if (boundaries_.size() < 2 || boundaries_.front() != 0 ||
      boundaries_.back() != triangle_size(n) ||
      !std::is_sorted(boundaries_.begin(), boundaries_.end())) {
    throw std::domain_error("PartitionMap: boundaries must rise from 0 to the cell count");
  }
}

CellRange PartitionMap::range(Rank rank) const {
  if (rank < 0 || rank >= workers()) {
    throw std::domain_error("PartitionMap: rank " + std::to_string(rank) + " out of range");
  }
  const auto r = static_cast<std::size_t>(rank);
  return {boundaries_[r], boundaries_[r + 1]};
}

Rank PartitionMap::owner_of_offset(std::size_t offset) const noexcept {
  // Last boundary <= offset whose range is non-empty: upper_bound skips empty ranges.
  const auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), offset);
  return static_cast<Rank>(it - boundaries_.begin()) - 1;
}

PartitionMap build_partition(std::size_t n, std::size_t p) {
  if (p == 0) throw std::domain_error("build_partition: need at least one worker");
  const std::size_t cells = triangle_size(n);
  const std::size_t base = cells / p;
  const std::size_t extra = cells % p;
  std::vector<std::size_t> boundaries(p + 1, 0);
  for (std::size_t m = 0; m < p; ++m) {
    boundaries[m + 1] = boundaries[m] + base + (m < extra ? 1 : 0);
  }
  return PartitionMap(n, std::move(boundaries));
}

Rank owner_of(const PartitionMap& map, std::size_t i, std::size_t j) {
  return map.owner_of_offset(condensed_index(i, j, map.n()));
}

std::vector<TouchingCell> cells_touching(const PartitionMap& map, Rank rank, std::size_t cluster) {
  const CellRange r = map.range(rank);
  const std::size_t n = map.n();
  std::vector<TouchingCell> out;
  if (cluster >= n || r.size() == 0) return out;
  for (std::size_t partner = 0; partner < n; ++partner) {
    if (partner == cluster) continue;
    const std::size_t off = pair_offset(partner, cluster, n);
    if (r.contains(off)) out.push_back({partner, off});
  }
  return out;
}

}  // namespace lwhac
