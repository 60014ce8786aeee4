#pragma once

#include <cstddef>
#include <vector>

namespace lwhac {

using Rank = int;

/// Half-open range of flat condensed offsets.
struct CellRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool contains(std::size_t offset) const noexcept { return offset >= begin && offset < end; }
  friend bool operator==(const CellRange&, const CellRange&) = default;
};

/// Contiguous row-major assignment of the (n^2-n)/2 cells to p workers.
/// Worker m owns [boundaries[m], boundaries[m+1]).
class PartitionMap {
 public:
  PartitionMap() = default;
  PartitionMap(std::size_t n, std::vector<std::size_t> boundaries);

  std::size_t n() const noexcept { return n_; }
  Rank workers() const noexcept { return static_cast<Rank>(boundaries_.size()) - 1; }
  const std::vector<std::size_t>& boundaries() const noexcept { return boundaries_; }
  CellRange range(Rank rank) const;
  std::size_t cell_count(Rank rank) const { return range(rank).size(); }
  /// Owner of a flat offset (binary search over boundaries). Unchecked.
  Rank owner_of_offset(std::size_t offset) const noexcept;

  friend bool operator==(const PartitionMap&, const PartitionMap&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> boundaries_;
};

/// Splits the cells into p contiguous ranges of floor or ceil(cells/p); the
/// remainder goes one cell each to the lowest ranks. p may exceed the cell
/// count, in which case the surplus workers own empty ranges.
/// Throws std::domain_error for p == 0.
PartitionMap build_partition(std::size_t n, std::size_t p);

/// Worker owning pair {i, j}, i < j < n. Throws std::domain_error otherwise.
Rank owner_of(const PartitionMap& map, std::size_t i, std::size_t j);

struct TouchingCell {
  std::size_t partner = 0;
  std::size_t offset = 0;

  friend bool operator==(const TouchingCell&, const TouchingCell&) = default;
};

/// Every cell owned by rank whose pair contains cluster, by ascending partner.
std::vector<TouchingCell> cells_touching(const PartitionMap& map, Rank rank, std::size_t cluster);

}  // namespace lwhac
