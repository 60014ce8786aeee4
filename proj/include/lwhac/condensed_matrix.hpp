#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace lwhac {

/// Number of cells in the strict upper triangle of an n x n matrix.
constexpr std::size_t triangle_size(std::size_t n) noexcept {
  return n < 2 ? 0 : n * (n - 1) / 2;
}

/// Flat offset of the first cell of row i, i.e. of the pair (i, i+1).
constexpr std::size_t row_start(std::size_t i, std::size_t n) noexcept {
  return i * n - i * (i + 1) / 2;
}

/// Row-major upper-triangle offset of the unordered pair {i, j}, 0 <= i < j < n.
/// Throws std::domain_error for i == j, i > j or out-of-range indices.
std::size_t condensed_index(std::size_t i, std::size_t j, std::size_t n);

/// Unchecked variant for hot loops; accepts the pair in either order.
constexpr std::size_t pair_offset(std::size_t a, std::size_t b, std::size_t n) noexcept {
  if (a > b) std::swap(a, b);
  return row_start(a, n) + (b - a - 1);
}

/// Inverse of condensed_index. Throws std::domain_error if offset is out of range.
std::pair<std::size_t, std::size_t> condensed_pair(std::size_t offset, std::size_t n);

/// Upper-triangular distance matrix with a tombstone flag per cell.
///
/// Distances are validated at construction (finite, non-negative). Cells start
/// alive; once killed they stay dead.
class CondensedMatrix {
 public:
  CondensedMatrix() = default;

  /// Throws InputError if distances.size() != triangle_size(n) or any value is
  /// NaN, infinite or negative.
  CondensedMatrix(std::size_t n, std::vector<double> distances);

  std::size_t n() const noexcept { return n_; }
  std::size_t cell_count() const noexcept { return distances_.size(); }

  double distance(std::size_t offset) const noexcept {
    assert(offset < distances_.size());
    return distances_[offset];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return distances_[pair_offset(i, j, n_)];
  }
  bool alive(std::size_t offset) const noexcept { return alive_[offset] != 0; }

  void set_distance(std::size_t offset, double d) noexcept {
    assert(alive(offset));
    distances_[offset] = d;
  }
  void kill(std::size_t offset) noexcept { alive_[offset] = 0; }

  std::span<const double> distances() const noexcept { return distances_; }
  std::size_t alive_count() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<double> distances_;
  std::vector<std::uint8_t> alive_;
};

}  // namespace lwhac
