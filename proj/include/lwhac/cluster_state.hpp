#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lwhac/dendrogram.hpp"

namespace lwhac {

/// Bookkeeping for active clusters, indexed by matrix slot (row index).
/// Slot s starts as leaf s; merging (i, j) keeps the union in slot i and
/// retires slot j.
class ClusterState {
 public:
  ClusterState() = default;
  explicit ClusterState(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  std::size_t active_count() const noexcept { return active_count_; }
  std::size_t merges_done() const noexcept { return n_ - active_count_; }
  bool is_active(std::size_t slot) const noexcept { return active_[slot] != 0; }
  std::size_t size(std::size_t slot) const noexcept { return sizes_[slot]; }
  /// Cluster id currently held by the slot.
  std::size_t label(std::size_t slot) const noexcept { return labels_[slot]; }
  /// Sum of sizes over active slots.
  std::size_t total_members() const noexcept;

  /// Merges slot j into slot i (i < j, both active) and returns the record.
  /// Throws std::domain_error on inactive or misordered slots.
  Merge merge(std::size_t i, std::size_t j, double height);

  friend bool operator==(const ClusterState&, const ClusterState&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t active_count_ = 0;
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> labels_;
  std::vector<std::uint8_t> active_;
};

}  // namespace lwhac
