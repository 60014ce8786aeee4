#include "lwhac/cluster_state.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace lwhac {

ClusterState::ClusterState(std::size_t n)
    : n_(n), active_count_(n), sizes_(n, 1), labels_(n), active_(n, 1) {
  std::iota(labels_.begin(), labels_.end(), std::size_t{0});
}

std::size_t ClusterState::total_members() const noexcept {
  std::size_t total = 0;
  for (std::size_t s = 0; s < n_; ++s) {
    if (active_[s]) total += sizes_[s];
  }
  return total;
}

Merge ClusterState::merge(std::size_t i, std::size_t j, double height) {
  if (i >= j || j >= n_ || !active_[i] || !active_[j]) {
    throw std::domain_error("ClusterState::merge: bad slots (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
  }
  const std::size_t a = labels_[i];
  const std::size_t b = labels_[j];
  Merge m{std::min(a, b), std::max(a, b), height, sizes_[i] + sizes_[j]};

  labels_[i] = n_ + merges_done();
  sizes_[i] = m.size;
  sizes_[j] = 0;
  active_[j] = 0;
  --active_count_;
  return m;
}

}  // namespace lwhac
