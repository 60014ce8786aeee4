#include "lwhac/condensed_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lwhac/errors.hpp"

namespace lwhac {

std::size_t condensed_index(std::size_t i, std::size_t j, std::size_t n) {
  if (i >= j || j >= n) {
    throw std::domain_error("condensed_index: need i < j < n, got (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") with n = " + std::to_string(n));
  }
  return row_start(i, n) + (j - i - 1);
}

std::pair<std::size_t, std::size_t> condensed_pair(std::size_t offset, std::size_t n) {
  if (offset >= triangle_size(n)) {
    throw std::domain_error("condensed_pair: offset " + std::to_string(offset) +
                            " out of range for n = " + std::to_string(n));
  }
  // Closed-form row estimate, then fix up any rounding.
  const double nn = static_cast<double>(n);
  const double disc = (2 * nn - 1) * (2 * nn - 1) - 8.0 * static_cast<double>(offset);
  auto i = static_cast<std::size_t>(std::max(0.0, std::floor((2 * nn - 1 - std::sqrt(disc)) / 2)));
  i = std::min(i, n - 2);
  while (i > 0 && row_start(i, n) > offset) --i;
  while (i + 1 < n - 1 && row_start(i + 1, n) <= offset) ++i;
  return {i, i + 1 + (offset - row_start(i, n))};
}

CondensedMatrix::CondensedMatrix(std::size_t n, std::vector<double> distances)
    : n_(n), distances_(std::move(distances)) {
  if (distances_.size() != triangle_size(n)) {
    throw InputError("condensed matrix for n = " + std::to_string(n) + " needs " +
                     std::to_string(triangle_size(n)) + " cells, got " +
                     std::to_string(distances_.size()));
  }
  for (std::size_t off = 0; off < distances_.size(); ++off) {
    double& d = distances_[off];
    d += 0.0;  // -0.0 -> +0.0
    if (!std::isfinite(d) || d < 0) {
      const auto [i, j] = condensed_pair(off, n);
      throw InputError("invalid distance " + std::to_string(d) + " at cell (" + std::to_string(i) +
                       ", " + std::to_string(j) + "): must be finite and non-negative");
    }
  }
  alive_.assign(distances_.size(), 1);
}

std::size_t CondensedMatrix::alive_count() const noexcept {
  return static_cast<std::size_t>(std::count(alive_.begin(), alive_.end(), std::uint8_t{1}));
}

}  // namespace lwhac
