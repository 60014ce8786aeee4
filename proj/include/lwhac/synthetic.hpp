#pragma once

#include <cstddef>
#include <cstdint>

#include "lwhac/condensed_matrix.hpp"

namespace lwhac {

/// Distances uniform in [0, 1), reproducible from the seed on any platform.
CondensedMatrix random_matrix(std::size_t n, std::uint64_t seed);

}  // namespace lwhac
