#include "lwhac/synthetic.hpp"

#include <random>
#include <vector>

namespace lwhac {

CondensedMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  // mt19937_64 output is fixed by the standard; the bit-to-double mapping is
  // done by hand because uniform_real_distribution is not.
  std::mt19937_64 rng(seed);
  std::vector<double> cells(triangle_size(n));
  for (double& d : cells) d = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return CondensedMatrix(n, std::move(cells));
}

}  // namespace lwhac
