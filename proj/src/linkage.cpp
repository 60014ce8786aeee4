#include "lwhac/linkage.hpp"

#include <cmath>
#include <stdexcept>

namespace lwhac {

std::string_view scheme_name(LinkageScheme scheme) noexcept {
  switch (scheme) {
    case LinkageScheme::Single: return "single";
    case LinkageScheme::Complete: return "complete";
    case LinkageScheme::GroupAverage: return "average";
    case LinkageScheme::WeightedAverage: return "weighted";
    case LinkageScheme::Centroid: return "centroid";
    case LinkageScheme::Ward: return "ward";
  }
  return "unknown";
}

std::optional<LinkageScheme> parse_scheme(std::string_view name) noexcept {
  for (LinkageScheme s : kAllSchemes) {
    if (scheme_name(s) == name) return s;
  }
  return std::nullopt;
}

// Every size-dependent entry is a single division of exact integers, so each
// coefficient is the correctly rounded value of its rational.
LinkageCoefficients scheme_coefficients(LinkageScheme scheme, std::size_t n_i, std::size_t n_j,
                                        std::size_t n_k) {
  if (n_i == 0 || n_j == 0 || n_k == 0) {
    throw std::domain_error("scheme_coefficients: cluster sizes must be positive");
  }
  const double ni = static_cast<double>(n_i);
  const double nj = static_cast<double>(n_j);
  const double nk = static_cast<double>(n_k);

  switch (scheme) {
    case LinkageScheme::Single: return {0.5, 0.5, 0.0, -0.5};
    case LinkageScheme::Complete: return {0.5, 0.5, 0.0, 0.5};
    case LinkageScheme::WeightedAverage: return {0.5, 0.5, 0.0, 0.0};
    case LinkageScheme::GroupAverage: {
      const double s = ni + nj;
      return {ni / s, nj / s, 0.0, 0.0};
    }
    case LinkageScheme::Centroid: {
      const double s = ni + nj;
      return {ni / s, nj / s, -(ni * nj) / (s * s), 0.0};
    }
    case LinkageScheme::Ward: {
      const double t = ni + nj + nk;
      return {(ni + nk) / t, (nj + nk) / t, -nk / t, 0.0};
    }
  }
  throw std::domain_error("scheme_coefficients: unknown scheme");
}

double lw_update(double d_ki, double d_kj, double d_ij, const LinkageCoefficients& c) noexcept {
  return c.alpha_i * d_ki + c.alpha_j * d_kj + c.beta * d_ij + c.gamma * std::abs(d_ki - d_kj);
}

}  // namespace lwhac
