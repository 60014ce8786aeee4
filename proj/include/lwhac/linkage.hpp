#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace lwhac {

enum class LinkageScheme { Single, Complete, GroupAverage, WeightedAverage, Centroid, Ward };

inline constexpr std::array<LinkageScheme, 6> kAllSchemes = {
    LinkageScheme::Single,          LinkageScheme::Complete, LinkageScheme::GroupAverage,
    LinkageScheme::WeightedAverage, LinkageScheme::Centroid, LinkageScheme::Ward,
};

/// CLI spelling: single, complete, average, weighted, centroid, ward.
std::string_view scheme_name(LinkageScheme scheme) noexcept;
std::optional<LinkageScheme> parse_scheme(std::string_view name) noexcept;

/// Whether merge heights are guaranteed non-decreasing (all but Centroid).
constexpr bool is_monotone(LinkageScheme scheme) noexcept {
  return scheme != LinkageScheme::Centroid;
}

struct LinkageCoefficients {
  double alpha_i = 0;
  double alpha_j = 0;
  double beta = 0;
  double gamma = 0;

  friend bool operator==(const LinkageCoefficients&, const LinkageCoefficients&) = default;
};

/// Coefficients of the Lance-Williams recurrence for merging clusters of
/// sizes n_i and n_j, seen from a third cluster of size n_k. n_k only matters
/// for Ward. Throws std::domain_error if any size is zero.
LinkageCoefficients scheme_coefficients(LinkageScheme scheme, std::size_t n_i, std::size_t n_j,
                                        std::size_t n_k);

/// D(k, i+j) = alpha_i D(k,i) + alpha_j D(k,j) + beta D(i,j) + gamma |D(k,i) - D(k,j)|,
/// evaluated left to right. Both clustering paths call this one function.
double lw_update(double d_ki, double d_kj, double d_ij, const LinkageCoefficients& c) noexcept;

}  // namespace lwhac
