#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lwhac/condensed_matrix.hpp"
#include "lwhac/linkage.hpp"
#include "lwhac/partition.hpp"

namespace lwhac {

struct BenchConfig {
  std::vector<std::size_t> sizes;         // synthetic sizes, ignored when matrix is set
  std::optional<CondensedMatrix> matrix;  // file input
  LinkageScheme scheme = LinkageScheme::Complete;
  std::vector<Rank> procs;
  std::size_t repeats = 3;
  std::uint64_t seed = 1;
};

struct BenchRow {
  std::size_t n = 0;
  Rank p = 1;
  LinkageScheme scheme = LinkageScheme::Complete;
  std::size_t repeats = 0;
  double median_seconds = 0;
  std::size_t broadcasts = 0;
  std::size_t point_to_point = 0;
  std::size_t max_broadcasts_per_iteration = 0;
  std::size_t max_point_to_point_per_iteration = 0;
  std::uint64_t dendrogram_hash = 0;
};

/// Runs the threaded engine for every (n, p). Throws ProtocolError if repeats
/// of the same (n, p) disagree on the dendrogram.
std::vector<BenchRow> run_bench(const BenchConfig& config);

/// CSV with a leading '#' comment describing the timing method.
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace lwhac
