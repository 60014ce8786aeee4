#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lwhac {

/// One agglomeration. Leaves are 0..n-1; merge k creates cluster id n+k.
/// left < right always.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0;
  std::size_t size = 0;

  friend bool operator==(const Merge&, const Merge&) = default;
};

struct Dendrogram {
  std::size_t n = 0;  // leaf count
  std::vector<Merge> merges;

  friend bool operator==(const Dendrogram&, const Dendrogram&) = default;
};

/// Equality including the bit patterns of the heights.
bool bitwise_equal(const Dendrogram& a, const Dendrogram& b) noexcept;

/// FNV-1a over n and every merge record (height by bit pattern).
std::uint64_t dendrogram_hash(const Dendrogram& d) noexcept;

/// Checks the structural invariants: n-1 merges, ids in range and used once,
/// sizes add up. Throws InputError naming the first bad merge.
void validate(const Dendrogram& d);

/// The k groups present after the first n-k merges, each sorted, ordered by
/// smallest member. Throws std::domain_error unless 1 <= k <= n.
std::vector<std::vector<std::size_t>> flat_clusters(const Dendrogram& d, std::size_t k);

/// Per-item label in 0..k-1 for the cut at k clusters (labels follow flat_clusters order).
std::vector<std::size_t> cluster_labels(const Dendrogram& d, std::size_t k);

/// "left,right,height,size" per line, no header.
std::string to_merge_csv(const Dendrogram& d);
/// Reads merge-list CSV (optional header row). Throws InputError.
Dendrogram parse_merge_csv(std::string_view text);

/// Newick with leaf indices as labels and branch length = parent height - child height.
std::string to_newick(const Dendrogram& d);
/// Nested JSON tree: {"n": .., "root": {"id", "height", "size", "children": [..]}}.
std::string to_json(const Dendrogram& d, int indent = 2);

}  // namespace lwhac
