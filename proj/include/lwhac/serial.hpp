#pragma once

#include <functional>

#include "lwhac/cluster_state.hpp"
#include "lwhac/condensed_matrix.hpp"
#include "lwhac/dendrogram.hpp"
#include "lwhac/linkage.hpp"

namespace lwhac {

/// Called after every merge with the updated matrix and cluster bookkeeping.
using SerialObserver =
    std::function<void(const CondensedMatrix&, const ClusterState&, const Merge&)>;

/// Naive O(n^3) Lance-Williams clustering.
///
/// Each iteration picks the smallest alive cell (ties: lexicographically
/// smallest pair), records the merge, rewrites row/column i with lw_update and
/// tombstones row/column j. Runs n-1 iterations; n <= 1 gives no merges.
Dendrogram serial_cluster(CondensedMatrix matrix, LinkageScheme scheme,
                          const SerialObserver& observer = {});

}  // namespace lwhac
