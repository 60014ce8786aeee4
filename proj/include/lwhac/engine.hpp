#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lwhac/cluster_state.hpp"
#include "lwhac/condensed_matrix.hpp"
#include "lwhac/dendrogram.hpp"
#include "lwhac/linkage.hpp"
#include "lwhac/messages.hpp"
#include "lwhac/partition.hpp"
#include "lwhac/transport.hpp"

namespace lwhac {

/// Everything one worker holds: its slice of the matrix, a replica of the
/// cluster bookkeeping, and its copy of the merge log.
class WorkerState {
 public:
  WorkerState(Rank rank, PartitionMap map, LinkageScheme scheme, MatrixShard shard);

  Rank rank() const noexcept { return rank_; }
  const PartitionMap& map() const noexcept { return map_; }
  LinkageScheme scheme() const noexcept { return scheme_; }
  CellRange range() const noexcept { return range_; }
  std::size_t n() const noexcept { return map_.n(); }
  std::size_t iteration() const noexcept { return clusters_.merges_done(); }
  const ClusterState& clusters() const noexcept { return clusters_; }
  const std::vector<Merge>& merges() const noexcept { return merges_; }

  bool owns(std::size_t i, std::size_t j) const noexcept {
    return range_.contains(pair_offset(i, j, n()));
  }
  /// Distance of an owned cell (dead cells read +inf).
  double distance(std::size_t i, std::size_t j) const noexcept {
    return distances_[pair_offset(i, j, n()) - range_.begin];
  }
  bool alive(std::size_t i, std::size_t j) const noexcept {
    return alive_[pair_offset(i, j, n()) - range_.begin] != 0;
  }
  std::size_t alive_count() const noexcept;
  /// Flat offsets of the owned cells that are still alive.
  std::vector<std::size_t> alive_offsets() const;

  /// Tombstones an owned cell.
  void kill(std::size_t i, std::size_t j) noexcept;

 private:
  friend LocalMin local_min_step(const WorkerState& state);
  friend void apply_exchange(WorkerState& state, const Combine& combine,
                             std::span<const TripleList> received);

  struct RowSegment {
    std::size_t row;
    std::size_t first_col;
    std::size_t local_begin;
    std::size_t local_end;
  };

  void kill_local(std::size_t local) noexcept;

  Rank rank_;
  PartitionMap map_;
  LinkageScheme scheme_;
  CellRange range_;
  std::vector<double> distances_;  // dead cells hold +inf so the scan needs no flag test
  std::vector<std::uint8_t> alive_;
  std::vector<RowSegment> segments_;
  ClusterState clusters_;
  std::vector<Merge> merges_;
};

/// Loader sends one MatrixShard per worker (p point-to-point messages), then
/// each endpoint's shard is received and turned into a WorkerState.
std::vector<WorkerState> distribute_matrix(const CondensedMatrix& matrix, const PartitionMap& map,
                                           LinkageScheme scheme, Transport& transport);

/// Smallest alive owned cell with lexicographic pair tie-break, or the empty
/// sentinel when the worker has nothing alive.
LocalMin local_min_step(const WorkerState& state);

struct GlobalMin {
  double distance = 0;
  CellPair pair;
  Rank winner = 0;
};

/// Smallest distance, then smallest pair, then lowest rank; sentinels ignored.
/// Throws ProtocolError when every entry is a sentinel.
GlobalMin global_min_reduce(std::span<const LocalMin> mins);

/// Outgoing triple traffic of one worker for one merge.
struct ExchangePlan {
  /// One batched list per destination that owns an {k, i} cell needing a
  /// D(k, j) this worker holds. Sorted by destination.
  std::vector<std::pair<Rank, TripleList>> outgoing;
  /// Ranks this worker must hear from before it can update its {k, i} cells.
  std::vector<Rank> expected_sources;
};

ExchangePlan plan_exchange(const WorkerState& state, const Combine& combine);

/// Rewrites the owned {k, i} cells with lw_update, tombstones every owned cell
/// touching j, and advances the cluster replica and merge log.
/// Throws ProtocolError if a needed D(k, j) is neither local nor received.
void apply_exchange(WorkerState& state, const Combine& combine,
                    std::span<const TripleList> received);

/// Single-threaded exchange for a full set of workers: every plan is sent
/// through the transport, then every worker drains and applies.
void merge_exchange(std::span<WorkerState> states, const Combine& combine, Transport& transport);

enum class Schedule {
  Threads,      // one thread per worker, blocking receives
  Interleaved,  // all workers stepped on the calling thread in seeded random order
};

struct EngineOptions {
  Schedule schedule = Schedule::Threads;
  std::uint64_t seed = 0;
  /// Invoked by each worker after finishing an iteration. May run on worker
  /// threads concurrently.
  std::function<void(const WorkerState&)> on_iteration;
};

/// Agglomerative clustering spread over p workers. The result is bitwise identical
/// to serial_cluster on the same input. transport.workers() must equal p.
Dendrogram run_distributed(const CondensedMatrix& matrix, LinkageScheme scheme, Rank p,
                           Transport& transport, const EngineOptions& options = {});

/// Same, over a fresh in-process FIFO transport.
Dendrogram run_distributed(const CondensedMatrix& matrix, LinkageScheme scheme, Rank p);

}  // namespace lwhac
