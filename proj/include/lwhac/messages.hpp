#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "lwhac/partition.hpp"

namespace lwhac {

inline constexpr Rank kBroadcast = -1;
/// Source rank of the initial matrix distribution; not one of the workers.
inline constexpr Rank kLoader = -2;
/// Iteration tag carried by MatrixShard envelopes.
inline constexpr std::int64_t kDistributionTag = -1;

struct CellPair {
  std::size_t i = 0;
  std::size_t j = 0;

  friend auto operator<=>(const CellPair&, const CellPair&) = default;
};

/// A worker's contiguous slice of the condensed matrix plus its global indices.
struct MatrixShard {
  std::size_t n = 0;
  CellRange range;
  CellPair first_pair;  // pair at range.begin; meaningless for empty ranges
  std::vector<double> distances;
};

/// Smallest alive cell of one worker; pair is empty when nothing is alive.
struct LocalMin {
  Rank rank = 0;
  double distance = 0;
  std::optional<CellPair> pair;

  bool empty() const noexcept { return !pair.has_value(); }
};

/// Announcement that clusters i < j merge at height gmin.
struct Combine {
  std::size_t i = 0;
  std::size_t j = 0;
  double gmin = 0;
};

enum class Side : std::uint8_t { I, J };

struct Triple {
  std::size_t k = 0;  // the third cluster
  Side side = Side::J;
  double distance = 0;
};

/// Batched D(k, j) values from one j-side owner to one i-side owner, sorted by k.
struct TripleList {
  Rank sender = 0;
  std::vector<Triple> triples;
};

using WorkerMessage = std::variant<MatrixShard, LocalMin, Combine, TripleList>;

struct Envelope {
  Rank src = 0;
  Rank dst = 0;  // kBroadcast for broadcasts
  std::int64_t iteration = 0;
  std::uint64_t seq = 0;  // assigned by the transport, unique per run
  WorkerMessage payload;
};

}  // namespace lwhac
