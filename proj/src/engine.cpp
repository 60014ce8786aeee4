#include "lwhac/engine.hpp"

#include <algorithm>
#include <bit>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "lwhac/errors.hpp"

namespace lwhac {

namespace {

constexpr double kDead = std::numeric_limits<double>::infinity();

std::string pair_text(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// WorkerState

WorkerState::WorkerState(Rank rank, PartitionMap map, LinkageScheme scheme, MatrixShard shard)
    : rank_(rank),
      map_(std::move(map)),
      scheme_(scheme),
      range_(map_.range(rank)),
      distances_(std::move(shard.distances)),
      clusters_(map_.n()) {
  if (shard.n != map_.n() || !(shard.range == range_) || distances_.size() != range_.size()) {
    throw ProtocolError("rank " + std::to_string(rank) + " received a shard for the wrong range");
  }
  alive_.assign(distances_.size(), 1);

  if (range_.size() == 0) return;
  const auto [i0, j0] = condensed_pair(range_.begin, n());
  if (shard.first_pair.i != i0 || shard.first_pair.j != j0) {
    throw ProtocolError("rank " + std::to_string(rank) + " shard index metadata mismatch");
  }
  std::size_t row = i0, col = j0, local = 0;
  while (local < distances_.size()) {
    const std::size_t len = std::min(n() - col, distances_.size() - local);
    segments_.push_back({row, col, local, local + len});
    local += len;
    ++row;
    col = row + 1;
  }
}

std::size_t WorkerState::alive_count() const noexcept {
  return static_cast<std::size_t>(std::count(alive_.begin(), alive_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> WorkerState::alive_offsets() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < alive_.size(); ++c) {
    if (alive_[c]) out.push_back(range_.begin + c);
  }
  return out;
}

void WorkerState::kill_local(std::size_t local) noexcept {
  alive_[local] = 0;
  distances_[local] = kDead;
}

void WorkerState::kill(std::size_t i, std::size_t j) noexcept {
  kill_local(pair_offset(i, j, n()) - range_.begin);
}

// ---------------------------------------------------------------------------
// Protocol steps

std::vector<WorkerState> distribute_matrix(const CondensedMatrix& matrix, const PartitionMap& map,
                                           LinkageScheme scheme, Transport& transport) {
  if (map.n() != matrix.n()) {
    throw std::domain_error("distribute_matrix: partition built for a different n");
  }
  if (transport.workers() != map.workers()) {
    throw std::domain_error("distribute_matrix: transport and partition disagree on p");
  }
  const auto all = matrix.distances();
  for (Rank r = 0; r < map.workers(); ++r) {
    const CellRange range = map.range(r);
    MatrixShard shard;
    shard.n = matrix.n();
    shard.range = range;
    if (range.size() > 0) {
      const auto [i, j] = condensed_pair(range.begin, matrix.n());
      shard.first_pair = {i, j};
    }
    shard.distances.assign(all.begin() + static_cast<std::ptrdiff_t>(range.begin),
                           all.begin() + static_cast<std::ptrdiff_t>(range.end));
    transport.send(kLoader, r, kDistributionTag, std::move(shard));
  }

  std::vector<WorkerState> states;
  states.reserve(static_cast<std::size_t>(map.workers()));
  for (Rank r = 0; r < map.workers(); ++r) {
    Envelope env = transport.recv(r);
    auto* shard = std::get_if<MatrixShard>(&env.payload);
    if (shard == nullptr || env.src != kLoader) {
      throw ProtocolError("rank " + std::to_string(r) + " expected its matrix shard first");
    }
    states.emplace_back(r, map, scheme, std::move(*shard));
  }
  return states;
}

LocalMin local_min_step(const WorkerState& state) {
  double best = kDead;
  std::size_t bi = 0, bj = 0;
  bool found = false;
  const double* d = state.distances_.data();
  for (const auto& seg : state.segments_) {
    if (!state.clusters_.is_active(seg.row)) continue;
    for (std::size_t c = seg.local_begin; c < seg.local_end; ++c) {
      if (d[c] < best) {
        best = d[c];
        bi = seg.row;
        bj = seg.first_col + (c - seg.local_begin);
        found = true;
      }
    }
  }
  LocalMin lm{state.rank(), best, std::nullopt};
  if (found) lm.pair = CellPair{bi, bj};
  return lm;
}

GlobalMin global_min_reduce(std::span<const LocalMin> mins) {
  const LocalMin* best = nullptr;
  for (const LocalMin& m : mins) {
    if (m.empty()) continue;
    if (best == nullptr || m.distance < best->distance ||
        (m.distance == best->distance &&
         (*m.pair < *best->pair || (*m.pair == *best->pair && m.rank < best->rank)))) {
      best = &m;
    }
  }
  if (best == nullptr) {
    throw ProtocolError("global_min_reduce: no worker has an alive cell but iterations remain");
  }
  return {best->distance, *best->pair, best->rank};
}

ExchangePlan plan_exchange(const WorkerState& state, const Combine& combine) {
  const std::size_t n = state.n();
  const auto& map = state.map();
  const auto& clusters = state.clusters();
  ExchangePlan plan;
  // Both owner sequences are non-decreasing in k, so destinations and sources
  // arrive in order and duplicates are adjacent.
  for (std::size_t k = 0; k < n; ++k) {
    if (k == combine.i || k == combine.j || !clusters.is_active(k)) continue;
    const Rank owner_ki = map.owner_of_offset(pair_offset(k, combine.i, n));
    const Rank owner_kj = map.owner_of_offset(pair_offset(k, combine.j, n));
    if (owner_ki == owner_kj) continue;
    if (owner_kj == state.rank()) {
      if (plan.outgoing.empty() || plan.outgoing.back().first != owner_ki) {
        plan.outgoing.push_back({owner_ki, TripleList{state.rank(), {}}});
      }
      plan.outgoing.back().second.triples.push_back({k, Side::J, state.distance(k, combine.j)});
    } else if (owner_ki == state.rank()) {
      if (plan.expected_sources.empty() || plan.expected_sources.back() != owner_kj) {
        plan.expected_sources.push_back(owner_kj);
      }
    }
  }
  std::sort(plan.outgoing.begin(), plan.outgoing.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::sort(plan.expected_sources.begin(), plan.expected_sources.end());
  plan.expected_sources.erase(
      std::unique(plan.expected_sources.begin(), plan.expected_sources.end()),
      plan.expected_sources.end());
  return plan;
}

void apply_exchange(WorkerState& state, const Combine& combine,
                    std::span<const TripleList> received) {
  const std::size_t n = state.n();
  const std::size_t i = combine.i;
  const std::size_t j = combine.j;
  auto& clusters = state.clusters_;

  std::vector<double> remote(n, 0.0);
  std::vector<std::uint8_t> have(n, 0);
  for (const TripleList& list : received) {
    for (const Triple& t : list.triples) {
      if (t.side != Side::J || t.k >= n) {
        throw ProtocolError("rank " + std::to_string(state.rank()) + " got a malformed triple");
      }
      remote[t.k] = t.distance;
      have[t.k] = 1;
    }
  }

  const std::size_t ni = clusters.size(i);
  const std::size_t nj = clusters.size(j);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i || k == j || !clusters.is_active(k) || !state.owns(k, i)) continue;
    double d_kj;
    if (state.owns(k, j)) {
      if (!state.alive(k, j)) {
        throw ProtocolError("cell " + pair_text(std::min(k, j), std::max(k, j)) +
                            " is dead but cluster " + std::to_string(k) + " is active");
      }
      d_kj = state.distance(k, j);
    } else if (have[k]) {
      d_kj = remote[k];
    } else {
      throw ProtocolError("rank " + std::to_string(state.rank()) + " missing triple for (k, j) = " +
                          pair_text(k, j));
    }
    const std::size_t local = pair_offset(k, i, n) - state.range_.begin;
    const auto coeffs = scheme_coefficients(state.scheme(), ni, nj, clusters.size(k));
    state.distances_[local] = lw_update(state.distances_[local], d_kj, combine.gmin, coeffs);
  }

  for (std::size_t k = 0; k < n; ++k) {
    if (k == j) continue;
    const std::size_t off = pair_offset(k, j, n);
    if (state.range_.contains(off)) state.kill_local(off - state.range_.begin);
  }
  state.merges_.push_back(clusters.merge(i, j, combine.gmin));
}

void merge_exchange(std::span<WorkerState> states, const Combine& combine, Transport& transport) {
  std::vector<ExchangePlan> plans;
  plans.reserve(states.size());
  for (WorkerState& s : states) {
    plans.push_back(plan_exchange(s, combine));
    const auto tag = static_cast<std::int64_t>(s.iteration());
    for (auto& [dst, list] : plans.back().outgoing) transport.send(s.rank(), dst, tag, list);
  }
  for (std::size_t idx = 0; idx < states.size(); ++idx) {
    WorkerState& s = states[idx];
    std::vector<TripleList> lists;
    for (std::size_t want = plans[idx].expected_sources.size(); want > 0; --want) {
      auto env = transport.try_recv(s.rank());
      if (!env) {
        throw ProtocolError("rank " + std::to_string(s.rank()) + " is missing a triple list");
      }
      auto* list = std::get_if<TripleList>(&env->payload);
      if (list == nullptr) throw ProtocolError("unexpected message during triple exchange");
      lists.push_back(std::move(*list));
    }
    apply_exchange(s, combine, lists);
  }
}

// ---------------------------------------------------------------------------
// Worker state machine and schedulers

namespace {

enum class Progress { Advanced, Blocked, Done };

class Worker {
 public:
  Worker(WorkerState& state, Transport& transport, const EngineOptions& options)
      : state_(state), transport_(transport), options_(options) {}

  bool done() const noexcept { return phase_ == Phase::Done; }

  void deliver(Envelope env) {
    if (std::holds_alternative<MatrixShard>(env.payload)) {
      throw ProtocolError("rank " + std::to_string(rank()) + " got a second matrix shard");
    }
    if (env.iteration < tag()) {
      throw ProtocolError("rank " + std::to_string(rank()) + " got a stale message for iteration " +
                          std::to_string(env.iteration));
    }
    stash_.push_back(std::move(env));
  }

  Progress step() {
    if (phase_ == Phase::Done) return Progress::Done;
    while (auto env = transport_.try_recv(rank())) deliver(std::move(*env));

    bool advanced = false;
    while (true) {
      switch (phase_) {
        case Phase::Announce:
          if (state_.n() < 2 || state_.iteration() + 1 >= state_.n()) {
            finish();
            return Progress::Done;
          }
          transport_.broadcast(rank(), tag(), local_min_step(state_));
          phase_ = Phase::GatherMins;
          break;
        case Phase::GatherMins:
          if (!gather_mins()) return advanced ? Progress::Advanced : Progress::Blocked;
          break;
        case Phase::AwaitCombine:
          if (!await_combine()) return advanced ? Progress::Advanced : Progress::Blocked;
          break;
        case Phase::AwaitTriples:
          if (!await_triples()) return advanced ? Progress::Advanced : Progress::Blocked;
          break;
        case Phase::Done:
          return Progress::Done;
      }
      advanced = true;
    }
  }

 private:
  enum class Phase { Announce, GatherMins, AwaitCombine, AwaitTriples, Done };

  Rank rank() const noexcept { return state_.rank(); }
  std::int64_t tag() const noexcept { return static_cast<std::int64_t>(state_.iteration()); }

  template <typename T>
  std::vector<std::size_t> stashed() const {
    std::vector<std::size_t> idx;
    for (std::size_t s = 0; s < stash_.size(); ++s) {
      if (stash_[s].iteration == tag() && std::holds_alternative<T>(stash_[s].payload)) {
        idx.push_back(s);
      }
    }
    return idx;
  }

  void erase_stashed(std::vector<std::size_t> idx) {
    std::sort(idx.rbegin(), idx.rend());
    for (std::size_t s : idx) stash_.erase(stash_.begin() + static_cast<std::ptrdiff_t>(s));
  }

  bool gather_mins() {
    const auto idx = stashed<LocalMin>();
    const auto p = static_cast<std::size_t>(transport_.workers());
    if (idx.size() < p) return false;
    std::vector<LocalMin> mins(p);
    std::vector<std::uint8_t> seen(p, 0);
    for (std::size_t s : idx) {
      const auto& lm = std::get<LocalMin>(stash_[s].payload);
      const auto r = static_cast<std::size_t>(lm.rank);
      if (lm.rank != stash_[s].src || r >= p || seen[r]) {
        throw ProtocolError("rank " + std::to_string(rank()) + " got a duplicate or forged local minimum");
      }
      seen[r] = 1;
      mins[r] = lm;
    }
    erase_stashed(idx);
    expected_ = global_min_reduce(mins);
    if (expected_.winner == rank()) {
      transport_.broadcast(rank(), tag(),
                           Combine{expected_.pair.i, expected_.pair.j, expected_.distance});
    }
    phase_ = Phase::AwaitCombine;
    return true;
  }

  bool await_combine() {
    const auto idx = stashed<Combine>();
    if (idx.empty()) return false;
    const Envelope& env = stash_[idx.front()];
    const auto& c = std::get<Combine>(env.payload);
    if (idx.size() > 1 || env.src != expected_.winner || c.i != expected_.pair.i ||
        c.j != expected_.pair.j ||
        std::bit_cast<std::uint64_t>(c.gmin) != std::bit_cast<std::uint64_t>(expected_.distance)) {
      throw ProtocolError("rank " + std::to_string(rank()) + " disagrees with the combine for " +
                          pair_text(c.i, c.j) + " at iteration " + std::to_string(tag()));
    }
    combine_ = c;
    erase_stashed(idx);

    ExchangePlan plan = plan_exchange(state_, combine_);
    for (auto& [dst, list] : plan.outgoing) transport_.send(rank(), dst, tag(), std::move(list));
    expected_sources_ = std::move(plan.expected_sources);
    phase_ = Phase::AwaitTriples;
    return true;
  }

  bool await_triples() {
    const auto idx = stashed<TripleList>();
    if (idx.size() < expected_sources_.size()) return false;
    std::vector<TripleList> lists;
    std::vector<Rank> senders;
    for (std::size_t s : idx) {
      senders.push_back(stash_[s].src);
      lists.push_back(std::get<TripleList>(stash_[s].payload));
    }
    std::sort(senders.begin(), senders.end());
    if (senders != expected_sources_) {
      throw ProtocolError("rank " + std::to_string(rank()) +
                          " received triple lists from unexpected ranks at iteration " +
                          std::to_string(tag()));
    }
    erase_stashed(idx);
    apply_exchange(state_, combine_, lists);
    if (options_.on_iteration) options_.on_iteration(state_);
    phase_ = Phase::Announce;
    return true;
  }

  void finish() {
    if (!stash_.empty()) {
      throw ProtocolError("rank " + std::to_string(rank()) + " finished with " +
                          std::to_string(stash_.size()) + " undelivered messages");
    }
    phase_ = Phase::Done;
    transport_.finish(rank());
  }

  WorkerState& state_;
  Transport& transport_;
  const EngineOptions& options_;
  Phase phase_ = Phase::Announce;
  std::vector<Envelope> stash_;
  GlobalMin expected_;
  Combine combine_;
  std::vector<Rank> expected_sources_;
};

void run_threads(std::vector<WorkerState>& states, Transport& transport,
                 const EngineOptions& options) {
  std::mutex error_mutex;
  std::exception_ptr first_error;
  {
    std::vector<std::jthread> threads;
    threads.reserve(states.size());
    for (WorkerState& state : states) {
      threads.emplace_back([&] {
        try {
          Worker worker(state, transport, options);
          while (true) {
            const Progress p = worker.step();
            if (p == Progress::Done) break;
            if (p == Progress::Blocked) worker.deliver(transport.recv(state.rank()));
          }
        } catch (...) {
          {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
          transport.close();
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

void run_interleaved(std::vector<WorkerState>& states, Transport& transport,
                     const EngineOptions& options) {
  std::vector<Worker> workers;
  workers.reserve(states.size());
  for (WorkerState& s : states) workers.emplace_back(s, transport, options);

  std::vector<std::size_t> order(workers.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(options.seed);
  std::size_t remaining = workers.size();
  while (remaining > 0) {
    std::shuffle(order.begin(), order.end(), rng);
    bool moved = false;
    for (std::size_t idx : order) {
      if (workers[idx].done()) continue;
      const Progress p = workers[idx].step();
      if (p == Progress::Done) --remaining;
      if (p != Progress::Blocked) moved = true;
    }
    if (!moved) throw ProtocolError("interleaved schedule made no progress (deadlock)");
  }
}

}  // namespace

Dendrogram run_distributed(const CondensedMatrix& matrix, LinkageScheme scheme, Rank p,
                           Transport& transport, const EngineOptions& options) {
  if (p < 1) throw std::domain_error("run_distributed: need at least one worker");
  if (transport.workers() != p) {
    throw std::domain_error("run_distributed: transport has " +
                            std::to_string(transport.workers()) + " endpoints, need " +
                            std::to_string(p));
  }
  const PartitionMap map = build_partition(matrix.n(), static_cast<std::size_t>(p));
  std::vector<WorkerState> states = distribute_matrix(matrix, map, scheme, transport);

  if (options.schedule == Schedule::Threads) {
    run_threads(states, transport, options);
  } else {
    run_interleaved(states, transport, options);
  }

  Dendrogram result{matrix.n(), states.front().merges()};
  for (const WorkerState& s : states) {
    if (!bitwise_equal(result, Dendrogram{matrix.n(), s.merges()})) {
      throw ProtocolError("rank " + std::to_string(s.rank()) + " ended with a different merge log");
    }
  }
  return result;
}

Dendrogram run_distributed(const CondensedMatrix& matrix, LinkageScheme scheme, Rank p) {
  if (p < 1) throw std::domain_error("run_distributed: need at least one worker");
  InProcessTransport transport(p);
  return run_distributed(matrix, scheme, p, transport);
}

}  // namespace lwhac
