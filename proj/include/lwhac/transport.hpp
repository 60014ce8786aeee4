#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <random>
#include <vector>

#include "lwhac/messages.hpp"

namespace lwhac {

struct IterationTraffic {
  std::size_t broadcasts = 0;
  std::size_t point_to_point = 0;

  friend bool operator==(const IterationTraffic&, const IterationTraffic&) = default;
};

/// Message counts. A broadcast counts once regardless of fan-out.
struct TrafficCounters {
  std::size_t broadcasts = 0;
  std::size_t point_to_point = 0;  // includes distribution
  std::size_t distribution = 0;    // point-to-point sends tagged kDistributionTag
  std::vector<IterationTraffic> per_iteration;

  friend bool operator==(const TrafficCounters&, const TrafficCounters&) = default;
};

/// Message-passing contract between p worker endpoints (ranks 0..p-1).
///
/// Delivery is reliable and FIFO per (src, dst) channel. Each endpoint is used
/// by one worker at a time; implementations must tolerate p endpoints being
/// driven from p threads.
class Transport {
 public:
  virtual ~Transport() = default;

  virtual Rank workers() const noexcept = 0;

  /// Delivers one copy to every rank, src included.
  virtual void broadcast(Rank src, std::int64_t iteration, WorkerMessage payload) = 0;
  /// src may be kLoader; src == dst is rejected.
  virtual void send(Rank src, Rank dst, std::int64_t iteration, WorkerMessage payload) = 0;
  virtual std::optional<Envelope> try_recv(Rank dst) = 0;
  /// Blocks until a message for dst arrives. Throws ProtocolError if every
  /// other rank has finished and nothing is queued, TransportError if closed.
  virtual Envelope recv(Rank dst) = 0;

  /// Marks rank as done sending for this run.
  virtual void finish(Rank rank) = 0;
  /// Wakes blocked receivers; further use throws TransportError.
  virtual void close() = 0;

  virtual TrafficCounters snapshot_counters() const = 0;
  /// Clears counters, queues, sequence state and finish marks for a new run.
  virtual void reset() = 0;
};

enum class Delivery {
  Fifo,      // global arrival order
  Shuffled,  // random choice among channel heads; per-channel FIFO kept
};

/// In-process reference transport: one mailbox per rank behind a mutex.
class InProcessTransport final : public Transport {
 public:
  explicit InProcessTransport(Rank workers, Delivery delivery = Delivery::Fifo,
                              std::uint64_t seed = 0);

  Rank workers() const noexcept override { return workers_; }
  void broadcast(Rank src, std::int64_t iteration, WorkerMessage payload) override;
  void send(Rank src, Rank dst, std::int64_t iteration, WorkerMessage payload) override;
  std::optional<Envelope> try_recv(Rank dst) override;
  Envelope recv(Rank dst) override;
  void finish(Rank rank) override;
  void close() override;
  TrafficCounters snapshot_counters() const override;
  void reset() override;

 private:
  struct Mailbox {
    std::deque<Envelope> queue;
    std::condition_variable ready;
  };

  void check_rank(Rank rank, const char* what) const;
  void check_tag(Rank src, std::int64_t iteration);
  void count(std::int64_t iteration, bool is_broadcast);
  std::optional<Envelope> pop_locked(Rank dst);
  bool others_finished_locked(Rank rank) const;

  Rank workers_;
  Delivery delivery_;
  std::uint64_t seed_;

  mutable std::mutex mutex_;
  std::vector<Mailbox> boxes_;
  std::vector<std::int64_t> last_tag_;  // per src, loader at index workers_
  std::vector<std::uint8_t> finished_;
  std::size_t finished_count_ = 0;
  bool closed_ = false;
  std::uint64_t next_seq_ = 0;
  std::mt19937_64 rng_;
  TrafficCounters counters_;
};

}  // namespace lwhac
