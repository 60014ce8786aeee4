#include "lwhac/transport.hpp"

#include <algorithm>
#include <string>

#include "lwhac/errors.hpp"

namespace lwhac {

InProcessTransport::InProcessTransport(Rank workers, Delivery delivery, std::uint64_t seed)
    : workers_(workers), delivery_(delivery), seed_(seed), rng_(seed) {
  if (workers < 1) throw TransportError("transport needs at least one worker endpoint");
  boxes_ = std::vector<Mailbox>(static_cast<std::size_t>(workers));
  last_tag_.assign(static_cast<std::size_t>(workers) + 1, kDistributionTag);
  finished_.assign(static_cast<std::size_t>(workers), 0);
}

void InProcessTransport::check_rank(Rank rank, const char* what) const {
  if (rank < 0 || rank >= workers_) {
    throw TransportError(std::string(what) + ": rank " + std::to_string(rank) + " out of range");
  }
}

void InProcessTransport::check_tag(Rank src, std::int64_t iteration) {
  auto& last = last_tag_[src == kLoader ? last_tag_.size() - 1 : static_cast<std::size_t>(src)];
  if (iteration < last) {
    throw TransportError("rank " + std::to_string(src) + " sent iteration " +
                         std::to_string(iteration) + " after " + std::to_string(last));
  }
  last = iteration;
}

void InProcessTransport::count(std::int64_t iteration, bool is_broadcast) {
  if (is_broadcast) {
    ++counters_.broadcasts;
  } else {
    ++counters_.point_to_point;
  }
  if (iteration == kDistributionTag) {
    if (!is_broadcast) ++counters_.distribution;
    return;
  }
  const auto k = static_cast<std::size_t>(iteration);
  if (counters_.per_iteration.size() <= k) counters_.per_iteration.resize(k + 1);
  auto& slot = counters_.per_iteration[k];
  (is_broadcast ? slot.broadcasts : slot.point_to_point) += 1;
}

void InProcessTransport::broadcast(Rank src, std::int64_t iteration, WorkerMessage payload) {
  check_rank(src, "broadcast");
  {
    std::lock_guard lock(mutex_);
    if (closed_) throw TransportError("broadcast on closed transport");
    check_tag(src, iteration);
    count(iteration, true);
    const std::uint64_t seq = next_seq_++;
    for (Rank dst = 0; dst < workers_; ++dst) {
      boxes_[static_cast<std::size_t>(dst)].queue.push_back(
          Envelope{src, kBroadcast, iteration, seq, payload});
    }
  }
  for (auto& box : boxes_) box.ready.notify_all();
}

void InProcessTransport::send(Rank src, Rank dst, std::int64_t iteration, WorkerMessage payload) {
  if (src != kLoader) check_rank(src, "send");
  check_rank(dst, "send");
  if (src == dst) throw TransportError("self-send from rank " + std::to_string(src));
  auto& box = boxes_[static_cast<std::size_t>(dst)];
  {
    std::lock_guard lock(mutex_);
    if (closed_) throw TransportError("send on closed transport");
    check_tag(src, iteration);
    count(iteration, false);
    box.queue.push_back(Envelope{src, dst, iteration, next_seq_++, std::move(payload)});
  }
  box.ready.notify_all();
}

std::optional<Envelope> InProcessTransport::pop_locked(Rank dst) {
  auto& q = boxes_[static_cast<std::size_t>(dst)].queue;
  if (q.empty()) return std::nullopt;
  std::size_t pick = 0;
  if (delivery_ == Delivery::Shuffled) {
    // Heads of each (src, dst) channel: the first queued envelope per source.
    std::vector<std::size_t> heads;
    std::vector<Rank> seen;
    for (std::size_t idx = 0; idx < q.size(); ++idx) {
      if (std::find(seen.begin(), seen.end(), q[idx].src) == seen.end()) {
        seen.push_back(q[idx].src);
        heads.push_back(idx);
      }
    }
    pick = heads[std::uniform_int_distribution<std::size_t>(0, heads.size() - 1)(rng_)];
  }
  Envelope env = std::move(q[pick]);
  q.erase(q.begin() + static_cast<std::ptrdiff_t>(pick));
  return env;
}

std::optional<Envelope> InProcessTransport::try_recv(Rank dst) {
  check_rank(dst, "try_recv");
  std::lock_guard lock(mutex_);
  if (closed_) throw TransportError("receive on closed transport");
  return pop_locked(dst);
}

bool InProcessTransport::others_finished_locked(Rank rank) const {
  const std::size_t self = finished_[static_cast<std::size_t>(rank)];
  return finished_count_ - self == static_cast<std::size_t>(workers_) - 1;
}

Envelope InProcessTransport::recv(Rank dst) {
  check_rank(dst, "recv");
  auto& box = boxes_[static_cast<std::size_t>(dst)];
  std::unique_lock lock(mutex_);
  box.ready.wait(lock, [&] {
    return closed_ || !box.queue.empty() || (workers_ > 1 && others_finished_locked(dst));
  });
  if (closed_) throw TransportError("receive on closed transport");
  if (box.queue.empty()) {
    throw ProtocolError("rank " + std::to_string(dst) +
                        " waits for a message but every peer has finished");
  }
  return *pop_locked(dst);
}

void InProcessTransport::finish(Rank rank) {
  check_rank(rank, "finish");
  {
    std::lock_guard lock(mutex_);
    auto& flag = finished_[static_cast<std::size_t>(rank)];
    if (!flag) {
      flag = 1;
      ++finished_count_;
    }
  }
  for (auto& box : boxes_) box.ready.notify_all();
}

void InProcessTransport::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  for (auto& box : boxes_) box.ready.notify_all();
}

TrafficCounters InProcessTransport::snapshot_counters() const {
  std::lock_guard lock(mutex_);
  return counters_;
}

void InProcessTransport::reset() {
  std::lock_guard lock(mutex_);
  for (auto& box : boxes_) box.queue.clear();
  std::fill(last_tag_.begin(), last_tag_.end(), kDistributionTag);
  std::fill(finished_.begin(), finished_.end(), std::uint8_t{0});
  finished_count_ = 0;
  closed_ = false;
  next_seq_ = 0;
  rng_.seed(seed_);
  counters_ = {};
}

}  // namespace lwhac
