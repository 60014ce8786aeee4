#include "lwhac/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>

#include "lwhac/engine.hpp"
#include "lwhac/errors.hpp"
#include "lwhac/synthetic.hpp"

namespace lwhac {

namespace {

BenchRow bench_one(const CondensedMatrix& matrix, const BenchConfig& config, Rank p) {
  BenchRow row;
  row.n = matrix.n();
  row.p = p;
  row.scheme = config.scheme;
  row.repeats = std::max<std::size_t>(config.repeats, 1);

  std::vector<double> seconds;
  for (std::size_t r = 0; r < row.repeats; ++r) {
    InProcessTransport transport(p);
    const auto start = std::chrono::steady_clock::now();
    const Dendrogram d = run_distributed(matrix, config.scheme, p, transport);
    const auto stop = std::chrono::steady_clock::now();
    seconds.push_back(std::chrono::duration<double>(stop - start).count());

    const std::uint64_t hash = dendrogram_hash(d);
    if (r > 0 && hash != row.dendrogram_hash) {
      throw ProtocolError("bench: repeat " + std::to_string(r) + " produced a different dendrogram");
    }
    row.dendrogram_hash = hash;

    const TrafficCounters c = transport.snapshot_counters();
    row.broadcasts = c.broadcasts;
    row.point_to_point = c.point_to_point;
    row.max_broadcasts_per_iteration = 0;
    row.max_point_to_point_per_iteration = 0;
    for (const auto& it : c.per_iteration) {
      row.max_broadcasts_per_iteration = std::max(row.max_broadcasts_per_iteration, it.broadcasts);
      row.max_point_to_point_per_iteration =
          std::max(row.max_point_to_point_per_iteration, it.point_to_point);
    }
  }
  std::sort(seconds.begin(), seconds.end());
  const std::size_t mid = seconds.size() / 2;
  row.median_seconds =
      seconds.size() % 2 == 1 ? seconds[mid] : (seconds[mid - 1] + seconds[mid]) / 2;
  return row;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  std::vector<BenchRow> rows;
  auto sweep = [&](const CondensedMatrix& matrix) {
    for (Rank p : config.procs) rows.push_back(bench_one(matrix, config, p));
  };
  if (config.matrix) {
    sweep(*config.matrix);
  } else {
    for (std::size_t n : config.sizes) sweep(random_matrix(n, config.seed));
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "# median_seconds: median steady_clock wall time over repeats, covering partition, "
         "distribution and all iterations (threaded in-process transport)\n";
  out << "n,p,scheme,repeats,median_seconds,broadcasts,point_to_point,"
         "max_broadcasts_per_iteration,max_point_to_point_per_iteration,dendrogram_hash\n";
  for (const BenchRow& r : rows) {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.dendrogram_hash));
    out << r.n << ',' << r.p << ',' << scheme_name(r.scheme) << ',' << r.repeats << ','
        << r.median_seconds << ',' << r.broadcasts << ',' << r.point_to_point << ','
        << r.max_broadcasts_per_iteration << ',' << r.max_point_to_point_per_iteration << ','
        << hash << '\n';
  }
}

}  // namespace lwhac
