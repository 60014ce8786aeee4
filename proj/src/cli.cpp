#include "lwhac/cli.hpp"

#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lwhac/bench.hpp"
#include "lwhac/dendrogram.hpp"
#include "lwhac/engine.hpp"
#include "lwhac/errors.hpp"
#include "lwhac/io.hpp"
#include "lwhac/serial.hpp"

namespace lwhac {

namespace {

const std::map<std::string, LinkageScheme> kSchemeNames = {
    {"single", LinkageScheme::Single},     {"complete", LinkageScheme::Complete},
    {"average", LinkageScheme::GroupAverage}, {"weighted", LinkageScheme::WeightedAverage},
    {"centroid", LinkageScheme::Centroid}, {"ward", LinkageScheme::Ward},
};

const std::map<std::string, InputFormat> kInputFormats = {
    {"square", InputFormat::SquareCsv},
    {"condensed", InputFormat::CondensedCsv},
    {"points", InputFormat::PointsCsv},
};

enum class OutputFormat { Csv, Json, Newick };
const std::map<std::string, OutputFormat> kOutputFormats = {
    {"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}, {"newick", OutputFormat::Newick}};

enum class ClusterPath { Auto, Serial, Distributed };
const std::map<std::string, ClusterPath> kPaths = {
    {"auto", ClusterPath::Auto}, {"serial", ClusterPath::Serial},
    {"distributed", ClusterPath::Distributed}};

void emit(const std::string& path, std::string_view text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

struct ClusterArgs {
  std::string input;
  InputFormat input_format = InputFormat::SquareCsv;
  LinkageScheme scheme = LinkageScheme::Complete;
  int procs = 1;
  OutputFormat format = OutputFormat::Csv;
  ClusterPath path = ClusterPath::Auto;
  std::string output;
};

struct CutArgs {
  std::string dendrogram;
  std::size_t k = 1;
  std::string output;
};

struct BenchArgs {
  std::vector<std::size_t> sizes{200};
  std::string input;
  InputFormat input_format = InputFormat::SquareCsv;
  LinkageScheme scheme = LinkageScheme::Complete;
  std::vector<int> procs{1, 2, 4};
  std::size_t repeats = 3;
  std::uint64_t seed = 1;
  std::string output;
};

struct ConvertArgs {
  std::string input;
  InputFormat input_format = InputFormat::SquareCsv;
  std::string to = "condensed";
  std::string output;
};

void run_cluster(const ClusterArgs& a, std::ostream& out) {
  const CondensedMatrix matrix = load_matrix({a.input, a.input_format});
  const bool serial = a.path == ClusterPath::Serial || (a.path == ClusterPath::Auto && a.procs == 1);
  const Dendrogram d = serial ? serial_cluster(matrix, a.scheme)
                              : run_distributed(matrix, a.scheme, a.procs);
  std::string text;
  switch (a.format) {
    case OutputFormat::Csv: text = to_merge_csv(d); break;
    case OutputFormat::Json: text = to_json(d) + "\n"; break;
    case OutputFormat::Newick: text = to_newick(d) + "\n"; break;
  }
  emit(a.output, text, out);
}

void run_cut(const CutArgs& a, std::ostream& out) {
  const Dendrogram d = parse_merge_csv(read_file(a.dendrogram));
  if (a.k < 1 || a.k > d.n) {
    throw InputError("k = " + std::to_string(a.k) + " outside [1, " + std::to_string(d.n) + "]");
  }
  const auto labels = cluster_labels(d, a.k);
  std::string text;
  for (std::size_t item = 0; item < labels.size(); ++item) {
    text += std::to_string(item) + ',' + std::to_string(labels[item]) + '\n';
  }
  emit(a.output, text, out);
}

void run_bench_command(const BenchArgs& a, std::ostream& out) {
  BenchConfig config;
  config.sizes = a.sizes;
  if (!a.input.empty()) config.matrix = load_matrix({a.input, a.input_format});
  config.scheme = a.scheme;
  config.procs = a.procs;
  config.repeats = a.repeats;
  config.seed = a.seed;
  std::ostringstream csv;
  write_bench_csv(csv, run_bench(config));
  emit(a.output, csv.str(), out);
}

void run_convert(const ConvertArgs& a, std::ostream& out) {
  const CondensedMatrix m = load_matrix({a.input, a.input_format});
  emit(a.output, a.to == "square" ? write_square_csv(m) : write_condensed_csv(m), out);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Agglomerative hierarchical clustering on one or many workers", "lwhac"};
  app.require_subcommand(1);

  ClusterArgs cluster;
  auto* cmd_cluster = app.add_subcommand("cluster", "Cluster a distance matrix and export the dendrogram");
  cmd_cluster->add_option("-i,--input", cluster.input, "Input CSV file")->required();
  cmd_cluster->add_option("--input-format", cluster.input_format, "square | condensed | points")
      ->transform(CLI::CheckedTransformer(kInputFormats));
  cmd_cluster->add_option("--scheme", cluster.scheme)
      ->transform(CLI::CheckedTransformer(kSchemeNames));
  cmd_cluster->add_option("-p,--procs", cluster.procs, "Worker count")->check(CLI::PositiveNumber);
  cmd_cluster->add_option("--format", cluster.format, "csv | json | newick")
      ->transform(CLI::CheckedTransformer(kOutputFormats));
  cmd_cluster->add_option("--path", cluster.path,
                          "auto (serial when procs is 1) | serial | distributed")
      ->transform(CLI::CheckedTransformer(kPaths));
  cmd_cluster->add_option("-o,--output", cluster.output, "Output file (default stdout)");

  CutArgs cut;
  auto* cmd_cut = app.add_subcommand("cut", "Cut a merge-list dendrogram into k flat clusters");
  cmd_cut->add_option("dendrogram", cut.dendrogram, "Merge-list CSV")->required();
  cmd_cut->add_option("-k,--clusters", cut.k, "Number of clusters")->required();
  cmd_cut->add_option("-o,--output", cut.output);

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench", "Time the distributed engine against worker count");
  cmd_bench->add_option("--bench-sizes", bench.sizes, "Synthetic matrix sizes")->delimiter(',');
  cmd_bench->add_option("-i,--input", bench.input, "Benchmark this matrix instead");
  cmd_bench->add_option("--input-format", bench.input_format)
      ->transform(CLI::CheckedTransformer(kInputFormats));
  cmd_bench->add_option("--scheme", bench.scheme)->transform(CLI::CheckedTransformer(kSchemeNames));
  cmd_bench->add_option("-p,--procs", bench.procs, "Worker counts")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  cmd_bench->add_option("--repeats", bench.repeats)->check(CLI::PositiveNumber);
  cmd_bench->add_option("--seed", bench.seed);
  cmd_bench->add_option("-o,--output", bench.output);

  ConvertArgs convert;
  auto* cmd_convert = app.add_subcommand("convert", "Rewrite a matrix as square or condensed CSV");
  cmd_convert->add_option("-i,--input", convert.input)->required();
  cmd_convert->add_option("--input-format", convert.input_format)
      ->transform(CLI::CheckedTransformer(kInputFormats));
  cmd_convert->add_option("--to", convert.to)->check(CLI::IsMember({"square", "condensed"}));
  cmd_convert->add_option("-o,--output", convert.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*cmd_cluster) run_cluster(cluster, out);
    if (*cmd_cut) run_cut(cut, out);
    if (*cmd_bench) run_bench_command(bench, out);
    if (*cmd_convert) run_convert(convert, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternalError;
  }
  return kExitOk;
}

}  // namespace lwhac
