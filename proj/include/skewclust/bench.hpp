#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "skewclust/algorithms.hpp"
#include "skewclust/dsbm.hpp"
#include "skewclust/graph_io.hpp"

namespace skewclust::bench {

namespace fs = std::filesystem;

/// DSBM experiment grid. Between-cluster probability q equals p.
struct SweepConfig {
  MetaPattern pattern = MetaPattern::circulant;
  int n = 500;
  int k = 5;
  std::vector<int> sizes;  // empty: equal split of n
  std::vector<double> p_values{0.02};
  std::vector<double> mu_values{0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
  int graphs_per_cell = 10;
  int runs_per_graph = 3;
  std::vector<ClusterSpec> methods;  // k is taken from the config
  std::optional<int> c_cuts;         // default depends on the pattern
  std::uint64_t seed = 0;
  fs::path out_dir = ".";
  int threads = 1;
  bool svg = false;
};

SweepConfig desk_preset();
SweepConfig full_preset();

/// c = k for circulant, 2(k-1) for dag, all k(k-1)/2 pairs for cmg.
int default_c_cuts(MetaPattern pattern, int k);

/// Throws std::invalid_argument on out-of-range values.
void validate(const SweepConfig& config);

std::vector<int> cluster_sizes(const SweepConfig& config);

/// Seed of graph g in cell (p index, mu index).
std::uint64_t graph_seed(std::uint64_t seed, int p_index, int mu_index, int graph);

/// Seed of run r on a graph.
std::uint64_t run_seed(std::uint64_t graph_seed, int run);

DsbmParams cell_params(const SweepConfig& config, int p_index, int mu_index, int graph);

/// Writes instances/<name>.tsv, instances/<name>.truth.tsv and
/// manifest.json under config.out_dir. Returns the manifest path.
fs::path cmd_generate(const SweepConfig& config);

/// Reads a manifest written by cmd_generate.
SweepConfig load_manifest(const fs::path& path);

struct SweepRow {
  std::string method;
  double p = 0.0;
  double mu = 0.0;
  int graph = 0;
  int run = 0;
  double ari = 0.0;
  double top_tf = 0.0;
  double setup_ms = 0.0;
  double embed_ms = 0.0;
  double kmeans_ms = 0.0;
  int embed_dim = 0;
  std::string flags;
  std::string error;  // empty on success
};

struct SweepAggregate {
  std::string method;
  double p = 0.0;
  double mu = 0.0;
  int count = 0;  // successful runs
  int errors = 0;
  double ari_mean = 0.0;
  double ari_std = 0.0;
  double top_tf_mean = 0.0;
  double top_tf_std = 0.0;
  double setup_ms_mean = 0.0;
  double embed_ms_mean = 0.0;
  double kmeans_ms_mean = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepAggregate> summary;
};

/// Sample mean and standard deviation (n - 1 denominator, 0 below two rows)
/// per (method, p, mu), in first-appearance order.
std::vector<SweepAggregate> aggregate(const std::vector<SweepRow>& rows);

/// Runs every method on every instance. When `manifest` is given the
/// instance files it lists are loaded, otherwise graphs are generated in
/// memory. Writes sweep_raw.csv, sweep_summary.csv and, when config.svg is
/// set, sweep_ari.svg and sweep_toptf.svg.
SweepResult cmd_sweep(const SweepConfig& config, const std::optional<fs::path>& manifest = std::nullopt);

struct TimingConfig {
  MetaPattern pattern = MetaPattern::circulant;
  int n = 2000;
  int k = 5;
  double p = 0.01;
  double mu = 0.0;
  int graphs = 1;
  int runs = 3;
  std::vector<ClusterSpec> methods;
  std::uint64_t seed = 0;
  fs::path out_dir = ".";
};

struct TimingRow {
  std::string alg;
  double setup_ms = 0.0;
  double embed_ms = 0.0;
  double kmeans_ms = 0.0;
  double total_ms = 0.0;
  double median_total_ms = 0.0;
  std::optional<double> speedup_vs_herm;
  int embed_dim = 0;
  int runs = 0;
  std::string note;
};

/// Runs cells serially and writes timing.csv.
std::vector<TimingRow> cmd_timing(const TimingConfig& config);

struct ClusterCommand {
  fs::path graph;
  EdgeFormat format = EdgeFormat::tsv;
  bool unweighted = false;
  ClusterSpec spec;
  int c_cuts = 1;
  std::optional<fs::path> truth;
  int runs = 1;  // best of this many seeds by top_tf
  fs::path out_dir = ".";
};

struct ClusterReport {
  TimedPartition result;
  std::vector<std::string> labels;  // of clustered vertices, in order
  double top_tf = 0.0;
  int best_run = 0;
  std::optional<double> ari;
  std::optional<double> exact_tf;
  std::optional<double> achieved_fraction;
  std::string json;  // report.json contents
};

/// Writes partition.tsv and report.json.
ClusterReport cmd_cluster(const ClusterCommand& command);

struct SvdCommand {
  fs::path graph;
  EdgeFormat format = EdgeFormat::tsv;
  bool unweighted = false;
  Normalization normalization = Normalization::none;
  int count = 10;
  std::uint64_t seed = 0;
};

/// CSV "index,sigma,gap" of the leading singular values of K.
std::string cmd_svd(const SvdCommand& command);

/// Command-line entry point; returns the process exit code
/// (0 ok, 1 usage, 2 data, 3 numerical).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// CSV and SVG helpers.

std::string csv_escape(const std::string& field);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> sd;
};

/// Self-contained SVG line chart with +-1 sd error bars.
std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series);

}  // namespace skewclust::bench
