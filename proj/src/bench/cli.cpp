#include <iostream>

#include "CLI11.hpp"
#include "internal.hpp"

namespace skewclust::bench {

namespace {

// Flags shared by every subcommand that runs a clustering pipeline.
struct MethodFlags {
  std::vector<std::string> methods;
  std::string norm = "none";
  int l_pairs = 1;
  double alpha = 0.5;
  std::optional<int> d;
  std::optional<double> tau;
  int search_cap = 0;

  void add_to(CLI::App& app, bool many) {
    if (many) {
      app.add_option("--method,--methods", methods, "Pipelines to run (default: all)");
    } else {
      methods = {"skew_f"};
      app.add_option("--method", methods, "Pipeline to run")->expected(1);
    }
    app.add_option("--norm", norm, "Skew matrix normalization")->check(CLI::IsMember({"none", "rw", "sym"}));
    app.add_option("--l-pairs", l_pairs, "skew_r width in complex pairs (real width 2*l_pairs)")
        ->check(CLI::PositiveNumber);
    app.add_option("--alpha", alpha, "dd_sym mixing weight")->check(CLI::Range(0.0, 1.0));
    app.add_option("--d", d, "svd_m truncation rank (default k)");
    app.add_option("--tau", tau, "bcs teleportation (default automatic)");
    app.add_option("--search-cap", search_cap, "skew_s singular value window (default 2k+2)");
  }

  std::vector<ClusterSpec> specs() const {
    std::vector<ClusterSpec> out;
    if (methods.empty()) {
      out = detail::default_methods();
    } else {
      for (const std::string& name : methods) {
        ClusterSpec spec;
        spec.method = parse_method(name);
        out.push_back(spec);
      }
    }
    for (ClusterSpec& spec : out) {
      spec.normalization = parse_normalization(norm);
      if (spec.method == Method::skew_r) spec.l_override = 2 * l_pairs;
      spec.alpha = alpha;
      spec.d = d;
      spec.tau = tau;
      spec.search_cap = search_cap;
    }
    return out;
  }
};

struct GridFlags {
  std::string preset = "desk";
  std::string pattern = "circulant";
  std::optional<int> n;
  std::optional<int> k;
  std::vector<double> p;
  std::vector<double> mu;
  std::optional<int> graphs;
  std::optional<int> runs;
  std::optional<int> c_cuts;
  std::uint64_t seed = 0;
  std::string out = ".";

  void add_to(CLI::App& app) {
    app.add_option("--preset", preset, "Parameter preset")->check(CLI::IsMember({"desk", "full"}));
    app.add_option("--pattern", pattern, "Meta-graph pattern")->check(CLI::IsMember({"circulant", "dag", "cmg"}));
    app.add_option("--n", n, "Vertex count");
    app.add_option("--k", k, "Cluster count");
    app.add_option("--p", p, "Edge probabilities (q = p)");
    app.add_option("--mu", mu, "Orientation noise values");
    app.add_option("--graphs", graphs, "Graphs per (p, mu) cell");
    app.add_option("--runs", runs, "Runs per graph");
    app.add_option("--c-cuts", c_cuts, "Cuts summed by TopTF (default by pattern)");
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--out", out, "Output directory");
  }

  SweepConfig config() const {
    SweepConfig c = preset == "full" ? full_preset() : desk_preset();
    c.pattern = parse_meta_pattern(pattern);
    if (n) c.n = *n;
    if (k) c.k = *k;
    if (!p.empty()) c.p_values = p;
    if (!mu.empty()) c.mu_values = mu;
    if (graphs) c.graphs_per_cell = *graphs;
    if (runs) c.runs_per_graph = *runs;
    c.c_cuts = c_cuts;
    c.seed = seed;
    c.out_dir = out;
    return c;
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flow-based spectral clustering of directed graphs"};
  app.require_subcommand(1);

  GridFlags gen_grid;
  auto* gen = app.add_subcommand("generate", "Write DSBM instances and a manifest");
  gen_grid.add_to(*gen);

  GridFlags sweep_grid;
  MethodFlags sweep_methods;
  std::string manifest;
  int threads = 1;
  bool svg = false;
  auto* sweep = app.add_subcommand("sweep", "ARI and TopTF over a DSBM grid");
  sweep_grid.add_to(*sweep);
  sweep_methods.add_to(*sweep, true);
  sweep->add_option("--manifest", manifest, "Run on instances listed in a manifest from 'generate'");
  sweep->add_option("--threads", threads, "Worker threads (timings are unreliable above 1)");
  sweep->add_flag("--svg", svg, "Also write SVG line charts");

  TimingConfig timing_cfg;
  MethodFlags timing_methods;
  std::string timing_pattern = "circulant";
  std::string timing_out = ".";
  auto* timing = app.add_subcommand("timing", "Setup/embedding/k-means timing table");
  timing->add_option("--pattern", timing_pattern)->check(CLI::IsMember({"circulant", "dag", "cmg"}));
  timing->add_option("--n", timing_cfg.n, "Vertex count");
  timing->add_option("--k", timing_cfg.k, "Cluster count");
  timing->add_option("--p", timing_cfg.p, "Edge probability (q = p)");
  timing->add_option("--mu", timing_cfg.mu, "Orientation noise");
  timing->add_option("--graphs", timing_cfg.graphs, "Graphs");
  timing->add_option("--runs", timing_cfg.runs, "Runs per graph and method");
  timing->add_option("--seed", timing_cfg.seed, "Master seed");
  timing->add_option("--out", timing_out, "Output directory");
  timing_methods.add_to(*timing, true);

  ClusterCommand cluster_cmd;
  MethodFlags cluster_method;
  std::string graph_path;
  std::string format = "tsv";
  std::string truth;
  std::string cluster_out = ".";
  auto* cluster_sc = app.add_subcommand("cluster", "Cluster a graph file and report cut metrics");
  cluster_sc->add_option("--graph", graph_path, "Edge list")->required();
  cluster_sc->add_option("--format", format)->check(CLI::IsMember({"tsv", "pajek"}));
  cluster_sc->add_flag("--unweighted", cluster_cmd.unweighted, "Treat every edge as weight 1");
  cluster_sc->add_option("--k", cluster_cmd.spec.k, "Cluster count")->required();
  cluster_sc->add_option("--c-cuts", cluster_cmd.c_cuts, "Cuts summed by TopTF and TopCI")->required();
  cluster_sc->add_option("--truth", truth, "Ground truth 'label<TAB>cluster' file");
  cluster_sc->add_option("--runs", cluster_cmd.runs, "Keep the best of this many seeds by TopTF");
  cluster_sc->add_option("--seed", cluster_cmd.spec.seed, "Seed");
  cluster_sc->add_option("--out", cluster_out, "Output directory");
  cluster_method.add_to(*cluster_sc, false);

  SvdCommand svd_cmd;
  std::string svd_graph;
  std::string svd_format = "tsv";
  std::string svd_norm = "none";
  std::string svd_out;
  auto* svd = app.add_subcommand("svd", "Leading singular values of K for gap inspection");
  svd->add_option("--graph", svd_graph, "Edge list")->required();
  svd->add_option("--format", svd_format)->check(CLI::IsMember({"tsv", "pajek"}));
  svd->add_flag("--unweighted", svd_cmd.unweighted, "Treat every edge as weight 1");
  svd->add_option("--norm", svd_norm)->check(CLI::IsMember({"none", "rw", "sym"}));
  svd->add_option("--count", svd_cmd.count, "Number of singular values");
  svd->add_option("--seed", svd_cmd.seed, "Seed");
  svd->add_option("--out", svd_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (*gen) {
      const fs::path path = cmd_generate(gen_grid.config());
      out << "wrote " << path.string() << '\n';
    } else if (*sweep) {
      SweepConfig config;
      std::optional<fs::path> from;
      if (!manifest.empty()) {
        from = fs::path(manifest);
        config = load_manifest(*from);
        config.out_dir = sweep_grid.out;
        if (!sweep_methods.methods.empty()) config.methods = sweep_methods.specs();
      } else {
        config = sweep_grid.config();
        config.methods = sweep_methods.specs();
      }
      config.threads = threads;
      config.svg = svg;
      const SweepResult result = cmd_sweep(config, from);
      int errors = 0;
      for (const SweepRow& r : result.rows) errors += r.error.empty() ? 0 : 1;
      out << "wrote " << (config.out_dir / "sweep_raw.csv").string() << " (" << result.rows.size() << " rows, "
          << errors << " errors)\n";
    } else if (*timing) {
      timing_cfg.pattern = parse_meta_pattern(timing_pattern);
      timing_cfg.methods = timing_methods.specs();
      timing_cfg.out_dir = timing_out;
      const auto rows = cmd_timing(timing_cfg);
      for (const TimingRow& r : rows) {
        out << r.alg << ": total " << format_number(r.total_ms) << " ms";
        if (r.speedup_vs_herm) out << ", speedup " << format_number(*r.speedup_vs_herm);
        if (!r.note.empty()) out << " (" << r.note << ')';
        out << '\n';
      }
    } else if (*cluster_sc) {
      cluster_cmd.graph = graph_path;
      cluster_cmd.format = parse_edge_format(format);
      const auto specs = cluster_method.specs();
      const int k = cluster_cmd.spec.k;
      const std::uint64_t seed = cluster_cmd.spec.seed;
      cluster_cmd.spec = specs.front();
      cluster_cmd.spec.k = k;
      cluster_cmd.spec.seed = seed;
      if (!truth.empty()) cluster_cmd.truth = fs::path(truth);
      cluster_cmd.out_dir = cluster_out;
      const ClusterReport report = cmd_cluster(cluster_cmd);
      if (report.result.flags.restricted_to_giant_component) {
        err << "warning: graph is not weakly connected; clustered its largest component ("
            << report.result.vertices.size() << " vertices)\n";
      }
      out << "top_tf " << format_number(report.top_tf);
      if (report.ari) out << ", ari " << format_number(*report.ari);
      if (report.exact_tf) out << ", exact_tf_k2 " << format_number(*report.exact_tf);
      if (report.achieved_fraction) out << ", fraction " << format_number(*report.achieved_fraction);
      out << '\n';
    } else if (*svd) {
      svd_cmd.graph = svd_graph;
      svd_cmd.format = parse_edge_format(svd_format);
      svd_cmd.normalization = parse_normalization(svd_norm);
      const std::string csv = cmd_svd(svd_cmd);
      if (svd_out.empty()) {
        out << csv;
      } else {
        detail::write_text(svd_out, csv);
      }
    }
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::out_of_range& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace skewclust::bench
