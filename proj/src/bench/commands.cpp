#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "internal.hpp"
#include "skewclust/metrics.hpp"

namespace skewclust::bench {

using detail::json;

namespace {

std::string num(double x) { return format_number(x); }

// Graph the partition refers to: the input or its giant component.
Digraph clustered_graph(const Digraph& g, const TimedPartition& tp) {
  return tp.flags.restricted_to_giant_component ? induced_subgraph(g, tp.vertices) : g;
}

std::vector<int> restrict_labels(const std::vector<int>& truth, const std::vector<Vertex>& vertices) {
  std::vector<int> out;
  out.reserve(vertices.size());
  for (Vertex v : vertices) out.push_back(truth[static_cast<std::size_t>(v)]);
  return out;
}

template <class Task>
void parallel_for(int count, int threads, Task&& task) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int t = 0; t < std::min(threads, count); ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::string sweep_raw_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "method,p,mu,graph,run,ari,top_tf,setup_ms,embed_ms,kmeans_ms,embed_dim,flags,error\n";
  for (const SweepRow& r : rows) {
    out << csv_escape(r.method) << ',' << num(r.p) << ',' << num(r.mu) << ',' << r.graph << ',' << r.run << ',';
    if (r.error.empty()) {
      out << num(r.ari) << ',' << num(r.top_tf) << ',' << num(r.setup_ms) << ',' << num(r.embed_ms) << ','
          << num(r.kmeans_ms) << ',' << r.embed_dim;
    } else {
      out << ",,,,,";
    }
    out << ',' << csv_escape(r.flags) << ',' << csv_escape(r.error) << '\n';
  }
  return out.str();
}

std::string sweep_summary_csv(const std::vector<SweepAggregate>& rows) {
  std::ostringstream out;
  out << "method,p,mu,count,errors,ari_mean,ari_std,top_tf_mean,top_tf_std,setup_ms_mean,embed_ms_mean,"
         "kmeans_ms_mean\n";
  for (const SweepAggregate& a : rows) {
    out << csv_escape(a.method) << ',' << num(a.p) << ',' << num(a.mu) << ',' << a.count << ',' << a.errors << ','
        << num(a.ari_mean) << ',' << num(a.ari_std) << ',' << num(a.top_tf_mean) << ',' << num(a.top_tf_std) << ','
        << num(a.setup_ms_mean) << ',' << num(a.embed_ms_mean) << ',' << num(a.kmeans_ms_mean) << '\n';
  }
  return out.str();
}

void write_sweep_charts(const SweepConfig& config, const std::vector<SweepAggregate>& summary) {
  std::vector<Series> ari;
  std::vector<Series> toptf;
  std::map<std::string, std::size_t> index;
  const bool many_p = config.p_values.size() > 1;
  for (const SweepAggregate& a : summary) {
    const std::string name = many_p ? a.method + " p=" + num(a.p) : a.method;
    auto it = index.find(name);
    if (it == index.end()) {
      it = index.emplace(name, ari.size()).first;
      ari.push_back({name, {}, {}, {}});
      toptf.push_back({name, {}, {}, {}});
    }
    if (a.count == 0) continue;
    ari[it->second].x.push_back(a.mu);
    ari[it->second].mean.push_back(a.ari_mean);
    ari[it->second].sd.push_back(a.ari_std);
    toptf[it->second].x.push_back(a.mu);
    toptf[it->second].mean.push_back(a.top_tf_mean);
    toptf[it->second].sd.push_back(a.top_tf_std);
  }
  const std::string pattern(to_string(config.pattern));
  detail::write_text(config.out_dir / "sweep_ari.svg", line_chart("ARI, " + pattern + " DSBM", "mu", "mean ARI", ari));
  detail::write_text(config.out_dir / "sweep_toptf.svg",
                     line_chart("TopTF, " + pattern + " DSBM", "mu", "mean TopTF", toptf));
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::ranges::sort(xs);
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

json score_json(const TopScore& s) {
  json cuts = json::array();
  for (const CutScore& c : s.cuts) cuts.push_back({{"a", c.a}, {"b", c.b}, {"value", c.value}});
  return {{"total", s.total}, {"cuts", cuts}};
}

}  // namespace

SweepResult cmd_sweep(const SweepConfig& config, const std::optional<fs::path>& manifest) {
  validate(config);
  if (config.methods.empty()) throw std::invalid_argument("sweep needs at least one method");
  const int c_cuts = config.c_cuts.value_or(default_c_cuts(config.pattern, config.k));

  struct GraphTask {
    int p_index, mu_index, graph;
  };
  std::vector<GraphTask> tasks;
  for (int pi = 0; pi < static_cast<int>(config.p_values.size()); ++pi) {
    for (int mi = 0; mi < static_cast<int>(config.mu_values.size()); ++mi) {
      for (int g = 0; g < config.graphs_per_cell; ++g) tasks.push_back({pi, mi, g});
    }
  }

  std::vector<std::vector<SweepRow>> per_task(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), config.threads, [&](int ti) {
    const GraphTask& t = tasks[static_cast<std::size_t>(ti)];
    Digraph graph;
    std::vector<int> truth;
    if (manifest) {
      const fs::path dir = manifest->parent_path() / "instances";
      const std::string name = detail::instance_name(t.p_index, t.mu_index, t.graph);
      graph = detail::load_instance(dir / (name + ".tsv"), config.n);
      truth = detail::load_truth(dir / (name + ".truth.tsv"), config.n);
    } else {
      DsbmInstance inst = generate(cell_params(config, t.p_index, t.mu_index, t.graph));
      graph = std::move(inst.graph);
      truth = std::move(inst.truth.assignment);
    }
    const std::uint64_t gseed = graph_seed(config.seed, t.p_index, t.mu_index, t.graph);

    auto& rows = per_task[static_cast<std::size_t>(ti)];
    for (const ClusterSpec& base : config.methods) {
      for (int run = 0; run < config.runs_per_graph; ++run) {
        SweepRow row;
        row.method = detail::method_label(base);
        row.p = config.p_values[static_cast<std::size_t>(t.p_index)];
        row.mu = config.mu_values[static_cast<std::size_t>(t.mu_index)];
        row.graph = t.graph;
        row.run = run;
        ClusterSpec spec = base;
        spec.k = config.k;
        spec.seed = run_seed(gseed, run);
        try {
          const TimedPartition tp = cluster(graph, spec);
          row.ari = ari(restrict_labels(truth, tp.vertices), tp.partition.assignment);
          row.top_tf = top_tf(clustered_graph(graph, tp), tp.partition, c_cuts).total;
          row.setup_ms = tp.setup_ms;
          row.embed_ms = tp.embed_ms;
          row.kmeans_ms = tp.kmeans_ms;
          row.embed_dim = tp.embed_dim;
          row.flags = tp.flags.str();
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        rows.push_back(std::move(row));
      }
    }
  });

  SweepResult result;
  for (auto& rows : per_task) {
    for (SweepRow& r : rows) result.rows.push_back(std::move(r));
  }
  result.summary = aggregate(result.rows);

  fs::create_directories(config.out_dir);
  detail::write_text(config.out_dir / "sweep_raw.csv", sweep_raw_csv(result.rows));
  detail::write_text(config.out_dir / "sweep_summary.csv", sweep_summary_csv(result.summary));
  if (config.svg) write_sweep_charts(config, result.summary);
  return result;
}

std::vector<TimingRow> cmd_timing(const TimingConfig& config) {
  if (config.graphs < 1 || config.runs < 1) throw std::invalid_argument("graphs and runs must be positive");
  if (config.methods.empty()) throw std::invalid_argument("timing needs at least one method");
  SweepConfig grid;
  grid.pattern = config.pattern;
  grid.n = config.n;
  grid.k = config.k;
  grid.p_values = {config.p};
  grid.mu_values = {config.mu};
  grid.graphs_per_cell = config.graphs;
  grid.seed = config.seed;
  grid.c_cuts = 1;
  validate(grid);

  struct Acc {
    std::vector<double> setup, embed, kmeans, total;
    int embed_dim = 0;
    std::string note;
  };
  std::vector<Acc> acc(config.methods.size());
  for (int g = 0; g < config.graphs; ++g) {
    const DsbmInstance inst = generate(cell_params(grid, 0, 0, g));
    const std::uint64_t gseed = graph_seed(config.seed, 0, 0, g);
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      ClusterSpec spec = config.methods[m];
      spec.k = config.k;
      if ((spec.method == Method::herm_dense || spec.method == Method::bcs) && config.n > tolerance::dense_guard) {
        acc[m].note = "skipped: n exceeds the dense guard";
        continue;
      }
      for (int run = 0; run < config.runs; ++run) {
        spec.seed = run_seed(gseed, run);
        try {
          const TimedPartition tp = cluster(inst.graph, spec);
          acc[m].setup.push_back(tp.setup_ms);
          acc[m].embed.push_back(tp.embed_ms);
          acc[m].kmeans.push_back(tp.kmeans_ms);
          acc[m].total.push_back(tp.total_ms());
          acc[m].embed_dim = tp.embed_dim;
        } catch (const std::exception& e) {
          if (acc[m].note.empty()) acc[m].note = std::string("error: ") + e.what();
        }
      }
    }
  }

  auto mean = [](const std::vector<double>& xs) {
    return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  };
  std::vector<TimingRow> rows;
  std::optional<double> herm_total;
  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    TimingRow r;
    r.alg = detail::method_label(config.methods[m]);
    r.setup_ms = mean(acc[m].setup);
    r.embed_ms = mean(acc[m].embed);
    r.kmeans_ms = mean(acc[m].kmeans);
    r.total_ms = mean(acc[m].total);
    r.median_total_ms = median(acc[m].total);
    r.embed_dim = acc[m].embed_dim;
    r.runs = static_cast<int>(acc[m].total.size());
    r.note = acc[m].note;
    if (config.methods[m].method == Method::herm_dense && r.runs > 0 && !herm_total) herm_total = r.total_ms;
    rows.push_back(r);
  }
  for (TimingRow& r : rows) {
    if (herm_total && r.runs > 0 && r.total_ms > 0.0) r.speedup_vs_herm = *herm_total / r.total_ms;
  }

  std::ostringstream csv;
  csv << "alg,setup_ms,embed_ms,kmeans_ms,total_ms,median_total_ms,speedup_vs_herm,embed_dim,runs,note\n";
  for (const TimingRow& r : rows) {
    csv << csv_escape(r.alg) << ',' << num(r.setup_ms) << ',' << num(r.embed_ms) << ',' << num(r.kmeans_ms) << ','
        << num(r.total_ms) << ',' << num(r.median_total_ms) << ','
        << (r.speedup_vs_herm ? num(*r.speedup_vs_herm) : "") << ',' << r.embed_dim << ',' << r.runs << ','
        << csv_escape(r.note) << '\n';
  }
  fs::create_directories(config.out_dir);
  detail::write_text(config.out_dir / "timing.csv", csv.str());
  return rows;
}

ClusterReport cmd_cluster(const ClusterCommand& command) {
  if (command.runs < 1) throw std::invalid_argument("runs must be positive");
  const LoadedGraph loaded = load_edge_list(command.graph, command.format, command.unweighted);
  const Digraph& g = loaded.graph;

  ClusterReport report;
  std::optional<Digraph> best_graph;
  for (int r = 0; r < command.runs; ++r) {
    ClusterSpec spec = command.spec;
    spec.seed = command.spec.seed + static_cast<std::uint64_t>(r);
    TimedPartition tp = cluster(g, spec);
    Digraph h = clustered_graph(g, tp);
    const double score = top_tf(h, tp.partition, command.c_cuts).total;
    if (r == 0 || score > report.top_tf) {
      report.top_tf = score;
      report.best_run = r;
      report.result = std::move(tp);
      best_graph = std::move(h);
    }
  }
  const Digraph& h = *best_graph;
  const TimedPartition& tp = report.result;
  for (Vertex v : tp.vertices) report.labels.push_back(loaded.labels[static_cast<std::size_t>(v)]);

  const TopScore tf_score = top_tf(h, tp.partition, command.c_cuts);
  const TopScore ci_vol_score = top_ci(h, tp.partition, command.c_cuts, CiMode::vol);
  const TopScore ci_sz_score = top_ci(h, tp.partition, command.c_cuts, CiMode::sz);

  if (command.truth) {
    std::unordered_map<std::string, int> truth;
    for (const auto& [label, c] : load_assignment(*command.truth)) truth[label] = c;
    std::vector<int> expected;
    for (const std::string& label : report.labels) {
      const auto it = truth.find(label);
      if (it == truth.end()) throw DataError("truth file has no entry for vertex '" + label + "'");
      expected.push_back(it->second);
    }
    report.ari = ari(expected, tp.partition.assignment);
  }
  if (tp.partition.k == 2) {
    report.exact_tf = exact_tf_k2(h).value;
    if (*report.exact_tf > 0.0) report.achieved_fraction = report.top_tf / *report.exact_tf;
  }

  const Eigen::MatrixXd flow = cluster_flow_matrix(h, tp.partition);
  const auto members = tp.partition.clusters();
  json pairs = json::array();
  for (int a = 0; a < tp.partition.k; ++a) {
    for (int b = a + 1; b < tp.partition.k; ++b) {
      const auto& xa = members[static_cast<std::size_t>(a)];
      const auto& xb = members[static_cast<std::size_t>(b)];
      json entry = {{"a", a}, {"b", b}, {"w_ab", flow(a, b)}, {"w_ba", flow(b, a)}, {"tf", std::abs(flow(a, b) - flow(b, a))}};
      entry["ci"] = flow(a, b) + flow(b, a) > 0.0 ? json(flow(a, b) / (flow(a, b) + flow(b, a))) : json(nullptr);
      entry["ci_vol"] = ci_vol(h, xa, xb);
      entry["ci_sz"] = ci_sz(h, xa, xb);
      pairs.push_back(entry);
    }
  }

  json j;
  j["graph"] = command.graph.filename().string();
  j["method"] = detail::method_label(command.spec);
  j["spec"] = detail::spec_to_json(command.spec);
  j["k"] = command.spec.k;
  j["seed"] = command.spec.seed;
  j["runs"] = command.runs;
  j["best_run"] = report.best_run;
  j["n"] = g.num_vertices();
  j["edges"] = g.num_edges();
  j["clustered_vertices"] = tp.vertices.size();
  j["flags"] = tp.flags.str();
  j["embed_dim"] = tp.embed_dim;
  j["cluster_sizes"] = tp.partition.cluster_sizes();
  j["c_cuts"] = command.c_cuts;
  j["top_tf"] = score_json(tf_score);
  j["top_ci_vol"] = score_json(ci_vol_score);
  j["top_ci_sz"] = score_json(ci_sz_score);
  j["pairs"] = pairs;
  j["ari"] = report.ari ? json(*report.ari) : json(nullptr);
  j["exact_tf_k2"] = report.exact_tf ? json(*report.exact_tf) : json(nullptr);
  j["achieved_fraction"] = report.achieved_fraction ? json(*report.achieved_fraction) : json(nullptr);
  j["timing"] = {{"setup_ms", tp.setup_ms}, {"embed_ms", tp.embed_ms}, {"kmeans_ms", tp.kmeans_ms}};
  report.json = j.dump(2) + "\n";

  fs::create_directories(command.out_dir);
  std::ostringstream part;
  write_assignment(part, report.labels, tp.partition.assignment);
  detail::write_text(command.out_dir / "partition.tsv", part.str());
  std::ostringstream labels;
  write_label_map(labels, loaded.labels);
  detail::write_text(command.out_dir / "labels.tsv", labels.str());
  detail::write_text(command.out_dir / "report.json", report.json);
  return report;
}

std::string cmd_svd(const SvdCommand& command) {
  const LoadedGraph loaded = load_edge_list(command.graph, command.format, command.unweighted);
  SkewMatrix k = build_skew(loaded.graph);
  const Connectivity conn = weak_connectivity(k);
  if (!conn.connected) k = build_skew(induced_subgraph(loaded.graph, conn.components.front()));
  if (command.normalization != Normalization::none) k = normalize_skew(k, command.normalization);
  const int n = k.dimension();
  if (command.count < 1 || command.count > n) {
    throw std::invalid_argument("count = " + std::to_string(command.count) + " outside 1.." + std::to_string(n));
  }
  SvdOptions opts;
  opts.seed = command.seed;
  opts.allow_rank_deficient = true;
  const TruncatedSVD svd = truncated_svd(k.matrix(), command.count, opts);
  std::ostringstream out;
  out << "index,sigma,gap\n";
  for (int i = 0; i < svd.size(); ++i) {
    out << i + 1 << ',' << num(svd.sigma[i]) << ',';
    if (i + 1 < svd.size()) out << num(svd.sigma[i] - svd.sigma[i + 1]);
    out << '\n';
  }
  return out.str();
}

}  // namespace skewclust::bench
