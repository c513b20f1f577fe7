#include <fstream>
#include <sstream>
#include <stdexcept>

#include "internal.hpp"
#include "skewclust/random.hpp"

namespace skewclust::bench {

namespace detail {

json spec_to_json(const ClusterSpec& spec) {
  json j;
  j["method"] = std::string(to_string(spec.method));
  j["norm"] = std::string(to_string(spec.normalization));
  if (spec.l_override) j["l"] = *spec.l_override;
  if (spec.method == Method::dd_sym) j["alpha"] = spec.alpha;
  if (spec.d) j["d"] = *spec.d;
  if (spec.tau) j["tau"] = *spec.tau;
  if (spec.search_cap > 0) j["search_cap"] = spec.search_cap;
  if (spec.kmeans_restarts != 10) j["kmeans_restarts"] = spec.kmeans_restarts;
  return j;
}

ClusterSpec spec_from_json(const json& j) {
  ClusterSpec spec;
  spec.method = parse_method(j.at("method").get<std::string>());
  spec.normalization = parse_normalization(j.value("norm", std::string("none")));
  if (j.contains("l")) spec.l_override = j["l"].get<int>();
  if (j.contains("alpha")) spec.alpha = j["alpha"].get<double>();
  if (j.contains("d")) spec.d = j["d"].get<int>();
  if (j.contains("tau")) spec.tau = j["tau"].get<double>();
  spec.search_cap = j.value("search_cap", 0);
  spec.kmeans_restarts = j.value("kmeans_restarts", 10);
  return spec;
}

std::vector<ClusterSpec> default_methods() {
  std::vector<ClusterSpec> out;
  for (Method m : all_methods()) {
    ClusterSpec spec;
    spec.method = m;
    if (m == Method::skew_r) spec.l_override = 2;
    out.push_back(spec);
  }
  return out;
}

std::string method_label(const ClusterSpec& spec) {
  std::string name(to_string(spec.method));
  if (spec.method == Method::dd_sym) return spec.normalization == Normalization::none ? name : name + "_n";
  if (spec.normalization != Normalization::none) name += "_" + std::string(to_string(spec.normalization));
  return name;
}

std::string instance_name(int p_index, int mu_index, int graph) {
  return "p" + std::to_string(p_index) + "_mu" + std::to_string(mu_index) + "_g" + std::to_string(graph);
}

Digraph load_instance(const std::filesystem::path& path, int n) {
  const LoadedGraph loaded = load_edge_list(path, EdgeFormat::tsv);
  std::vector<int> index;
  for (const std::string& label : loaded.labels) {
    const int v = std::stoi(label);
    if (v < 0 || v >= n) throw DataError(path.string() + ": vertex " + label + " outside 0.." + std::to_string(n - 1));
    index.push_back(v);
  }
  std::vector<Edge> edges;
  for (const Edge& e : loaded.graph.edges()) {
    edges.push_back({index[static_cast<std::size_t>(e.u)], index[static_cast<std::size_t>(e.v)], e.w});
  }
  return Digraph(n, std::move(edges));
}

std::vector<int> load_truth(const std::filesystem::path& path, int n) {
  std::vector<int> truth(static_cast<std::size_t>(n), -1);
  for (const auto& [label, c] : load_assignment(path)) {
    const int v = std::stoi(label);
    if (v < 0 || v >= n) throw DataError(path.string() + ": vertex " + label + " out of range");
    truth[static_cast<std::size_t>(v)] = c;
  }
  for (int c : truth) {
    if (c < 0) throw DataError(path.string() + ": missing vertices");
  }
  return truth;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace detail

using detail::json;

SweepConfig desk_preset() {
  SweepConfig c;
  c.methods = detail::default_methods();
  return c;
}

SweepConfig full_preset() {
  SweepConfig c;
  c.n = 5000;
  c.k = 5;
  c.p_values = {0.0045, 0.008};
  c.mu_values.clear();
  for (int i = 0; i <= 10; ++i) c.mu_values.push_back(0.03 * i);
  c.graphs_per_cell = 100;
  c.runs_per_graph = 10;
  c.methods = detail::default_methods();
  return c;
}

int default_c_cuts(MetaPattern pattern, int k) {
  switch (pattern) {
    case MetaPattern::circulant: return k;
    case MetaPattern::dag: return 2 * (k - 1);
    case MetaPattern::cmg: return k * (k - 1) / 2;
  }
  return k;
}

void validate(const SweepConfig& config) {
  if (config.k < 2) throw std::invalid_argument("k must be at least 2");
  if (config.pattern == MetaPattern::dag && config.k < 3) throw std::invalid_argument("dag pattern needs k >= 3");
  if (config.n < config.k) throw std::invalid_argument("n must be at least k");
  if (config.p_values.empty() || config.mu_values.empty()) throw std::invalid_argument("p and mu lists must be non-empty");
  for (double p : config.p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p outside [0, 1]");
  }
  for (double mu : config.mu_values) {
    if (!(mu >= 0.0 && mu < 0.5)) throw std::invalid_argument("mu outside [0, 0.5)");
  }
  if (config.graphs_per_cell < 1 || config.runs_per_graph < 1) throw std::invalid_argument("counts must be positive");
  if (config.threads < 1) throw std::invalid_argument("threads must be positive");
  if (!config.sizes.empty()) {
    if (static_cast<int>(config.sizes.size()) != config.k) throw std::invalid_argument("need k cluster sizes");
    int total = 0;
    for (int s : config.sizes) total += s;
    if (total != config.n) throw std::invalid_argument("cluster sizes must sum to n");
  }
  const int pairs = config.k * (config.k - 1) / 2;
  const int c = config.c_cuts.value_or(default_c_cuts(config.pattern, config.k));
  if (c < 1 || c > pairs) throw std::invalid_argument("c_cuts outside 1.." + std::to_string(pairs));
}

std::vector<int> cluster_sizes(const SweepConfig& config) {
  return config.sizes.empty() ? equal_sizes(config.n, config.k) : config.sizes;
}

std::uint64_t graph_seed(std::uint64_t seed, int p_index, int mu_index, int graph) {
  return keyed_hash(seed, {0x67726170ULL, static_cast<std::uint64_t>(p_index), static_cast<std::uint64_t>(mu_index),
                           static_cast<std::uint64_t>(graph)});
}

std::uint64_t run_seed(std::uint64_t graph_seed, int run) {
  return derive_seed(graph_seed, static_cast<std::uint64_t>(run));
}

DsbmParams cell_params(const SweepConfig& config, int p_index, int mu_index, int graph) {
  DsbmParams params;
  params.k = config.k;
  params.p = config.p_values.at(static_cast<std::size_t>(p_index));
  params.q = params.p;
  params.sizes = cluster_sizes(config);
  params.seed = graph_seed(config.seed, p_index, mu_index, graph);
  // A fresh F per graph for the random complete meta-graph.
  params.f = meta_matrix(config.pattern, config.k, config.mu_values.at(static_cast<std::size_t>(mu_index)),
                         derive_seed(params.seed, 0x46));
  return params;
}

namespace {

json config_json(const SweepConfig& config) {
  json j;
  j["pattern"] = std::string(to_string(config.pattern));
  j["n"] = config.n;
  j["k"] = config.k;
  j["sizes"] = cluster_sizes(config);
  j["p_values"] = config.p_values;
  j["mu_values"] = config.mu_values;
  j["graphs_per_cell"] = config.graphs_per_cell;
  j["runs_per_graph"] = config.runs_per_graph;
  j["c_cuts"] = config.c_cuts.value_or(default_c_cuts(config.pattern, config.k));
  j["seed"] = config.seed;
  json methods = json::array();
  for (const ClusterSpec& spec : config.methods) methods.push_back(detail::spec_to_json(spec));
  j["methods"] = methods;
  return j;
}

}  // namespace

fs::path cmd_generate(const SweepConfig& config) {
  validate(config);
  const fs::path dir = config.out_dir / "instances";
  fs::create_directories(dir);
  json manifest = config_json(config);
  json instances = json::array();
  for (std::size_t pi = 0; pi < config.p_values.size(); ++pi) {
    for (std::size_t mi = 0; mi < config.mu_values.size(); ++mi) {
      for (int g = 0; g < config.graphs_per_cell; ++g) {
        const auto p_index = static_cast<int>(pi);
        const auto mu_index = static_cast<int>(mi);
        const DsbmInstance inst = generate(cell_params(config, p_index, mu_index, g));
        const std::string name = detail::instance_name(p_index, mu_index, g);
        std::ostringstream edges;
        write_edge_list(edges, inst.graph);
        detail::write_text(dir / (name + ".tsv"), edges.str());
        std::ostringstream truth;
        for (int u = 0; u < inst.truth.size(); ++u) truth << u << '\t' << inst.truth.assignment[static_cast<std::size_t>(u)] << '\n';
        detail::write_text(dir / (name + ".truth.tsv"), truth.str());

        json entry;
        entry["p_index"] = p_index;
        entry["mu_index"] = mu_index;
        entry["graph"] = g;
        entry["p"] = config.p_values[pi];
        entry["mu"] = config.mu_values[mi];
        entry["seed"] = inst.params.seed;
        entry["edges"] = "instances/" + name + ".tsv";
        entry["truth"] = "instances/" + name + ".truth.tsv";
        entry["num_edges"] = inst.graph.num_edges();
        instances.push_back(entry);
      }
    }
  }
  manifest["instances"] = instances;
  const fs::path path = config.out_dir / "manifest.json";
  detail::write_text(path, manifest.dump(2) + "\n");
  return path;
}

SweepConfig load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
    SweepConfig c;
    c.pattern = parse_meta_pattern(j.at("pattern").get<std::string>());
    c.n = j.at("n").get<int>();
    c.k = j.at("k").get<int>();
    c.sizes = j.at("sizes").get<std::vector<int>>();
    c.p_values = j.at("p_values").get<std::vector<double>>();
    c.mu_values = j.at("mu_values").get<std::vector<double>>();
    c.graphs_per_cell = j.at("graphs_per_cell").get<int>();
    c.runs_per_graph = j.at("runs_per_graph").get<int>();
    c.c_cuts = j.at("c_cuts").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    for (const json& m : j.at("methods")) c.methods.push_back(detail::spec_from_json(m));
    c.out_dir = path.parent_path();
    validate(c);
    return c;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": malformed manifest: " + e.what());
  }
}

}  // namespace skewclust::bench
