#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "skewclust/bench.hpp"

namespace skewclust::bench::detail {

using json = nlohmann::ordered_json;

json spec_to_json(const ClusterSpec& spec);
ClusterSpec spec_from_json(const json& j);

/// The eight pipelines with their default options.
std::vector<ClusterSpec> default_methods();

/// Display name, e.g. "skew_r" or "dd_sym_n".
std::string method_label(const ClusterSpec& spec);

std::string instance_name(int p_index, int mu_index, int graph);

/// Edge list written by cmd_generate: vertex labels are the indices.
Digraph load_instance(const std::filesystem::path& path, int n);
std::vector<int> load_truth(const std::filesystem::path& path, int n);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace skewclust::bench::detail
