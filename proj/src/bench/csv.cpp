#include <cmath>
#include <map>
#include <tuple>

#include "internal.hpp"

namespace skewclust::bench {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

struct Moments {
  std::vector<double> values;

  void add(double x) { values.push_back(x); }

  std::pair<double, double> mean_sd() const {
    if (values.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : values) mean += x;
    mean /= static_cast<double>(values.size());
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : values) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
  }
};

}  // namespace

std::vector<SweepAggregate> aggregate(const std::vector<SweepRow>& rows) {
  struct Cell {
    SweepAggregate agg;
    Moments ari, top_tf, setup, embed, kmeans;
  };
  std::vector<Cell> cells;
  std::map<std::tuple<std::string, double, double>, std::size_t> index;
  for (const SweepRow& r : rows) {
    const auto key = std::make_tuple(r.method, r.p, r.mu);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, cells.size()).first;
      Cell c;
      c.agg.method = r.method;
      c.agg.p = r.p;
      c.agg.mu = r.mu;
      cells.push_back(std::move(c));
    }
    Cell& c = cells[it->second];
    if (!r.error.empty()) {
      ++c.agg.errors;
      continue;
    }
    ++c.agg.count;
    c.ari.add(r.ari);
    c.top_tf.add(r.top_tf);
    c.setup.add(r.setup_ms);
    c.embed.add(r.embed_ms);
    c.kmeans.add(r.kmeans_ms);
  }
  std::vector<SweepAggregate> out;
  for (Cell& c : cells) {
    std::tie(c.agg.ari_mean, c.agg.ari_std) = c.ari.mean_sd();
    std::tie(c.agg.top_tf_mean, c.agg.top_tf_std) = c.top_tf.mean_sd();
    c.agg.setup_ms_mean = c.setup.mean_sd().first;
    c.agg.embed_ms_mean = c.embed.mean_sd().first;
    c.agg.kmeans_ms_mean = c.kmeans.mean_sd().first;
    out.push_back(c.agg);
  }
  return out;
}

}  // namespace skewclust::bench
