#include "skewclust/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace skewclust {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view s) {
  const auto pos = s.find('#');
  return pos == std::string_view::npos ? s : s.substr(0, pos);
}

// Tab-separated when the line has a tab, whitespace-separated otherwise.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  if (line.find('\t') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find('\t', start);
      out.push_back(trim(line.substr(start, pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    std::erase_if(out, [](std::string_view f) { return f.empty(); });
    return out;
  }
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::optional<long long> parse_integer(std::string_view s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

double parse_weight(std::string_view s, std::size_t line) {
  double w = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), w);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("invalid weight '" + std::string(s) + "'", line);
  }
  if (w < 0.0) throw ParseError("negative weight " + std::string(s), line);
  return w;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::ranges::transform(out, out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

Digraph finish(Vertex n, std::vector<Edge> edges, bool unweighted) {
  Digraph g(n, std::move(edges));
  if (!unweighted) return g;
  std::vector<Edge> unit(g.edges().begin(), g.edges().end());
  for (Edge& e : unit) e.w = 1.0;
  return Digraph(n, std::move(unit));
}

LoadedGraph read_tsv(std::istream& in, bool unweighted) {
  struct RawEdge {
    std::string u, v;
    double w;
  };
  std::vector<RawEdge> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(strip_comment(line));
    if (body.empty()) continue;
    const auto fields = split_fields(body);
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError("expected 'u<TAB>v[<TAB>w]', got " + std::to_string(fields.size()) + " fields",
                       lineno);
    }
    const double w = unweighted ? 1.0 : (fields.size() == 3 ? parse_weight(fields[2], lineno) : 1.0);
    if (unweighted && fields.size() == 3) parse_weight(fields[2], lineno);
    raw.push_back({std::string(fields[0]), std::string(fields[1]), w});
  }

  std::vector<std::string> labels;
  std::unordered_map<std::string, Vertex> index;
  for (const auto& e : raw) {
    for (const std::string* s : {&e.u, &e.v}) {
      if (index.emplace(*s, static_cast<Vertex>(labels.size())).second) labels.push_back(*s);
    }
  }
  const bool numeric = std::ranges::all_of(labels, [](const std::string& s) {
    const auto v = parse_integer(s);
    return v && *v >= 0;
  });
  if (numeric) {
    std::ranges::stable_sort(labels, [](const std::string& a, const std::string& b) {
      return *parse_integer(a) < *parse_integer(b);
    });
    // "01" and "1" are distinct labels with the same value; keep both.
    for (std::size_t i = 0; i < labels.size(); ++i) index[labels[i]] = static_cast<Vertex>(i);
  }

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const auto& e : raw) edges.push_back({index.at(e.u), index.at(e.v), e.w});
  const auto n = static_cast<Vertex>(labels.size());
  return {finish(n, std::move(edges), unweighted), std::move(labels)};
}

LoadedGraph read_pajek(std::istream& in, bool unweighted) {
  enum class Section { none, vertices, arcs };
  Section section = Section::none;
  std::optional<Vertex> n;
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '%') continue;
    if (body.front() == '*') {
      const auto fields = split_fields(body);
      const std::string head = lowercase(fields[0]);
      if (head == "*vertices") {
        if (fields.size() < 2) throw ParseError("*Vertices needs a count", lineno);
        const auto count = parse_integer(fields[1]);
        if (!count || *count < 0) throw ParseError("invalid vertex count", lineno);
        n = static_cast<Vertex>(*count);
        labels.resize(static_cast<std::size_t>(*n));
        for (Vertex i = 0; i < *n; ++i) labels[i] = std::to_string(i + 1);
        section = Section::vertices;
      } else if (head == "*arcs") {
        if (!n) throw ParseError("*Arcs before *Vertices", lineno);
        section = Section::arcs;
      } else if (head == "*network") {
        section = Section::none;
      } else {
        throw ParseError("unsupported Pajek section " + std::string(fields[0]), lineno);
      }
      continue;
    }

    if (section == Section::vertices) {
      const auto id_end = body.find_first_of(" \t");
      const auto id = parse_integer(body.substr(0, id_end));
      if (!id || *id < 1 || *id > *n) throw ParseError("invalid vertex id", lineno);
      if (id_end == std::string_view::npos) continue;
      auto rest = trim(body.substr(id_end));
      if (!rest.empty() && rest.front() == '"') {
        const auto close = rest.find('"', 1);
        if (close == std::string_view::npos) throw ParseError("unterminated vertex label", lineno);
        labels[*id - 1] = std::string(rest.substr(1, close - 1));
      } else if (!rest.empty()) {
        labels[*id - 1] = std::string(split_fields(rest).front());
      }
    } else if (section == Section::arcs) {
      const auto fields = split_fields(body);
      if (fields.size() < 2) throw ParseError("expected 'u v [w]'", lineno);
      const auto u = parse_integer(fields[0]);
      const auto v = parse_integer(fields[1]);
      if (!u || !v || *u < 1 || *v < 1 || *u > *n || *v > *n) {
        throw ParseError("arc endpoint outside 1.." + std::to_string(*n), lineno);
      }
      const double w = fields.size() >= 3 ? parse_weight(fields[2], lineno) : 1.0;
      edges.push_back({static_cast<Vertex>(*u - 1), static_cast<Vertex>(*v - 1), unweighted ? 1.0 : w});
    } else {
      throw ParseError("data outside a *Vertices or *Arcs section", lineno);
    }
  }
  if (!n) throw ParseError("missing *Vertices header", lineno);
  return {finish(*n, std::move(edges), unweighted), std::move(labels)};
}

}  // namespace

EdgeFormat parse_edge_format(std::string_view name) {
  if (name == "tsv") return EdgeFormat::tsv;
  if (name == "pajek") return EdgeFormat::pajek;
  throw std::invalid_argument("unknown edge-list format '" + std::string(name) + "'");
}

LoadedGraph read_edge_list(std::istream& in, EdgeFormat format, bool unweighted) {
  return format == EdgeFormat::tsv ? read_tsv(in, unweighted) : read_pajek(in, unweighted);
}

LoadedGraph load_edge_list(const std::filesystem::path& path, EdgeFormat format, bool unweighted) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_edge_list(in, format, unweighted);
}

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

void write_edge_list(std::ostream& out, const Digraph& g) {
  for (const Edge& e : g.edges()) out << e.u << '\t' << e.v << '\t' << format_number(e.w) << '\n';
}

void write_label_map(std::ostream& out, const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) out << labels[i] << '\t' << i << '\n';
}

std::vector<std::pair<std::string, int>> read_assignment(std::istream& in) {
  std::vector<std::pair<std::string, int>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(strip_comment(line));
    if (body.empty()) continue;
    const auto fields = split_fields(body);
    if (fields.size() != 2) throw ParseError("expected 'label<TAB>cluster'", lineno);
    const auto c = parse_integer(fields[1]);
    if (!c || *c < 0) throw ParseError("invalid cluster index '" + std::string(fields[1]) + "'", lineno);
    out.emplace_back(std::string(fields[0]), static_cast<int>(*c));
  }
  return out;
}

std::vector<std::pair<std::string, int>> load_assignment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_assignment(in);
}

void write_assignment(std::ostream& out, const std::vector<std::string>& labels,
                      const std::vector<int>& clusters) {
  if (labels.size() != clusters.size()) throw std::invalid_argument("label/cluster length mismatch");
  for (std::size_t i = 0; i < labels.size(); ++i) out << labels[i] << '\t' << clusters[i] << '\n';
}

}  // namespace skewclust
