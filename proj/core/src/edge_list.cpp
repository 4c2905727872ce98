#include "lwpr/edge_list.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "lwpr/error.hpp"

namespace lwpr {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_uint(std::string_view s, T& value) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw InputError(source + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

EdgeListData read_edge_list(std::istream& in, const std::string& source_name) {
  std::optional<std::size_t> declared_n;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;
  std::vector<std::pair<Vertex, Count>> mark_lines;
  std::vector<std::size_t> mark_line_numbers;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view body = trim(line.substr(1));
      if (body.rfind("n=", 0) == 0) {
        std::size_t n = 0;
        if (!parse_uint(trim(body.substr(2)), n)) fail(source_name, line_no, "bad header");
        declared_n = n;
      } else if (line.rfind("#m", 0) == 0 && (line.size() == 2 || line[2] == ' ' || line[2] == '\t')) {
        auto fields = split_ws(line.substr(2));
        Vertex v = 0;
        Count m = 0;
        if (fields.size() != 2 || !parse_uint(fields[0], v) || !parse_uint(fields[1], m)) {
          fail(source_name, line_no, "expected `#m <vertex> <mark>`");
        }
        mark_lines.emplace_back(v, m);
        mark_line_numbers.push_back(line_no);
      }
      continue;
    }
    auto fields = split_ws(line);
    if (fields.size() < 2 || fields.size() > 3) {
      fail(source_name, line_no, "expected `<source> <target> [multiplicity]`");
    }
    Edge e;
    if (!parse_uint(fields[0], e.source) || !parse_uint(fields[1], e.target)) {
      fail(source_name, line_no, "vertex ids must be nonnegative integers");
    }
    if (fields.size() == 3 && (!parse_uint(fields[2], e.multiplicity) || e.multiplicity == 0)) {
      fail(source_name, line_no, "multiplicity must be a positive integer");
    }
    edges.push_back(e);
    edge_lines.push_back(line_no);
  }

  std::size_t n = 0;
  if (declared_n) {
    n = *declared_n;
  } else {
    for (const Edge& e : edges) n = std::max<std::size_t>(n, std::max(e.source, e.target) + std::size_t{1});
  }
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (edges[k].source >= n || edges[k].target >= n) {
      fail(source_name, edge_lines[k],
           "vertex id out of range for n=" + std::to_string(n));
    }
  }

  EdgeListData data{build_graph(edges, n), {}};
  if (!mark_lines.empty()) {
    auto out = data.graph.out_degrees();
    data.marks.assign(out.begin(), out.end());
    for (std::size_t k = 0; k < mark_lines.size(); ++k) {
      auto [v, m] = mark_lines[k];
      if (v >= n) fail(source_name, mark_line_numbers[k], "mark for vertex outside the graph");
      if (m < data.graph.out_degree(v)) {
        fail(source_name, mark_line_numbers[k], "mark smaller than the out-degree");
      }
      data.marks[v] = m;
    }
  }
  return data;
}

EdgeListData read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_edge_list(in, path.string());
}

void write_edge_list(std::ostream& out, const DirectedMultigraph& g, std::span<const Count> marks) {
  out << "# n=" << g.num_vertices() << '\n';
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    for (const Arc& a : g.out_arcs(v)) {
      out << v << ' ' << a.vertex;
      if (a.multiplicity != 1) out << ' ' << a.multiplicity;
      out << '\n';
    }
  }
  for (std::size_t v = 0; v < marks.size(); ++v) out << "#m " << v << ' ' << marks[v] << '\n';
}

void write_edge_list(const std::filesystem::path& path, const DirectedMultigraph& g,
                     std::span<const Count> marks) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_edge_list(out, g, marks);
}

std::vector<double> read_value_column(const std::filesystem::path& path,
                                      std::optional<std::string> column) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string raw;
  std::size_t line_no = 0;
  std::size_t col = 0;
  bool header_seen = false;
  std::vector<double> values;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!header_seen) {
      header_seen = true;
      std::string first(fields.front());
      char* end = nullptr;
      std::strtod(first.c_str(), &end);
      const bool numeric = end != first.c_str() && *end == '\0';
      if (!numeric) {
        col = fields.size() - 1;
        if (column) {
          auto it = std::find(fields.begin(), fields.end(), std::string_view(*column));
          if (it == fields.end()) fail(path.string(), line_no, "no column named " + *column);
          col = static_cast<std::size_t>(it - fields.begin());
        }
        continue;
      }
      col = fields.size() - 1;
    }
    if (col >= fields.size()) fail(path.string(), line_no, "missing column");
    std::string field(fields[col]);
    char* end = nullptr;
    const double x = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0') fail(path.string(), line_no, "not a number: " + field);
    values.push_back(x);
  }
  return values;
}

std::string format_double(double x) {
  // shortest text that reads back to the same double
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace lwpr
