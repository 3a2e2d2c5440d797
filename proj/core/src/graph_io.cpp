#include "brainergm/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "brainergm/error.hpp"

namespace brainergm {

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  std::string s = hash == std::string::npos ? line : line.substr(0, hash);
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_int(std::string_view text, long long& out) {
  if (text.empty()) return false;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

Graph load_graph(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  long long n = -1;
  long long base = 0;
  bool have_header = false;
  Graph g;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_comment(raw);
    if (line.empty()) continue;
    std::istringstream tokens(line);
    std::vector<std::string> parts;
    for (std::string tok; tokens >> tok;) parts.push_back(tok);

    if (!have_header) {
      for (const auto& p : parts) {
        long long value = 0;
        if (p.rfind("n=", 0) == 0 && parse_int(std::string_view(p).substr(2), value)) {
          n = value;
        } else if (p.rfind("base=", 0) == 0 && parse_int(std::string_view(p).substr(5), value) &&
                   (value == 0 || value == 1)) {
          base = value;
        } else {
          throw ParseError(line_no, "expected header 'n=<count> [base=0|1]', got '" + line + "'");
        }
      }
      if (n < 1) throw ParseError(line_no, "header must declare n >= 1");
      g = Graph(static_cast<int>(n));
      have_header = true;
      continue;
    }

    long long a = 0;
    long long b = 0;
    if (parts.size() != 2 || !parse_int(parts[0], a) || !parse_int(parts[1], b)) {
      throw ParseError(line_no, "malformed edge line '" + line + "'");
    }
    a -= base;
    b -= base;
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw ParseError(line_no, "node id out of range in '" + line + "' (n=" + std::to_string(n) + ")");
    }
    if (a == b) throw ParseError(line_no, "self-loop '" + line + "'");
    if (g.has_edge(static_cast<NodeId>(a), static_cast<NodeId>(b))) {
      throw ParseError(line_no, "duplicate edge '" + line + "'");
    }
    g.add_edge(static_cast<NodeId>(a), static_cast<NodeId>(b));
  }
  if (!have_header) throw ParseError(line_no, "missing 'n=<count>' header");
  return g;
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open graph file " + path.string());
  return load_graph(in);
}

void save_graph(const Graph& g, std::ostream& out) {
  out << "n=" << g.num_nodes() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void save_graph(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write graph file " + path.string());
  save_graph(g, out);
}

NodeAttributes load_attributes(std::istream& in, int n) {
  NodeAttributes attrs;
  attrs.labels.assign(static_cast<std::size_t>(n), {});
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::string raw;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;
    const auto comma = raw.find(',');
    if (comma == std::string::npos) throw ParseError(line_no, "expected 'node_id,label'");
    const std::string left = raw.substr(0, comma);
    const std::string right = raw.substr(comma + 1);
    if (header) {
      attrs.name = right;
      header = false;
      continue;
    }
    long long id = 0;
    if (!parse_int(left, id) || id < 0 || id >= n) {
      throw ParseError(line_no, "invalid node id '" + left + "'");
    }
    if (seen[id]) throw ParseError(line_no, "duplicate node id " + left);
    seen[id] = true;
    attrs.labels[id] = right;
  }
  for (int i = 0; i < n; ++i) {
    if (!seen[i]) throw ParseError(line_no, "missing attribute for node " + std::to_string(i));
  }
  return attrs;
}

NodeAttributes load_attributes(const std::filesystem::path& path, int n) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open attribute file " + path.string());
  return load_attributes(in, n);
}

}  // namespace brainergm
