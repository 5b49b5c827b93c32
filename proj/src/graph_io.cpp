#include "commensura/graph_io.hpp"

#include <memory>
#include <sstream>

#include "commensura/error.hpp"

namespace commensura {

const Subgraph* GraphDocument::find_subgraph(std::string_view name) const {
  for (const auto& s : subgraphs)
    if (s.name() == name) return &s;
  return nullptr;
}

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

namespace {

std::string strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return std::string(line.substr(0, hash));
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

void require_identifier(const std::string& s) {
  if (!is_identifier(s)) throw Error(ErrorKind::Syntax, "'" + s + "' is not an identifier");
}

// Text after the first `skip` words of `line`, trimmed.
std::string rest_of_line(const std::string& line, std::size_t skip) {
  std::size_t pos = 0;
  for (std::size_t k = 0; k < skip; ++k) {
    pos = line.find_first_not_of(" \t", pos);
    pos = line.find_first_of(" \t", pos);
    if (pos == std::string::npos) return {};
  }
  auto first = line.find_first_not_of(" \t\r", pos);
  if (first == std::string::npos) return {};
  auto last = line.find_last_not_of(" \t\r");
  return line.substr(first, last - first + 1);
}

[[noreturn]] void rethrow_at(const Error& e, std::size_t line_no) {
  std::string what = e.what();
  auto colon = what.find(": ");
  std::string message = colon == std::string::npos ? what : what.substr(colon + 2);
  throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + message);
}

}  // namespace

bool parse_symbol_line(const std::vector<std::string>& words, SymbolTable& table) {
  if (words.empty() || words[0] != "symbol") return false;
  if (words.size() == 3 && words[2] == "pi") {
    require_identifier(words[1]);
    table.declare_pi_alias(words[1]);
    return true;
  }
  if (words.size() != 5 || words[3] != "err")
    throw Error(ErrorKind::Syntax, "expected 'symbol NAME pi' or 'symbol NAME <value> err <radius>'");
  require_identifier(words[1]);
  table.declare_decimal(words[1], parse_decimal(words[2]), parse_rational(words[4]));
  return true;
}

std::string format_rational_or_decimal(const Rational& q) {
  // Terminating decimals print as decimals, anything else as n/d.
  mpz_class den = q.get_den();
  unsigned twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1 || q.get_den() == 1) return q.get_str();
  return to_decimal(q, static_cast<int>(std::max(twos, fives)));
}

std::string serialize_symbols(const SymbolTable& table) {
  std::string out;
  for (const auto& alias : table.pi_aliases()) out += "symbol " + alias + " pi\n";
  for (std::size_t i = kPiSymbol + 1; i < table.size(); ++i) {
    const auto& s = table.symbol(static_cast<SymbolId>(i));
    out += "symbol " + s.name + " " + format_rational_or_decimal(s.value) + " err " +
           s.radius.get_str() + "\n";
  }
  return out;
}

GraphDocument parse_graph(std::string_view text, unsigned bits) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    for (std::string l; std::getline(in, l);) lines.push_back(strip_comment(l));
  }

  // Symbols first so that edge literals may refer to symbols declared later.
  auto table = std::make_shared<SymbolTable>();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      parse_symbol_line(split_words(lines[i]), *table);
    } catch (const Error& e) {
      rethrow_at(e, i + 1);
    }
  }
  SymbolTablePtr symbols = table;

  std::vector<std::string> vertices;
  std::unordered_map<std::string, VertexId> vertex_index;
  std::vector<Edge> edges;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> subgraph_lines;
  std::vector<std::size_t> edge_line;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto words = split_words(lines[i]);
    if (words.empty() || words[0] == "symbol") continue;
    try {
      if (words[0] == "vertex") {
        if (words.size() != 2) throw Error(ErrorKind::Syntax, "expected 'vertex NAME'");
        require_identifier(words[1]);
        if (!vertex_index.emplace(words[1], static_cast<VertexId>(vertices.size())).second)
          throw Error(ErrorKind::DuplicateName, "vertex '" + words[1] + "' declared twice");
        vertices.push_back(words[1]);
      } else if (words[0] == "edge") {
        if (words.size() < 5) throw Error(ErrorKind::Syntax, "expected 'edge NAME V1 V2 LENGTH'");
        require_identifier(words[1]);
        Edge e;
        e.name = words[1];
        for (int k = 0; k < 2; ++k) {
          auto it = vertex_index.find(words[2 + k]);
          if (it == vertex_index.end())
            throw Error(ErrorKind::DanglingEndpoint,
                        "edge '" + e.name + "' names undeclared vertex '" + words[2 + k] + "'");
          (k == 0 ? e.u : e.v) = it->second;
        }
        e.length = parse_scalar(rest_of_line(lines[i], 4), symbols);
        if (compare(e.length, Scalar(0), bits) != Ordering::Greater)
          throw Error(ErrorKind::NonpositiveLength,
                      "edge '" + e.name + "' has length " + to_string(e.length));
        edges.push_back(std::move(e));
        edge_line.push_back(i + 1);
      } else if (words[0] == "subgraph") {
        if (words.size() < 2) throw Error(ErrorKind::Syntax, "expected 'subgraph NAME E...'");
        require_identifier(words[1]);
        subgraph_lines.emplace_back(i + 1, std::move(words));
      } else {
        throw Error(ErrorKind::Syntax, "unknown directive '" + words[0] + "'");
      }
    } catch (const Error& e) {
      rethrow_at(e, i + 1);
    }
  }

  GraphDocument doc{MetricGraph(symbols, std::move(vertices), std::move(edges), bits), {}};
  for (auto& [line_no, words] : subgraph_lines) {
    try {
      if (doc.find_subgraph(words[1]))
        throw Error(ErrorKind::DuplicateName, "subgraph '" + words[1] + "' declared twice");
      std::vector<EdgeId> ids;
      for (std::size_t k = 2; k < words.size(); ++k) {
        auto id = doc.graph.find_edge(words[k]);
        if (!id) throw Error(ErrorKind::UnknownName, "unknown edge '" + words[k] + "'");
        ids.push_back(*id);
      }
      doc.subgraphs.emplace_back(doc.graph, std::move(ids), words[1]);
    } catch (const Error& e) {
      rethrow_at(e, line_no);
    }
  }
  return doc;
}

std::string serialize_graph(const MetricGraph& g, const std::vector<Subgraph>& subgraphs) {
  std::string out = serialize_symbols(*g.symbols());
  for (const auto& v : g.vertex_names()) out += "vertex " + v + "\n";
  for (const auto& e : g.edges())
    out += "edge " + e.name + " " + g.vertex_name(e.u) + " " + g.vertex_name(e.v) + " " +
           to_string(e.length) + "\n";
  for (const auto& s : subgraphs) {
    out += "subgraph " + s.name();
    for (EdgeId e : s.edges()) out += " " + g.edge(e).name;
    out += "\n";
  }
  return out;
}

}  // namespace commensura
