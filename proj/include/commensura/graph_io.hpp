#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "commensura/graph.hpp"

namespace commensura {

/// A parsed graph file: the graph plus the subgraphs it names.
struct GraphDocument {
  MetricGraph graph;
  std::vector<Subgraph> subgraphs;

  const Subgraph* find_subgraph(std::string_view name) const;
};

// Line format (`#` starts a comment):
//   symbol NAME pi
//   symbol NAME <decimal|rational> err <rational>
//   vertex NAME
//   edge NAME V1 V2 <scalar literal>
//   subgraph NAME E1 E2 ...
GraphDocument parse_graph(std::string_view text, unsigned bits = kDefaultPrecisionBits);
std::string serialize_graph(const MetricGraph& g, const std::vector<Subgraph>& subgraphs = {});

/// Reads user symbol declarations (`symbol` lines) shared by the graph and
/// measure-tiling formats into `table`.  Returns false if `line` is not one.
bool parse_symbol_line(const std::vector<std::string>& words, SymbolTable& table);
std::string serialize_symbols(const SymbolTable& table);

std::vector<std::string> split_words(std::string_view line);
std::string format_rational_or_decimal(const Rational& q);

}  // namespace commensura
