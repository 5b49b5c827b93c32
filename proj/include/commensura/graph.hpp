#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "commensura/scalar.hpp"

namespace commensura {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr std::size_t kDefaultCycleCap = 1'000'000;

struct Edge {
  std::string name;
  VertexId u = 0;
  VertexId v = 0;
  Scalar length;

  bool is_loop() const { return u == v; }
  VertexId other(VertexId w) const { return w == u ? v : u; }
};

/// One end of an edge as seen from a vertex.  Loops appear twice in the
/// incidence list of their vertex, once per direction.
struct Incidence {
  EdgeId edge;
  VertexId to;
  bool forward;  // traverses the edge from u to v
};

/// Finite metric multigraph.  Loops and parallel edges are allowed; every
/// edge length is certified positive and the graph is connected.
class MetricGraph {
 public:
  MetricGraph(SymbolTablePtr symbols, std::vector<std::string> vertices, std::vector<Edge> edges,
              unsigned bits = kDefaultPrecisionBits);

  const SymbolTablePtr& symbols() const { return symbols_; }
  std::size_t vertex_count() const { return vertex_names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::string& vertex_name(VertexId v) const { return vertex_names_.at(v); }
  const std::vector<std::string>& vertex_names() const { return vertex_names_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Incidence>& incidences(VertexId v) const { return adjacency_.at(v); }
  std::size_t degree(VertexId v) const { return adjacency_.at(v).size(); }

  std::optional<VertexId> find_vertex(std::string_view name) const;
  std::optional<EdgeId> find_edge(std::string_view name) const;

 private:
  SymbolTablePtr symbols_;
  std::vector<std::string> vertex_names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::unordered_map<std::string, VertexId> vertex_index_;
  std::unordered_map<std::string, EdgeId> edge_index_;
};

/// Edge subset of a parent graph; its vertex set is the set of edge ends.
class Subgraph {
 public:
  Subgraph() = default;
  Subgraph(const MetricGraph& g, std::vector<EdgeId> edges, std::string name = {});

  static Subgraph whole(const MetricGraph& g, std::string name = {});

  const std::string& name() const { return name_; }
  const std::vector<EdgeId>& edges() const { return edges_; }
  bool contains_edge(EdgeId e) const { return e < in_.size() && in_[e]; }
  bool contains_vertex(VertexId v) const { return v < degree_.size() && degree_[v] > 0; }
  std::size_t degree(VertexId v) const { return v < degree_.size() ? degree_[v] : 0; }
  std::vector<VertexId> vertices() const;
  /// Characteristic vector in the edge space of the parent graph.
  std::vector<Rational> edge_vector() const;

 private:
  std::string name_;
  std::vector<EdgeId> edges_;
  std::vector<bool> in_;
  std::vector<std::size_t> degree_;
};

/// Edge path; `vertices` has one more entry than `edges`.
struct Path {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
  Scalar length;
};

/// Embedded closed edge path; edges[i] joins vertices[i] and vertices[i+1]
/// (cyclically), so both lists have the same size.
struct Cycle {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
  Scalar length;

  bool contains_vertex(VertexId v) const;
  bool contains_edge(EdgeId e) const;
};

bool vertex_disjoint(const Cycle& a, const Cycle& b);
std::vector<Rational> edge_vector(const MetricGraph& g, const std::vector<EdgeId>& edges);

struct ShortestPath {
  Scalar distance;
  std::vector<EdgeId> edges;
  bool unique = true;
};

/// All-pairs exact distances with geodesic multiplicity.  Multiplicity is
/// the number of distinct shortest edge paths, saturated at two, counted on
/// the shortest-path DAG with exact equality of lengths.
class DistanceTable {
 public:
  explicit DistanceTable(const MetricGraph& g, unsigned bits = kDefaultPrecisionBits);

  const Scalar& distance(VertexId u, VertexId v) const { return dist_[u * n_ + v]; }
  bool unique(VertexId u, VertexId v) const { return count_[u * n_ + v] == 1; }
  /// Edges of one shortest path from u to v (the unique one when unique()).
  std::vector<EdgeId> path(VertexId u, VertexId v) const;
  std::size_t size() const { return n_; }

 private:
  const MetricGraph* graph_;
  std::size_t n_;
  std::vector<Scalar> dist_;
  std::vector<std::uint8_t> count_;
  std::vector<EdgeId> pred_;
};

ShortestPath shortest_path(const MetricGraph& g, VertexId u, VertexId v,
                           unsigned bits = kDefaultPrecisionBits);

struct Girth {
  Scalar length;
  Cycle witness;
};

/// Throws NoCycle on a forest.
Girth girth(const MetricGraph& g, unsigned bits = kDefaultPrecisionBits);

/// A point on an edge at `offset` from the edge's u end (from v when reversed).
struct PointOnGraph {
  EdgeId edge = 0;
  bool reversed = false;
  Scalar offset;

  PointOnGraph normalized(const MetricGraph& g) const;
  std::optional<VertexId> vertex(const MetricGraph& g) const;
};

std::string describe(const MetricGraph& g, const PointOnGraph& p);

struct DiameterResult {
  Scalar max_distance;
  PointOnGraph x;
  PointOnGraph y;
};

/// Exact supremum of d_G(x, y) over all points x, y of S.
DiameterResult point_diameter(const MetricGraph& g, const Subgraph& s, const DistanceTable& d,
                              unsigned bits = kDefaultPrecisionBits);

struct DiameterViolation {
  PointOnGraph x;
  PointOnGraph y;
  Scalar distance;
};

std::optional<DiameterViolation> point_diameter_check(const MetricGraph& g, const Subgraph& s,
                                                      const Scalar& bound, const DistanceTable& d,
                                                      unsigned bits = kDefaultPrecisionBits);

/// All embedded cycles of S, each once up to rotation and reflection.
std::vector<Cycle> cycles_of(const MetricGraph& g, const Subgraph& s,
                             std::size_t cap = kDefaultCycleCap);

/// Maximal paths whose interior vertices have degree two in S and whose
/// (distinct) endpoints have degree at least three.  Throws
/// HypothesisViolation when S has a vertex of degree one.
std::vector<Path> segments_of(const MetricGraph& g, const Subgraph& s);

struct Bar {
  Path path;           // from a vertex of cycles[cycle1] to one of cycles[cycle2]
  std::size_t cycle1;  // indices into the cycle list passed to bars_of
  std::size_t cycle2;
};

std::vector<Bar> bars_of(const MetricGraph& g, const Subgraph& s, const std::vector<Cycle>& cycles,
                         std::size_t cap = kDefaultCycleCap);

}  // namespace commensura
