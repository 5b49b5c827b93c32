#pragma once

#include <array>
#include <optional>
#include <vector>

#include "commensura/graph.hpp"

namespace commensura {

struct LoopStep {
  EdgeId edge;
  VertexId from;
  VertexId to;
  bool forward;  // u -> v; loops are always traversed forward
};

/// Closed edge path without backtracking, parameterised by arc length on
/// R / lZ.  Vertex i of the loop sits at position(i) and is left by step i.
class ImmersedLoop {
 public:
  ImmersedLoop(const MetricGraph& g, std::vector<LoopStep> steps);

  static ImmersedLoop from_cycle(const MetricGraph& g, const Cycle& c);
  /// Orientation of every edge is inferred from the endpoints of its
  /// neighbours; throws InvalidArgument if no consistent closed walk exists.
  static ImmersedLoop from_edges(const MetricGraph& g, const std::vector<EdgeId>& edges);

  std::size_t size() const { return steps_.size(); }
  const LoopStep& step(std::size_t i) const { return steps_.at(i); }
  const std::vector<LoopStep>& steps() const { return steps_; }
  VertexId vertex(std::size_t i) const { return steps_.at(i).from; }
  const Scalar& position(std::size_t i) const { return positions_.at(i); }
  const Scalar& length() const { return length_; }
  /// Edge arriving at vertex i and edge leaving it.
  EdgeId incoming(std::size_t i) const { return steps_[(i + size() - 1) % size()].edge; }
  EdgeId outgoing(std::size_t i) const { return steps_[i].edge; }
  /// No vertex is visited twice.
  bool embedded() const;
  ImmersedLoop reversed(const MetricGraph& g) const;

 private:
  std::vector<LoopStep> steps_;
  std::vector<Scalar> positions_;
  Scalar length_;
};

/// Directed chord (s, t) of a loop: the unique geodesic between the two
/// vertices is shorter than PI and leaves the loop at both ends.
struct Chord {
  std::size_t source;  // loop vertex indices
  std::size_t target;
  Scalar s;  // loop positions
  Scalar t;
  VertexId source_vertex;
  VertexId target_vertex;
  Scalar length;
  std::vector<EdgeId> geodesic;
  Scalar z;  // PI - length
  Area area;  // 2 z^2
};

/// Chords between positions over vertices of degree >= 3 in G, ordered by
/// (source, target).  A non-unique geodesic shorter than PI raises
/// InternalInconsistency.
std::vector<Chord> chords_of_loop(const MetricGraph& g, const ImmersedLoop& loop,
                                  const DistanceTable& d, unsigned bits = kDefaultPrecisionBits);

struct SubgraphChord {
  VertexId source;
  VertexId target;
  Scalar length;
  std::vector<EdgeId> geodesic;
  Scalar z;
  Area area;
};

/// Chords of a subgraph: the geodesic's first and last edges lie outside it.
std::vector<SubgraphChord> chords_of_subgraph(const MetricGraph& g, const Subgraph& s,
                                              const DistanceTable& d,
                                              unsigned bits = kDefaultPrecisionBits);

/// Loop whose preimage of the bar B is [s1, s1+b] and [s2-b, s2].
struct BarLoopParams {
  Scalar b;
  Scalar l1;
  Scalar l2;
  Scalar s1;
  Scalar s2;
};

struct BarLoop {
  ImmersedLoop loop;
  BarLoopParams params;
  VertexId u;  // bar end on the first cycle
  VertexId v;  // bar end on the second cycle
};

/// Runs along the bar, once around the second cycle, back along the bar and
/// once around the first cycle.  s1 = 0 and s2 = 2b + l2.
BarLoop make_bar_loop(const MetricGraph& g, const Bar& bar, const Cycle& c1, const Cycle& c2);

/// Rectangle of the loop square given by its four corners.  In rotated
/// coordinates u = x + y, w = y - x it is axis-aligned with half extents
/// half_u, half_w around the centre.
struct SplicedRectangle {
  std::array<std::pair<Scalar, Scalar>, 4> corners;
  Scalar center_x;
  Scalar center_y;
  Scalar half_u;
  Scalar half_w;
};

struct SplicedRegion {
  std::vector<SplicedRectangle> rectangles;
};

/// Empty for an embedded loop; the two bar rectangles for a bar loop.  Any
/// other immersed loop raises Unsupported.
SplicedRegion spliced_region(const ImmersedLoop& loop,
                             const std::optional<BarLoopParams>& bar = std::nullopt);

}  // namespace commensura
