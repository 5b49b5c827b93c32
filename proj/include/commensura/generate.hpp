#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "commensura/graph.hpp"

namespace commensura {

// Fixture generators.  Vertices are named v0.. (p0.., l0.. for incidence
// graphs) and edges e0.. in a fixed order, so the output is deterministic.

/// n vertices on a circle of the given length, equal edges.
MetricGraph circle_graph(const Scalar& length, std::size_t n);
/// Two vertices joined by three edges of the given length.
MetricGraph theta_graph(const Scalar& length);
/// A loop at each end of a single bar edge.
MetricGraph dumbbell_graph(const Scalar& loop, const Scalar& bar);
/// Point-line incidence graph of the projective plane over GF(q), every
/// edge PI/3.  Throws InvalidArgument unless q is a prime power.
MetricGraph incidence_graph(unsigned q);
MetricGraph heawood_graph();
/// Same graph with `delta` added to the length of one edge.
MetricGraph perturb(const MetricGraph& base, std::string_view edge, const Scalar& delta);

/// Command-line front end:
///   circle <length> <n> | theta [<length>] | dumbbell <loop> <bar> |
///   heawood | pg <q> | perturb <base...> <edge> <delta>
MetricGraph generate(const std::vector<std::string>& args);

}  // namespace commensura
