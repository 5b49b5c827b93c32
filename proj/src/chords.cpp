#include "commensura/chords.hpp"

#include <algorithm>

#include "commensura/error.hpp"

namespace commensura {

ImmersedLoop::ImmersedLoop(const MetricGraph& g, std::vector<LoopStep> steps)
    : steps_(std::move(steps)) {
  if (steps_.empty()) throw Error(ErrorKind::InvalidArgument, "empty loop");
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const LoopStep& st = steps_[i];
    const Edge& e = g.edge(st.edge);
    bool ok = st.forward ? (e.u == st.from && e.v == st.to) : (e.v == st.from && e.u == st.to);
    if (!ok)
      throw Error(ErrorKind::InvalidArgument, "step " + std::to_string(i) + " does not follow edge '" +
                                                  e.name + "'");
    const LoopStep& next = steps_[(i + 1) % steps_.size()];
    if (st.to != next.from)
      throw Error(ErrorKind::InvalidArgument, "loop is not closed after edge '" + e.name + "'");
    if (steps_.size() > 1 || !e.is_loop()) {
      bool backtrack = next.edge == st.edge && (!e.is_loop() || next.forward != st.forward);
      if (backtrack)
        throw Error(ErrorKind::InvalidArgument, "loop backtracks along edge '" + e.name + "'");
    }
    positions_.push_back(length_);
    length_ += e.length;
  }
}

ImmersedLoop ImmersedLoop::from_cycle(const MetricGraph& g, const Cycle& c) {
  std::vector<LoopStep> steps;
  const std::size_t n = c.edges.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Edge& e = g.edge(c.edges[i]);
    VertexId from = c.vertices[i];
    VertexId to = c.vertices[(i + 1) % n];
    steps.push_back({c.edges[i], from, to, e.is_loop() || e.u == from});
  }
  return ImmersedLoop(g, std::move(steps));
}

ImmersedLoop ImmersedLoop::from_edges(const MetricGraph& g, const std::vector<EdgeId>& edges) {
  if (edges.empty()) throw Error(ErrorKind::InvalidArgument, "empty loop");
  const Edge& first = g.edge(edges.front());
  for (VertexId start : {first.u, first.v}) {
    std::vector<LoopStep> steps;
    VertexId cur = start;
    bool ok = true;
    for (EdgeId id : edges) {
      const Edge& e = g.edge(id);
      if (e.u != cur && e.v != cur) {
        ok = false;
        break;
      }
      VertexId to = e.other(cur);
      steps.push_back({id, cur, to, e.is_loop() || e.u == cur});
      cur = to;
    }
    if (!ok || cur != start) continue;
    try {
      return ImmersedLoop(g, std::move(steps));
    } catch (const Error&) {
      if (start == first.v) throw;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "edges do not form a closed walk");
}

bool ImmersedLoop::embedded() const {
  std::vector<VertexId> seen;
  for (const auto& st : steps_) seen.push_back(st.from);
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

ImmersedLoop ImmersedLoop::reversed(const MetricGraph& g) const {
  std::vector<LoopStep> steps;
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    bool loop_edge = it->from == it->to;
    steps.push_back({it->edge, it->to, it->from, loop_edge ? true : !it->forward});
  }
  return ImmersedLoop(g, std::move(steps));
}

namespace {

// Shared chord test for a vertex pair: returns the distance when 0 < d < PI
// with a unique geodesic; nullopt when d is out of range.
std::optional<Scalar> chord_length(const MetricGraph& g, const DistanceTable& d, VertexId a,
                                   VertexId b, unsigned bits) {
  if (a == b) return std::nullopt;
  const Scalar& len = d.distance(a, b);
  if (order(len, Scalar::pi(), bits) >= 0) return std::nullopt;
  if (!d.unique(a, b))
    throw Error(ErrorKind::InternalInconsistency,
                "two geodesics of length " + to_string(len) + " < PI join '" + g.vertex_name(a) +
                    "' and '" + g.vertex_name(b) + "'; the girth is below 2*PI");
  return len;
}

}  // namespace

std::vector<Chord> chords_of_loop(const MetricGraph& g, const ImmersedLoop& loop,
                                  const DistanceTable& d, unsigned bits) {
  std::vector<std::size_t> branch;
  for (std::size_t i = 0; i < loop.size(); ++i)
    if (g.degree(loop.vertex(i)) >= 3) branch.push_back(i);

  std::vector<Chord> out;
  for (std::size_t i : branch)
    for (std::size_t j : branch) {
      const VertexId a = loop.vertex(i);
      const VertexId b = loop.vertex(j);
      auto len = chord_length(g, d, a, b, bits);
      if (!len) continue;
      auto path = d.path(a, b);
      EdgeId head = path.front();
      EdgeId tail = path.back();
      if (head == loop.incoming(i) || head == loop.outgoing(i)) continue;
      if (tail == loop.incoming(j) || tail == loop.outgoing(j)) continue;
      Scalar z = Scalar::pi() - *len;
      Area area = z * z * Rational(2);
      out.push_back(Chord{i, j, loop.position(i), loop.position(j), a, b, *len, std::move(path),
                          std::move(z), std::move(area)});
    }
  return out;
}

std::vector<SubgraphChord> chords_of_subgraph(const MetricGraph& g, const Subgraph& s,
                                              const DistanceTable& d, unsigned bits) {
  std::vector<SubgraphChord> out;
  const auto verts = s.vertices();
  for (VertexId a : verts)
    for (VertexId b : verts) {
      auto len = chord_length(g, d, a, b, bits);
      if (!len) continue;
      auto path = d.path(a, b);
      if (s.contains_edge(path.front()) || s.contains_edge(path.back())) continue;
      Scalar z = Scalar::pi() - *len;
      Area area = z * z * Rational(2);
      out.push_back(SubgraphChord{a, b, *len, std::move(path), std::move(z), std::move(area)});
    }
  return out;
}

namespace {

void append_cycle_from(const MetricGraph& g, const Cycle& c, VertexId start,
                       std::vector<LoopStep>& steps) {
  const std::size_t n = c.edges.size();
  auto it = std::find(c.vertices.begin(), c.vertices.end(), start);
  if (it == c.vertices.end())
    throw Error(ErrorKind::InvalidArgument, "bar end is not on its cycle");
  const std::size_t k = static_cast<std::size_t>(it - c.vertices.begin());
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t idx = (k + i) % n;
    const Edge& e = g.edge(c.edges[idx]);
    VertexId from = c.vertices[idx];
    steps.push_back({c.edges[idx], from, c.vertices[(idx + 1) % n], e.is_loop() || e.u == from});
  }
}

}  // namespace

BarLoop make_bar_loop(const MetricGraph& g, const Bar& bar, const Cycle& c1, const Cycle& c2) {
  if (!vertex_disjoint(c1, c2))
    throw Error(ErrorKind::InvalidArgument, "the cycles joined by a bar must be disjoint");
  const Path& p = bar.path;
  if (p.edges.empty()) throw Error(ErrorKind::InvalidArgument, "empty bar");
  const VertexId u = p.vertices.front();
  const VertexId v = p.vertices.back();
  if (!c1.contains_vertex(u) || !c2.contains_vertex(v))
    throw Error(ErrorKind::InvalidArgument, "bar does not join its cycles");

  std::vector<LoopStep> steps;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const Edge& e = g.edge(p.edges[i]);
    steps.push_back({p.edges[i], p.vertices[i], p.vertices[i + 1], e.u == p.vertices[i]});
  }
  append_cycle_from(g, c2, v, steps);
  for (std::size_t i = p.edges.size(); i-- > 0;) {
    const Edge& e = g.edge(p.edges[i]);
    steps.push_back({p.edges[i], p.vertices[i + 1], p.vertices[i], e.u == p.vertices[i + 1]});
  }
  append_cycle_from(g, c1, u, steps);

  ImmersedLoop loop(g, std::move(steps));
  BarLoopParams params{p.length, c1.length, c2.length, Scalar(0), p.length * 2 + c2.length};
  return BarLoop{std::move(loop), std::move(params), u, v};
}

SplicedRegion spliced_region(const ImmersedLoop& loop, const std::optional<BarLoopParams>& bar) {
  if (!bar) {
    if (!loop.embedded())
      throw Error(ErrorKind::Unsupported,
                  "spliced pairs of a non-embedded loop other than a bar loop");
    return {};
  }
  const BarLoopParams& p = *bar;
  if (!(loop.length() == p.l1 + p.l2 + p.b * 2))
    throw Error(ErrorKind::InvalidArgument, "bar loop length " + to_string(loop.length()) +
                                                " differs from l1 + l2 + 2b");
  const Scalar pi = Scalar::pi();
  SplicedRectangle first;
  first.corners = {{{p.s1 - pi, p.s2},
                    {p.s1, p.s2 + pi},
                    {p.s1 + p.b + pi, p.s2 - p.b},
                    {p.s1 + p.b, p.s2 - p.b - pi}}};
  first.center_x = p.s1 + p.b / 2;
  first.center_y = p.s2 - p.b / 2;
  first.half_u = pi;
  first.half_w = p.b + pi;

  SplicedRectangle second = first;
  for (auto& [x, y] : second.corners) std::swap(x, y);
  std::swap(second.center_x, second.center_y);
  return SplicedRegion{{std::move(first), std::move(second)}};
}

}  // namespace commensura
