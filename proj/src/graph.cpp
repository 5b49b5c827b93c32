#include "commensura/graph.hpp"

#include <algorithm>
#include <functional>

#include "commensura/error.hpp"

namespace commensura {

// -------------------------------------------------------------- MetricGraph

MetricGraph::MetricGraph(SymbolTablePtr symbols, std::vector<std::string> vertices,
                         std::vector<Edge> edges, unsigned bits)
    : symbols_(std::move(symbols)),
      vertex_names_(std::move(vertices)),
      edges_(std::move(edges)),
      adjacency_(vertex_names_.size()) {
  for (std::size_t i = 0; i < vertex_names_.size(); ++i)
    if (!vertex_index_.emplace(vertex_names_[i], static_cast<VertexId>(i)).second)
      throw Error(ErrorKind::DuplicateName, "vertex '" + vertex_names_[i] + "' declared twice");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (!edge_index_.emplace(e.name, static_cast<EdgeId>(i)).second)
      throw Error(ErrorKind::DuplicateName, "edge '" + e.name + "' declared twice");
    if (e.u >= vertex_names_.size() || e.v >= vertex_names_.size())
      throw Error(ErrorKind::DanglingEndpoint, "edge '" + e.name + "' has an unknown endpoint");
    Ordering sign = compare(e.length, Scalar(0), bits);
    if (sign == Ordering::Indeterminate)
      throw Error(ErrorKind::PrecisionExhausted, "sign of the length of edge '" + e.name + "'");
    if (sign != Ordering::Greater)
      throw Error(ErrorKind::NonpositiveLength,
                  "edge '" + e.name + "' has length " + to_string(e.length));
    const auto id = static_cast<EdgeId>(i);
    adjacency_[e.u].push_back({id, e.v, true});
    adjacency_[e.v].push_back({id, e.u, false});
  }

  if (!vertex_names_.empty()) {
    std::vector<bool> seen(vertex_names_.size(), false);
    std::vector<VertexId> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (const auto& inc : adjacency_[x])
        if (!seen[inc.to]) {
          seen[inc.to] = true;
          stack.push_back(inc.to);
        }
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i])
        throw Error(ErrorKind::Disconnected,
                    "vertex '" + vertex_names_[i] + "' is not reachable from '" +
                        vertex_names_[0] + "'");
  }
}

std::optional<VertexId> MetricGraph::find_vertex(std::string_view name) const {
  auto it = vertex_index_.find(std::string(name));
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> MetricGraph::find_edge(std::string_view name) const {
  auto it = edge_index_.find(std::string(name));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------- Subgraph

Subgraph::Subgraph(const MetricGraph& g, std::vector<EdgeId> edges, std::string name)
    : name_(std::move(name)),
      edges_(std::move(edges)),
      in_(g.edge_count(), false),
      degree_(g.vertex_count(), 0) {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (EdgeId e : edges_) {
    if (e >= g.edge_count()) throw Error(ErrorKind::UnknownName, "edge id out of range");
    in_[e] = true;
    degree_[g.edge(e).u] += 1;
    degree_[g.edge(e).v] += 1;
  }
}

Subgraph Subgraph::whole(const MetricGraph& g, std::string name) {
  std::vector<EdgeId> all(g.edge_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<EdgeId>(i);
  return Subgraph(g, std::move(all), std::move(name));
}

std::vector<VertexId> Subgraph::vertices() const {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < degree_.size(); ++v)
    if (degree_[v] > 0) out.push_back(static_cast<VertexId>(v));
  return out;
}

std::vector<Rational> Subgraph::edge_vector() const {
  std::vector<Rational> out(in_.size(), 0);
  for (EdgeId e : edges_) out[e] = 1;
  return out;
}

bool Cycle::contains_vertex(VertexId v) const {
  return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

bool Cycle::contains_edge(EdgeId e) const {
  return std::find(edges.begin(), edges.end(), e) != edges.end();
}

bool vertex_disjoint(const Cycle& a, const Cycle& b) {
  return std::none_of(a.vertices.begin(), a.vertices.end(),
                      [&](VertexId v) { return b.contains_vertex(v); });
}

std::vector<Rational> edge_vector(const MetricGraph& g, const std::vector<EdgeId>& edges) {
  std::vector<Rational> out(g.edge_count(), 0);
  for (EdgeId e : edges) out[e] += 1;
  return out;
}

// ------------------------------------------------------------ shortest paths

namespace {

struct SourceTree {
  std::vector<std::optional<Scalar>> dist;
  std::vector<std::uint8_t> count;
  std::vector<EdgeId> pred;
};

SourceTree dijkstra(const MetricGraph& g, VertexId source, std::optional<EdgeId> excluded,
                    unsigned bits) {
  const std::size_t n = g.vertex_count();
  SourceTree t{std::vector<std::optional<Scalar>>(n), std::vector<std::uint8_t>(n, 0),
               std::vector<EdgeId>(n, 0)};
  std::vector<bool> settled(n, false);
  t.dist[source] = Scalar(0);
  t.count[source] = 1;
  for (std::size_t round = 0; round < n; ++round) {
    std::optional<VertexId> next;
    for (std::size_t v = 0; v < n; ++v) {
      if (settled[v] || !t.dist[v]) continue;
      if (!next || order(*t.dist[v], *t.dist[*next], bits) < 0) next = static_cast<VertexId>(v);
    }
    if (!next) break;
    const VertexId x = *next;
    settled[x] = true;
    for (const auto& inc : g.incidences(x)) {
      if (inc.to == x || settled[inc.to] || (excluded && inc.edge == *excluded)) continue;
      Scalar cand = *t.dist[x] + g.edge(inc.edge).length;
      auto& cur = t.dist[inc.to];
      if (!cur) {
        cur = std::move(cand);
        t.count[inc.to] = t.count[x];
        t.pred[inc.to] = inc.edge;
        continue;
      }
      auto cmp = order(cand, *cur, bits);
      if (cmp < 0) {
        cur = std::move(cand);
        t.count[inc.to] = t.count[x];
        t.pred[inc.to] = inc.edge;
      } else if (cmp == 0) {
        t.count[inc.to] = static_cast<std::uint8_t>(std::min(2, t.count[inc.to] + t.count[x]));
      }
    }
  }
  return t;
}

// Walks predecessor edges back from `target`; returns edges in source-to-target order.
std::vector<EdgeId> trace(const MetricGraph& g, const std::vector<EdgeId>& pred, VertexId source,
                          VertexId target) {
  std::vector<EdgeId> out;
  VertexId cur = target;
  while (cur != source) {
    EdgeId e = pred[cur];
    out.push_back(e);
    cur = g.edge(e).other(cur);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

DistanceTable::DistanceTable(const MetricGraph& g, unsigned bits)
    : graph_(&g),
      n_(g.vertex_count()),
      dist_(n_ * n_),
      count_(n_ * n_, 0),
      pred_(n_ * n_, 0) {
  for (std::size_t u = 0; u < n_; ++u) {
    SourceTree t = dijkstra(g, static_cast<VertexId>(u), std::nullopt, bits);
    for (std::size_t v = 0; v < n_; ++v) {
      dist_[u * n_ + v] = *t.dist[v];
      count_[u * n_ + v] = t.count[v];
      pred_[u * n_ + v] = t.pred[v];
    }
  }
}

std::vector<EdgeId> DistanceTable::path(VertexId u, VertexId v) const {
  std::vector<EdgeId> pred(pred_.begin() + static_cast<std::ptrdiff_t>(u * n_),
                           pred_.begin() + static_cast<std::ptrdiff_t>((u + 1) * n_));
  return trace(*graph_, pred, u, v);
}

ShortestPath shortest_path(const MetricGraph& g, VertexId u, VertexId v, unsigned bits) {
  if (u >= g.vertex_count() || v >= g.vertex_count())
    throw Error(ErrorKind::UnknownName, "vertex id out of range");
  SourceTree t = dijkstra(g, u, std::nullopt, bits);
  return {*t.dist[v], trace(g, t.pred, u, v), t.count[v] == 1};
}

Girth girth(const MetricGraph& g, unsigned bits) {
  std::optional<Girth> best;
  auto offer = [&](Scalar length, Cycle witness) {
    if (!best || order(length, best->length, bits) < 0) {
      witness.length = length;
      best = Girth{std::move(length), std::move(witness)};
    }
  };
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edge(static_cast<EdgeId>(i));
    const auto id = static_cast<EdgeId>(i);
    if (e.is_loop()) {
      offer(e.length, Cycle{{e.u}, {id}, e.length});
      continue;
    }
    SourceTree t = dijkstra(g, e.v, id, bits);
    if (!t.dist[e.u]) continue;
    // Cycle: e from u to v, then the detour from v back to u.
    std::vector<EdgeId> back = trace(g, t.pred, e.v, e.u);
    Cycle c;
    c.vertices.push_back(e.u);
    c.edges.push_back(id);
    VertexId cur = e.v;
    for (EdgeId b : back) {
      c.vertices.push_back(cur);
      c.edges.push_back(b);
      cur = g.edge(b).other(cur);
    }
    offer(e.length + *t.dist[e.u], std::move(c));
  }
  if (!best) throw Error(ErrorKind::NoCycle, "the graph is a forest");
  return std::move(*best);
}

// ------------------------------------------------------------------ points

PointOnGraph PointOnGraph::normalized(const MetricGraph& g) const {
  if (!reversed) return *this;
  return PointOnGraph{edge, false, g.edge(edge).length - offset};
}

std::optional<VertexId> PointOnGraph::vertex(const MetricGraph& g) const {
  PointOnGraph p = normalized(g);
  const Edge& e = g.edge(p.edge);
  if (p.offset.is_zero()) return e.u;
  if (p.offset == e.length) return e.v;
  return std::nullopt;
}

std::string describe(const MetricGraph& g, const PointOnGraph& p) {
  if (auto v = p.vertex(g)) return "vertex " + g.vertex_name(*v);
  PointOnGraph q = p.normalized(g);
  return "edge " + g.edge(q.edge).name + " at " + to_string(q.offset) + " from " +
         g.vertex_name(g.edge(q.edge).u);
}

namespace {

// c + m*s
struct Affine {
  Scalar c;
  Rational m;
  Scalar at(const Scalar& s) const { return c + s * m; }
};

Scalar envelope_at(const std::vector<Affine>& fs, const Scalar& s, unsigned bits) {
  Scalar best = fs.front().at(s);
  for (std::size_t k = 1; k < fs.size(); ++k) {
    Scalar v = fs[k].at(s);
    if (order(v, best, bits) < 0) best = std::move(v);
  }
  return best;
}

// Maximises the concave function min_k fs[k](s) over s in [0, len].  The
// maximum sits at an end of the interval or where a nonnegative-slope piece
// crosses a nonpositive-slope piece.
std::pair<Scalar, Scalar> maximize_envelope(std::vector<Affine> fs, const Scalar& len,
                                            unsigned bits) {
  std::vector<Affine> uniq;
  for (auto& f : fs)
    if (std::none_of(uniq.begin(), uniq.end(),
                     [&](const Affine& u) { return u.m == f.m && u.c == f.c; }))
      uniq.push_back(std::move(f));

  std::vector<Scalar> candidates{Scalar(0), len};
  for (std::size_t i = 0; i < uniq.size(); ++i)
    for (std::size_t j = 0; j < uniq.size(); ++j) {
      if (uniq[i].m <= uniq[j].m || uniq[i].m < 0 || uniq[j].m > 0) continue;
      Scalar s = (uniq[j].c - uniq[i].c) / Rational(uniq[i].m - uniq[j].m);
      if (order(s, Scalar(0), bits) <= 0 || order(s, len, bits) >= 0) continue;
      candidates.push_back(std::move(s));
    }

  std::optional<std::pair<Scalar, Scalar>> best;
  for (auto& s : candidates) {
    Scalar v = envelope_at(uniq, s, bits);
    if (!best || order(v, best->second, bits) > 0) best = std::make_pair(std::move(s), std::move(v));
  }
  return std::move(*best);
}

}  // namespace

DiameterResult point_diameter(const MetricGraph& g, const Subgraph& s, const DistanceTable& d,
                              unsigned bits) {
  std::optional<DiameterResult> best;
  auto offer = [&](Scalar value, PointOnGraph x, PointOnGraph y) {
    if (!best || order(value, best->max_distance, bits) > 0)
      best = DiameterResult{std::move(value), std::move(x), std::move(y)};
  };

  const auto& edges = s.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const EdgeId ei = edges[i];
    const Edge& e = g.edge(ei);
    const Scalar& a = e.length;

    // Same edge: a loop wraps around; otherwise the far route leaves through
    // both ends and closes up through the rest of the graph.
    if (e.is_loop()) {
      offer(a / 2, {ei, false, Scalar(0)}, {ei, false, a / 2});
    } else {
      Scalar half = (d.distance(e.u, e.v) + a) / 2;
      offer(half, {ei, false, Scalar(0)}, {ei, false, half});
    }

    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const EdgeId fi = edges[j];
      const Edge& f = g.edge(fi);
      const Scalar& b = f.length;
      // Distance from x (offset s on e) to the ends of f: g_k(s) = min(p_k, q_k).
      const VertexId fe[2] = {f.u, f.v};
      Affine p[2], q[2];
      for (int k = 0; k < 2; ++k) {
        p[k] = {d.distance(e.u, fe[k]), 1};
        q[k] = {d.distance(e.v, fe[k]) + a, -1};
      }
      // max over t of min(g_0 + t, g_1 + b - t) = min((g_0+g_1+b)/2, g_0+b, g_1+b)
      std::vector<Affine> fs;
      for (const Affine& x0 : {p[0], q[0]})
        for (const Affine& x1 : {p[1], q[1]})
          fs.push_back({(x0.c + x1.c + b) / 2, (x0.m + x1.m) / 2});
      for (int k = 0; k < 2; ++k) {
        fs.push_back({p[k].c + b, p[k].m});
        fs.push_back({q[k].c + b, q[k].m});
      }
      auto [sx, value] = maximize_envelope(std::move(fs), a, bits);
      Scalar g0 = min(p[0].at(sx), q[0].at(sx), bits);
      Scalar g1 = min(p[1].at(sx), q[1].at(sx), bits);
      Scalar t = (g1 - g0 + b) / 2;
      if (order(t, Scalar(0), bits) < 0) t = Scalar(0);
      if (order(t, b, bits) > 0) t = b;
      offer(std::move(value), {ei, false, std::move(sx)}, {fi, false, std::move(t)});
    }
  }
  if (!best) throw Error(ErrorKind::InvalidArgument, "point diameter of an empty subgraph");
  return std::move(*best);
}

std::optional<DiameterViolation> point_diameter_check(const MetricGraph& g, const Subgraph& s,
                                                      const Scalar& bound, const DistanceTable& d,
                                                      unsigned bits) {
  if (order(bound, Scalar(0), bits) <= 0)
    throw Error(ErrorKind::InvalidArgument, "diameter bound must be positive");
  DiameterResult r = point_diameter(g, s, d, bits);
  if (order(r.max_distance, bound, bits) <= 0) return std::nullopt;
  return DiameterViolation{std::move(r.x), std::move(r.y), std::move(r.max_distance)};
}

// ------------------------------------------------------------- enumeration

namespace {

Scalar total_length(const MetricGraph& g, const std::vector<EdgeId>& edges) {
  Scalar sum;
  for (EdgeId e : edges) sum += g.edge(e).length;
  return sum;
}

void check_cap(std::size_t count, std::size_t cap, const char* what) {
  if (count > cap)
    throw Error(ErrorKind::EnumerationCapExceeded,
                std::string("more than ") + std::to_string(cap) + " " + what);
}

}  // namespace

std::vector<Cycle> cycles_of(const MetricGraph& g, const Subgraph& s, std::size_t cap) {
  std::vector<Cycle> out;
  const std::size_t n = g.vertex_count();

  for (EdgeId e : s.edges())
    if (g.edge(e).is_loop()) {
      out.push_back(Cycle{{g.edge(e).u}, {e}, g.edge(e).length});
      check_cap(out.size(), cap, "cycles");
    }

  std::vector<bool> on_path(n, false);
  std::vector<VertexId> vpath;
  std::vector<EdgeId> epath;

  // Every cycle is rooted at its least vertex and found once per direction;
  // keep the direction whose first edge id is smaller.
  std::function<void(VertexId, VertexId)> extend = [&](VertexId root, VertexId x) {
    for (const auto& inc : g.incidences(x)) {
      if (!s.contains_edge(inc.edge) || inc.to == x) continue;
      if (!epath.empty() && inc.edge == epath.back()) continue;
      if (inc.to == root) {
        if (epath.empty() || epath.front() >= inc.edge) continue;
        Cycle c{vpath, epath, Scalar()};
        c.edges.push_back(inc.edge);
        c.length = total_length(g, c.edges);
        out.push_back(std::move(c));
        check_cap(out.size(), cap, "cycles");
        continue;
      }
      if (inc.to < root || on_path[inc.to]) continue;
      on_path[inc.to] = true;
      vpath.push_back(inc.to);
      epath.push_back(inc.edge);
      extend(root, inc.to);
      vpath.pop_back();
      epath.pop_back();
      on_path[inc.to] = false;
    }
  };

  for (VertexId root : s.vertices()) {
    on_path.assign(n, false);
    on_path[root] = true;
    vpath = {root};
    epath.clear();
    extend(root, root);
  }
  return out;
}

std::vector<Path> segments_of(const MetricGraph& g, const Subgraph& s) {
  const auto verts = s.vertices();
  for (VertexId v : verts)
    if (s.degree(v) < 2)
      throw Error(ErrorKind::HypothesisViolation,
                  "vertex '" + g.vertex_name(v) + "' has degree " + std::to_string(s.degree(v)));

  std::vector<Path> out;
  for (VertexId start : verts) {
    if (s.degree(start) < 3) continue;
    for (const auto& first : g.incidences(start)) {
      if (!s.contains_edge(first.edge) || first.to == start) continue;
      Path p{{start, first.to}, {first.edge}, Scalar()};
      VertexId cur = first.to;
      while (s.degree(cur) == 2 && cur != start) {
        const Incidence* next = nullptr;
        for (const auto& inc : g.incidences(cur))
          if (s.contains_edge(inc.edge) && inc.edge != p.edges.back()) next = &inc;
        if (next == nullptr || next->to == cur) break;
        p.edges.push_back(next->edge);
        p.vertices.push_back(next->to);
        cur = next->to;
      }
      // Closed walks back to the start are cycles, not segments.
      if (cur == start || s.degree(cur) < 3) continue;
      // Found from both ends; keep the copy starting at the smaller endpoint,
      // breaking ties between parallel copies by the first edge.
      if (start > cur) continue;
      if (start == cur) continue;
      p.length = total_length(g, p.edges);
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<Bar> bars_of(const MetricGraph& g, const Subgraph& s, const std::vector<Cycle>& cycles,
                         std::size_t cap) {
  std::vector<Bar> out;
  const std::size_t n = g.vertex_count();
  std::vector<char> in_first(n), in_second(n), on_path(n);
  Path path;

  std::function<void(std::size_t, std::size_t, VertexId)> extend = [&](std::size_t c1,
                                                                       std::size_t c2, VertexId x) {
    for (const auto& inc : g.incidences(x)) {
      if (!s.contains_edge(inc.edge) || inc.to == x) continue;
      const VertexId y = inc.to;
      if (in_first[y] || on_path[y]) continue;
      if (in_second[y]) {
        Bar bar{path, c1, c2};
        bar.path.vertices.push_back(y);
        bar.path.edges.push_back(inc.edge);
        bar.path.length = total_length(g, bar.path.edges);
        out.push_back(std::move(bar));
        check_cap(out.size(), cap, "bars");
        continue;
      }
      on_path[y] = 1;
      path.vertices.push_back(y);
      path.edges.push_back(inc.edge);
      extend(c1, c2, y);
      path.vertices.pop_back();
      path.edges.pop_back();
      on_path[y] = 0;
    }
  };

  for (std::size_t i = 0; i < cycles.size(); ++i)
    for (std::size_t j = i + 1; j < cycles.size(); ++j) {
      if (!vertex_disjoint(cycles[i], cycles[j])) continue;
      std::fill(in_first.begin(), in_first.end(), 0);
      std::fill(in_second.begin(), in_second.end(), 0);
      for (VertexId v : cycles[i].vertices) in_first[v] = 1;
      for (VertexId v : cycles[j].vertices) in_second[v] = 1;
      for (VertexId u : cycles[i].vertices) {
        std::fill(on_path.begin(), on_path.end(), 0);
        path = Path{{u}, {}, Scalar()};
        extend(i, j, u);
      }
    }
  return out;
}

}  // namespace commensura
