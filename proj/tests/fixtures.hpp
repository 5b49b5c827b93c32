#pragma once

// Shared fixtures and brute-force oracles for the test suites.

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "commensura/engine.hpp"
#include "commensura/generate.hpp"
#include "commensura/graph_io.hpp"

namespace commensura {
// Readable gtest failure messages.
inline void PrintTo(const Scalar& s, std::ostream* os) { *os << to_string(s); }
inline void PrintTo(const Area& a, std::ostream* os) { *os << to_string(a); }
}  // namespace commensura

namespace fixtures {

using namespace commensura;

inline Scalar pi_times(long num, long den = 1) { return Scalar::pi() * Rational(num, den); }

inline std::vector<Cycle> cycles_of_length(const MetricGraph& g, std::size_t edges) {
  std::vector<Cycle> out;
  for (auto& c : cycles_of(g, Subgraph::whole(g)))
    if (c.edges.size() == edges) out.push_back(std::move(c));
  return out;
}

/// First 8-edge cycle of the Heawood graph in enumeration order.
inline Cycle heawood_octagon(const MetricGraph& g) { return cycles_of_length(g, 8).front(); }

struct BarFixture {
  Cycle c1;
  Cycle c2;
  EdgeId connector;
  Subgraph sub;
};

/// Two disjoint hexagons of the Heawood graph and an edge joining them.
inline BarFixture heawood_bar(const MetricGraph& g) {
  auto hex = cycles_of_length(g, 6);
  for (std::size_t i = 0; i < hex.size(); ++i)
    for (std::size_t j = i + 1; j < hex.size(); ++j) {
      if (!vertex_disjoint(hex[i], hex[j])) continue;
      for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        if (hex[i].contains_vertex(ed.u) && hex[j].contains_vertex(ed.v)) {
          std::vector<EdgeId> edges = hex[i].edges;
          edges.insert(edges.end(), hex[j].edges.begin(), hex[j].edges.end());
          edges.push_back(e);
          return BarFixture{hex[i], hex[j], e, Subgraph(g, edges, "bar")};
        }
      }
    }
  throw std::runtime_error("no bar fixture");
}

// --------------------------------------------------------------- oracles

/// Cycle lengths (in edges) of every edge subset that forms a cycle.
inline std::map<std::size_t, std::size_t> brute_force_cycle_counts(const MetricGraph& g) {
  const std::size_t m = g.edge_count();
  std::map<std::size_t, std::size_t> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<int> deg(g.vertex_count(), 0);
    std::size_t count = 0;
    for (std::size_t e = 0; e < m; ++e)
      if (mask >> e & 1) {
        deg[g.edge(e).u]++;
        deg[g.edge(e).v]++;
        ++count;
      }
    if (std::any_of(deg.begin(), deg.end(), [](int d) { return d != 0 && d != 2; })) continue;
    // connected: flood over the chosen edges
    std::vector<bool> seen(g.vertex_count(), false);
    VertexId start = 0;
    while (deg[start] == 0) ++start;
    std::vector<VertexId> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (std::size_t e = 0; e < m; ++e)
        if (mask >> e & 1) {
          const Edge& ed = g.edge(e);
          if (ed.u != v && ed.v != v) continue;
          VertexId w = ed.other(v);
          if (!seen[w]) {
            seen[w] = true;
            stack.push_back(w);
          }
        }
    }
    bool connected = true;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) connected = connected && (deg[v] == 0 || seen[v]);
    if (connected) out[count]++;
  }
  return out;
}

/// Shortest length and the number of shortest simple paths, by exhaustive DFS.
inline std::pair<Scalar, std::size_t> brute_force_distance(const MetricGraph& g, VertexId u, VertexId v) {
  std::optional<Scalar> best;
  std::size_t count = 0;
  std::vector<bool> on(g.vertex_count(), false);
  std::function<void(VertexId, const Scalar&)> dfs = [&](VertexId x, const Scalar& len) {
    if (best && order(len, *best) > 0) return;
    if (x == v) {
      if (!best || order(len, *best) < 0) {
        best = len;
        count = 1;
      } else {
        ++count;
      }
      return;
    }
    on[x] = true;
    for (const auto& inc : g.incidences(x))
      if (!on[inc.to] && inc.to != x) dfs(inc.to, len + g.edge(inc.edge).length);
    on[x] = false;
  };
  if (u == v) return {Scalar(0), 1};
  dfs(u, Scalar(0));
  return {*best, count};
}

/// Floyd-Warshall vertex distances.
inline std::vector<std::vector<std::optional<Scalar>>> floyd(const MetricGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::optional<Scalar>>> d(n, std::vector<std::optional<Scalar>>(n));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = Scalar(0);
  for (const auto& e : g.edges()) {
    if (e.is_loop()) continue;
    if (!d[e.u][e.v] || order(e.length, *d[e.u][e.v]) < 0) d[e.u][e.v] = d[e.v][e.u] = e.length;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] && d[k][j]) {
          Scalar via = *d[i][k] + *d[k][j];
          if (!d[i][j] || order(via, *d[i][j]) < 0) d[i][j] = via;
        }
  return d;
}

using DistanceMatrix = std::vector<std::vector<std::optional<Scalar>>>;

/// Distance between points at offsets (from the u end) on edges a and b.
inline Scalar point_distance(const MetricGraph& g, const DistanceMatrix& d, EdgeId ea,
                             const Scalar& xa, EdgeId eb, const Scalar& yb) {
  const Edge& a = g.edge(ea);
  const Edge& b = g.edge(eb);
  const Scalar xb = a.length - xa, yd = b.length - yb;
  std::vector<Scalar> routes{xa + *d[a.u][b.u] + yb, xa + *d[a.u][b.v] + yd,
                             xb + *d[a.v][b.u] + yb, xb + *d[a.v][b.v] + yd};
  if (ea == eb) {
    Scalar direct = order(xa, yb) > 0 ? xa - yb : yb - xa;
    routes.push_back(direct);
    if (a.is_loop()) routes.push_back(a.length - direct);
  }
  Scalar best = routes[0];
  for (const auto& r : routes)
    if (order(r, best) < 0) best = r;
  return best;
}

inline Scalar offset_from_u(const MetricGraph& g, const PointOnGraph& p) {
  return p.reversed ? g.edge(p.edge).length - p.offset : p.offset;
}

/// Largest distance between sample points k/n along the edges of s.
inline Scalar sampled_diameter(const MetricGraph& g, const Subgraph& s, int n) {
  const auto d = floyd(g);
  std::vector<std::pair<EdgeId, Scalar>> pts;
  for (EdgeId e : s.edges())
    for (int k = 0; k <= n; ++k) pts.emplace_back(e, g.edge(e).length * Rational(k, n));
  Scalar best(0);
  for (const auto& [ea, x] : pts)
    for (const auto& [eb, y] : pts) {
      Scalar v = point_distance(g, d, ea, x, eb, y);
      if (order(v, best) > 0) best = v;
    }
  return best;
}

/// Connected random multigraph: a random spanning tree plus extra edges
/// (parallel edges and loops allowed), lengths a + b PI with a, b >= 0.
template <typename Rng>
MetricGraph random_graph(Rng& rng, std::size_t n, std::size_t extra) {
  std::uniform_int_distribution<int> num(0, 12), den(1, 6);
  auto length = [&] {
    for (;;) {
      Scalar s = Scalar(Rational(num(rng), den(rng))) + Scalar::pi() * Rational(num(rng) / 4, den(rng));
      if (!s.is_zero()) return s;
    }
  };
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    edges.push_back({"e" + std::to_string(edges.size()), static_cast<VertexId>(pick(rng)),
                     static_cast<VertexId>(i), length()});
  }
  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  for (std::size_t k = 0; k < extra; ++k)
    edges.push_back({"e" + std::to_string(edges.size()), static_cast<VertexId>(any(rng)),
                     static_cast<VertexId>(any(rng)), length()});
  return MetricGraph(std::make_shared<const SymbolTable>(), names, edges);
}

// -------------------------------------------------------------- tilings

struct Square {
  int size, x, y;
};

/// Moron's 33 x 32 rectangle dissected into nine squares.
inline const std::vector<Square>& moron_layout() {
  static const std::vector<Square> layout{{18, 0, 0}, {15, 18, 0}, {7, 18, 15},
                                          {8, 25, 15}, {14, 0, 18}, {4, 14, 18},
                                          {10, 14, 22}, {1, 24, 22}, {9, 24, 23}};
  return layout;
}

/// Cell owner counts of an integer-coordinate layout on a W x H grid.
inline std::vector<int> cover_counts(const std::vector<Square>& sq, int w, int h) {
  std::vector<int> grid(w * h, 0);
  for (const auto& s : sq)
    for (int x = s.x; x < s.x + s.size; ++x)
      for (int y = s.y; y < s.y + s.size; ++y)
        if (x >= 0 && x < w && y >= 0 && y < h) grid[y * w + x]++;
        else grid[0] += 100;  // outside the rectangle
  return grid;
}

/// Measure tiling whose atoms are the elementary intervals between the
/// distinct piece boundaries of an axis-aligned integer layout.
struct Rect {
  int x0, y0, x1, y1;
};

inline MeasureTiling measure_tiling_of(const std::vector<Rect>& rects, int w, int h,
                                       const Rational& scale = 1) {
  std::vector<int> xs{0, w}, ys{0, h};
  for (const auto& r : rects) {
    xs.push_back(r.x0);
    xs.push_back(r.x1);
    ys.push_back(r.y0);
    ys.push_back(r.y1);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  MeasureTiling t;
  t.x.name = "X";
  t.y.name = "Y";
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    t.x.atoms.push_back("x" + std::to_string(i));
    t.x.measures.push_back(Scalar(Rational(xs[i + 1] - xs[i]) * scale));
  }
  for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
    t.y.atoms.push_back("y" + std::to_string(i));
    t.y.measures.push_back(Scalar(Rational(ys[i + 1] - ys[i]) * scale));
  }
  for (const auto& r : rects) {
    MeasurePiece p;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      if (xs[i] >= r.x0 && xs[i + 1] <= r.x1) p.a.push_back(i);
    for (std::size_t i = 0; i + 1 < ys.size(); ++i)
      if (ys[i] >= r.y0 && ys[i + 1] <= r.y1) p.b.push_back(i);
    t.pieces.push_back(std::move(p));
  }
  return t;
}

inline MeasureTiling moron_tiling() {
  std::vector<Rect> rects;
  for (const auto& s : moron_layout()) rects.push_back({s.x, s.y, s.x + s.size, s.y + s.size});
  return measure_tiling_of(rects, 33, 32);
}

/// Random guillotine dissection of an nx x ny atom grid.  Atom measures
/// are random positive a + b PI; every piece is a product of index ranges.
template <typename Rng>
MeasureTiling random_guillotine(Rng& rng, std::size_t nx, std::size_t ny) {
  std::uniform_int_distribution<int> num(0, 9), den(1, 7);
  auto measure = [&] {
    for (;;) {
      Scalar s = Scalar(Rational(num(rng), den(rng))) + Scalar::pi() * Rational(num(rng), den(rng));
      if (!s.is_zero()) return s;
    }
  };
  MeasureTiling t;
  t.x.name = "X";
  t.y.name = "Y";
  for (std::size_t i = 0; i < nx; ++i) {
    t.x.atoms.push_back("x" + std::to_string(i));
    t.x.measures.push_back(measure());
  }
  for (std::size_t i = 0; i < ny; ++i) {
    t.y.atoms.push_back("y" + std::to_string(i));
    t.y.measures.push_back(measure());
  }
  std::function<void(std::size_t, std::size_t, std::size_t, std::size_t)> cut =
      [&](std::size_t x0, std::size_t x1, std::size_t y0, std::size_t y1) {
        std::uniform_int_distribution<int> coin(0, 3);
        const bool can_x = x1 - x0 > 1, can_y = y1 - y0 > 1;
        if ((!can_x && !can_y) || coin(rng) == 0) {
          MeasurePiece p;
          for (std::size_t i = x0; i < x1; ++i) p.a.push_back(i);
          for (std::size_t i = y0; i < y1; ++i) p.b.push_back(i);
          t.pieces.push_back(std::move(p));
          return;
        }
        if (can_x && (!can_y || coin(rng) % 2 == 0)) {
          std::uniform_int_distribution<std::size_t> at(x0 + 1, x1 - 1);
          std::size_t m = at(rng);
          cut(x0, m, y0, y1);
          cut(m, x1, y0, y1);
        } else {
          std::uniform_int_distribution<std::size_t> at(y0 + 1, y1 - 1);
          std::size_t m = at(rng);
          cut(x0, x1, y0, m);
          cut(x0, x1, m, y1);
        }
      };
  cut(0, nx, 0, ny);
  std::shuffle(t.pieces.begin(), t.pieces.end(), rng);
  return t;
}

template <typename Rng>
LinearFunctional random_functional(Rng& rng) {
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  LinearFunctional f;
  for (SymbolId id : {kUnitSymbol, kPiSymbol}) {
    Rational v(num(rng), den(rng));
    v.canonicalize();
    if (v != 0) f.values.emplace_back(id, v);
  }
  return f;
}

inline MeasureTiling make_tiling(const std::vector<Scalar>& xs, const std::vector<Scalar>& ys,
                                 const std::vector<MeasurePiece>& pieces) {
  MeasureTiling t;
  t.x.name = "X";
  t.y.name = "Y";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    t.x.atoms.push_back("x" + std::to_string(i));
    t.x.measures.push_back(xs[i]);
  }
  for (std::size_t i = 0; i < ys.size(); ++i) {
    t.y.atoms.push_back("y" + std::to_string(i));
    t.y.measures.push_back(ys[i]);
  }
  t.pieces = pieces;
  return t;
}

/// (q, r, a) = (1/2, 1, 6): a 7 x 5/2 rectangle cut into two 1 x 3/2
/// rectangles, two 5/2 squares and two unit squares.  Piece 2 is a 5/2
/// square, so designating it gives 25/4 > (a - 4) r^2 = 2.
inline MeasureTiling lemma_conforming() {
  const Scalar one(1), big(Rational(5, 2));
  return make_tiling({one, one, big, big}, {Scalar(Rational(3, 2)), one},
                     {{{0}, {0}}, {{1}, {0}}, {{2}, {0, 1}}, {{3}, {0, 1}}, {{0}, {1}}, {{1}, {1}}});
}

/// (q, r, a) = (PI, 1, 6) candidate: the same layout with q = PI, Y split
/// as PI + 1 + 1, plus a designated 2 x 2 square (piece 6) that meets every
/// clause of the audit but overlaps the first rectangle.
inline MeasureTiling lemma_candidate_pi() {
  const Scalar one(1), pi = Scalar::pi();
  return make_tiling({one, one, pi + 2, pi + 2}, {pi, one, one},
                     {{{0}, {0, 1}},
                      {{1}, {0, 1}},
                      {{2}, {0, 1, 2}},
                      {{3}, {0, 1, 2}},
                      {{0}, {2}},
                      {{1}, {2}},
                      {{0, 1}, {1, 2}}});
}

/// (q, r, a) = (1/2, 1, 4): valid tiling with no designated squares, so the
/// strict inequality 0 > 0 fails.
inline MeasureTiling lemma_boundary() {
  const Scalar one(1), half3(Rational(3, 2));
  return make_tiling({one, one, half3, half3}, {half3},
                     {{{0}, {0}}, {{1}, {0}}, {{2}, {0}}, {{3}, {0}}});
}

// Random candidate with mu X = 1 and mu Y = PI: X cut into rational atoms,
// Y into rational multiples of PI, and arbitrary pieces.
template <typename Rng>
MeasureTiling unit_by_pi_candidate(Rng& rng) {
  std::uniform_int_distribution<int> parts(1, 4), weight(1, 5), coin(0, 1);
  auto split = [&](const Scalar& total) {
    int n = parts(rng);
    std::vector<int> w(n);
    int sum = 0;
    for (auto& v : w) sum += (v = weight(rng));
    std::vector<Scalar> out;
    for (int v : w) out.push_back(total * Rational(v, sum));
    return out;
  };
  std::vector<Scalar> xs = split(Scalar(1)), ys = split(Scalar::pi());
  std::uniform_int_distribution<int> count(1, 5);
  std::vector<MeasurePiece> pieces(count(rng));
  for (auto& p : pieces) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (coin(rng)) p.a.push_back(i);
    for (std::size_t i = 0; i < ys.size(); ++i)
      if (coin(rng)) p.b.push_back(i);
  }
  return make_tiling(xs, ys, pieces);
}

/// Whether the reported axiom failure really holds, checked cell by cell.
inline bool failure_is_real(const MeasureTiling& t, const AxiomFailure& f) {
  auto covers = [&](std::size_t i, std::size_t x, std::size_t y) {
    const auto& p = t.pieces[i];
    return std::find(p.a.begin(), p.a.end(), x) != p.a.end() &&
           std::find(p.b.begin(), p.b.end(), y) != p.b.end();
  };
  switch (f.kind) {
    case AxiomFailure::Kind::Uncovered:
      for (std::size_t i = 0; i < t.pieces.size(); ++i)
        if (covers(i, f.x, f.y)) return false;
      return true;
    case AxiomFailure::Kind::DoublyCovered:
      return f.first != f.second && covers(f.first, f.x, f.y) && covers(f.second, f.x, f.y);
    case AxiomFailure::Kind::NotSquare:
      return !(t.side_a(f.first) == t.side_b(f.first));
  }
  return false;
}

// Graph sources used by several suites.
inline const char* kThetaSource =
    "# three parallel edges\n"
    "vertex a\nvertex b\n"
    "edge e1 a b PI\nedge e2 a b PI\nedge e3 a b PI\n"
    "subgraph P e1\n";

// A vertex u with a loop, two parallel edges u-v (P and Q), and a pendant
// edge v-w ending in a loop at w.
inline const char* kPseudoleafSource =
    "vertex u\nvertex v\nvertex w\n"
    "edge lu u u 2*PI\n"
    "edge P u v PI\n"
    "edge Q u v PI\n"
    "edge wv w v 1/2*PI\n"
    "edge lw w w 2*PI\n"
    "subgraph seg P\n";

}  // namespace fixtures
