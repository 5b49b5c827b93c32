#include "commensura/generate.hpp"

#include <array>
#include <memory>

#include "commensura/error.hpp"

namespace commensura {

namespace {

SymbolTablePtr fresh_table() { return std::make_shared<const SymbolTable>(); }

std::string name(char prefix, std::size_t i) { return prefix + std::to_string(i); }

// GF(p^k) with elements encoded as base-p digit strings of polynomials.
class Field {
 public:
  explicit Field(unsigned q) : q_(q) {
    if (q < 2) throw Error(ErrorKind::InvalidArgument, "field order must be at least 2");
    unsigned p = 2;
    while (q % p != 0) ++p;
    unsigned k = 0;
    for (unsigned r = q; r > 1; r /= p) {
      if (r % p != 0) throw Error(ErrorKind::InvalidArgument, std::to_string(q) + " is not a prime power");
      ++k;
    }
    p_ = p;
    k_ = k;
    modulus_ = irreducible();
  }

  unsigned order() const { return q_; }

  unsigned add(unsigned a, unsigned b) const {
    auto x = digits(a), y = digits(b);
    for (unsigned i = 0; i < k_; ++i) x[i] = (x[i] + y[i]) % p_;
    return encode(x);
  }

  unsigned mul(unsigned a, unsigned b) const {
    auto x = digits(a), y = digits(b);
    std::vector<unsigned> prod(2 * k_, 0);
    for (unsigned i = 0; i < k_; ++i)
      for (unsigned j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p_;
    reduce(prod, modulus_);
    prod.resize(k_);
    return encode(prod);
  }

 private:
  std::vector<unsigned> digits(unsigned a) const {
    std::vector<unsigned> d(k_);
    for (unsigned i = 0; i < k_; ++i, a /= p_) d[i] = a % p_;
    return d;
  }
  unsigned encode(const std::vector<unsigned>& d) const {
    unsigned a = 0;
    for (unsigned i = k_; i-- > 0;) a = a * p_ + d[i];
    return a;
  }

  // Remainder of `a` modulo the monic polynomial `m` (coefficients low first).
  void reduce(std::vector<unsigned>& a, const std::vector<unsigned>& m) const {
    const std::size_t deg = m.size() - 1;
    for (std::size_t i = a.size(); i-- > deg;) {
      unsigned c = a[i];
      if (c == 0) continue;
      for (std::size_t j = 0; j <= deg; ++j) a[i - deg + j] = (a[i - deg + j] + p_ * p_ - c * m[j] % p_) % p_;
    }
  }

  std::vector<unsigned> monic(unsigned deg, unsigned code) const {
    std::vector<unsigned> m(deg + 1, 0);
    for (unsigned i = 0; i < deg; ++i, code /= p_) m[i] = code % p_;
    m[deg] = 1;
    return m;
  }

  // Least monic irreducible polynomial of degree k, by trial division.
  std::vector<unsigned> irreducible() const {
    unsigned count = 1;
    for (unsigned i = 0; i < k_; ++i) count *= p_;
    for (unsigned code = 0; code < count; ++code) {
      auto f = monic(k_, code);
      bool ok = true;
      for (unsigned d = 1; 2 * d <= k_ && ok; ++d) {
        unsigned cd = 1;
        for (unsigned i = 0; i < d; ++i) cd *= p_;
        for (unsigned c = 0; c < cd && ok; ++c) {
          auto r = f;
          reduce(r, monic(d, c));
          bool zero = true;
          for (unsigned i = 0; i < d; ++i) zero = zero && r[i] == 0;
          ok = !zero;
        }
      }
      if (ok) return f;
    }
    throw Error(ErrorKind::InternalInconsistency, "no irreducible polynomial found");
  }

  unsigned q_;
  unsigned p_ = 0;
  unsigned k_ = 0;
  std::vector<unsigned> modulus_;
};

// Normalised projective points: first nonzero coordinate equal to 1.
std::vector<std::array<unsigned, 3>> projective_points(unsigned q) {
  std::vector<std::array<unsigned, 3>> out;
  for (unsigned a = 0; a < q; ++a)
    for (unsigned b = 0; b < q; ++b) out.push_back({1, a, b});
  for (unsigned a = 0; a < q; ++a) out.push_back({0, 1, a});
  out.push_back({0, 0, 1});
  return out;
}

}  // namespace

MetricGraph circle_graph(const Scalar& length, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "a circle needs at least one vertex");
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  const Scalar len = length / Rational(static_cast<unsigned long>(n));
  for (std::size_t i = 0; i < n; ++i) vertices.push_back(name('v', i));
  for (std::size_t i = 0; i < n; ++i)
    edges.push_back({name('e', i), static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % n), len});
  return MetricGraph(length.table() ? length.table() : fresh_table(), vertices, edges);
}

MetricGraph theta_graph(const Scalar& length) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < 3; ++i) edges.push_back({name('e', i), 0, 1, length});
  return MetricGraph(length.table() ? length.table() : fresh_table(), {"v0", "v1"}, edges);
}

MetricGraph dumbbell_graph(const Scalar& loop, const Scalar& bar) {
  std::vector<Edge> edges{{"e0", 0, 0, loop}, {"e1", 0, 1, bar}, {"e2", 1, 1, loop}};
  SymbolTablePtr t = loop.table() ? loop.table() : bar.table();
  return MetricGraph(t ? t : fresh_table(), {"v0", "v1"}, edges);
}

MetricGraph incidence_graph(unsigned q) {
  const Field f(q);
  const auto pts = projective_points(q);
  const std::size_t n = pts.size();
  std::vector<std::string> vertices;
  for (std::size_t i = 0; i < n; ++i) vertices.push_back(name('p', i));
  for (std::size_t i = 0; i < n; ++i) vertices.push_back(name('l', i));
  std::vector<Edge> edges;
  const Scalar len = Scalar::pi() / 3;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      unsigned dot = 0;
      for (int c = 0; c < 3; ++c) dot = f.add(dot, f.mul(pts[i][c], pts[j][c]));
      if (dot == 0)
        edges.push_back({name('e', edges.size()), static_cast<VertexId>(i),
                         static_cast<VertexId>(n + j), len});
    }
  return MetricGraph(fresh_table(), vertices, edges);
}

MetricGraph heawood_graph() { return incidence_graph(2); }

MetricGraph perturb(const MetricGraph& base, std::string_view edge, const Scalar& delta) {
  auto id = base.find_edge(edge);
  if (!id) throw Error(ErrorKind::UnknownName, "no edge '" + std::string(edge) + "'");
  std::vector<Edge> edges = base.edges();
  edges[*id].length += delta;
  return MetricGraph(base.symbols(), base.vertex_names(), edges);
}

MetricGraph generate(const std::vector<std::string>& args) {
  if (args.empty()) throw Error(ErrorKind::InvalidArgument, "missing generator name");
  const std::string& kind = args[0];
  const SymbolTablePtr table = fresh_table();
  auto scalar = [&](const std::string& s) { return parse_scalar(s, table); };
  auto count = [&](const std::string& s) -> unsigned long {
    Rational v = parse_rational(s);
    if (v.get_den() != 1 || v <= 0 || !v.get_num().fits_ulong_p())
      throw Error(ErrorKind::InvalidArgument, "expected a positive integer, got '" + s + "'");
    return v.get_num().get_ui();
  };
  auto expect = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo + 1 || args.size() > hi + 1)
      throw Error(ErrorKind::InvalidArgument, "wrong number of parameters for '" + kind + "'");
  };
  if (kind == "circle") {
    expect(2, 2);
    return circle_graph(scalar(args[1]), count(args[2]));
  }
  if (kind == "theta") {
    expect(0, 1);
    return theta_graph(args.size() > 1 ? scalar(args[1]) : Scalar::pi());
  }
  if (kind == "dumbbell") {
    expect(2, 2);
    return dumbbell_graph(scalar(args[1]), scalar(args[2]));
  }
  if (kind == "heawood") {
    expect(0, 0);
    return heawood_graph();
  }
  if (kind == "pg") {
    expect(1, 1);
    unsigned long q = count(args[1]);
    if (q > 64) throw Error(ErrorKind::InvalidArgument, "pg supports q up to 64");
    return incidence_graph(static_cast<unsigned>(q));
  }
  if (kind == "perturb") {
    if (args.size() < 4) throw Error(ErrorKind::InvalidArgument, "perturb <base...> <edge> <delta>");
    std::vector<std::string> base(args.begin() + 1, args.end() - 2);
    MetricGraph g = generate(base);
    return perturb(g, args[args.size() - 2], parse_scalar(args.back(), g.symbols()));
  }
  throw Error(ErrorKind::InvalidArgument, "unknown generator '" + kind + "'");
}

}  // namespace commensura
