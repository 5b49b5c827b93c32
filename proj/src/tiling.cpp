#include "commensura/tiling.hpp"

#include <algorithm>
#include <cstdint>

#include "commensura/error.hpp"

namespace commensura {

std::string_view to_string(Piece::Kind k) {
  switch (k) {
    case Piece::Kind::ChordSquare: return "ChordSquare";
    case Piece::Kind::SplicedRectangle: return "SplicedRectangle";
    case Piece::Kind::TorusSquare: return "TorusSquare";
  }
  return "Unknown";
}

std::string_view to_string(TilingRegion::Kind k) {
  switch (k) {
    case TilingRegion::Kind::Annulus: return "Annulus";
    case TilingRegion::Kind::Product: return "Product";
    case TilingRegion::Kind::Torus: return "Torus";
  }
  return "Unknown";
}

std::string_view to_string(TilingVerdict::Kind k) {
  switch (k) {
    case TilingVerdict::Kind::Ok: return "Ok";
    case TilingVerdict::Kind::Overlap: return "Overlap";
    case TilingVerdict::Kind::Gap: return "Gap";
    case TilingVerdict::Kind::AreaMismatch: return "AreaMismatch";
    case TilingVerdict::Kind::Protrusion: return "Protrusion";
  }
  return "Unknown";
}

std::string describe(const TilingVerdict& v) {
  std::string out(to_string(v.kind));
  switch (v.kind) {
    case TilingVerdict::Kind::Ok:
      return out;
    case TilingVerdict::Kind::Overlap:
      out += " of pieces " + std::to_string(v.first) + " and " + std::to_string(v.second);
      break;
    case TilingVerdict::Kind::Protrusion:
      out += " of piece " + std::to_string(v.first);
      break;
    case TilingVerdict::Kind::AreaMismatch:
      return out + ": pieces " + to_string(v.piece_area) + ", region " + to_string(v.region_area);
    case TilingVerdict::Kind::Gap:
      break;
  }
  if (v.witness) out += " at (" + to_string(v.witness->first) + ", " + to_string(v.witness->second) + ")";
  return out;
}

Area TilingRegion::area(unsigned bits) const {
  if (kind == Kind::Annulus) {
    Scalar width = l1 - Scalar::pi() * 2;
    if (order(width, Scalar(0), bits) <= 0) return Area();
    return l1 * width;
  }
  return l1 * l2;
}

Scalar reduce_mod(const Scalar& x, const Scalar& p, unsigned bits) {
  if (order(p, Scalar(0), bits) <= 0) throw Error(ErrorKind::InvalidArgument, "non-positive period");
  Interval ix = enclosure(x, 64), ip = enclosure(p, 64);
  Rational mid_x = (ix.lo + ix.hi) / 2, mid_p = (ip.lo + ip.hi) / 2;
  Rational guess = mid_x / mid_p;
  mpz_class k;
  mpz_fdiv_q(k.get_mpz_t(), guess.get_num_mpz_t(), guess.get_den_mpz_t());
  Scalar r = x - p * Rational(k);
  while (order(r, Scalar(0), bits) < 0) r += p;
  while (order(r, p, bits) >= 0) r -= p;
  return r;
}

GeometricTiling annulus_tiling(const ImmersedLoop& loop, const std::vector<Chord>& chords,
                               const SplicedRegion& spliced) {
  GeometricTiling t{{TilingRegion::Kind::Annulus, loop.length(), loop.length()}, {}};
  for (std::size_t i = 0; i < chords.size(); ++i) {
    const Chord& c = chords[i];
    t.pieces.push_back({Piece::Kind::ChordSquare, c.s, c.t, c.z, c.z, c.area, i});
  }
  for (const auto& r : spliced.rectangles)
    t.pieces.push_back({Piece::Kind::SplicedRectangle, r.center_x, r.center_y, r.half_u, r.half_w,
                        r.half_u * r.half_w * Rational(2), std::nullopt});
  return t;
}

std::vector<std::pair<VertexId, Scalar>> cycle_positions(const MetricGraph& g, const Cycle& c) {
  ImmersedLoop loop = ImmersedLoop::from_cycle(g, c);
  std::vector<std::pair<VertexId, Scalar>> out;
  for (std::size_t i = 0; i < loop.size(); ++i) out.emplace_back(loop.vertex(i), loop.position(i));
  return out;
}

GeometricTiling product_tiling(const MetricGraph& g, const Cycle& c1, const Cycle& c2,
                               const std::vector<SubgraphChord>& chords) {
  if (!vertex_disjoint(c1, c2))
    throw Error(ErrorKind::InvalidArgument, "product tiling needs two disjoint cycles");
  auto p1 = cycle_positions(g, c1);
  auto p2 = cycle_positions(g, c2);
  auto find = [](const auto& ps, VertexId v) -> const Scalar* {
    for (const auto& [w, pos] : ps)
      if (w == v) return &pos;
    return nullptr;
  };
  GeometricTiling t{{TilingRegion::Kind::Product, c1.length, c2.length}, {}};
  for (std::size_t i = 0; i < chords.size(); ++i) {
    const Scalar* s = find(p1, chords[i].source);
    const Scalar* u = find(p2, chords[i].target);
    if (!s || !u) continue;
    t.pieces.push_back({Piece::Kind::ChordSquare, *s, *u, chords[i].z, chords[i].z, chords[i].area, i});
  }
  return t;
}

Cover common_cover(const Scalar& l1, const Scalar& l2) {
  auto rho = l1.is_zero() ? std::nullopt : commensurable(l1, l2);
  if (!rho || *rho <= 0)
    throw Error(ErrorKind::InternalInconsistency,
                "cycle lengths " + to_string(l1) + " and " + to_string(l2) + " are incommensurable");
  return Cover{rho->get_num().get_ui(), rho->get_den().get_ui(), l1 * Rational(rho->get_num())};
}

GeometricTiling psi_transform(const GeometricTiling& product) {
  if (product.region.kind != TilingRegion::Kind::Product)
    throw Error(ErrorKind::InvalidArgument, "psi transform applies to product tilings");
  const Cover cover = common_cover(product.region.l1, product.region.l2);
  const Scalar& L = cover.length;
  GeometricTiling out{{TilingRegion::Kind::Torus, L, L}, {}};
  for (const auto& piece : product.pieces)
    for (unsigned long a = 0; a < cover.n1; ++a)
      for (unsigned long b = 0; b < cover.n2; ++b) {
        Scalar p = piece.center_x + product.region.l1 * Rational(a);
        Scalar q = piece.center_y + product.region.l2 * Rational(b);
        Scalar x = (p + q) / 2, y = (p - q) / 2;
        Scalar h = piece.half_u / 2;
        Area area = h * h * Rational(4);
        out.pieces.push_back({Piece::Kind::TorusSquare, x, y, h, h, area, piece.source});
        out.pieces.push_back(
            {Piece::Kind::TorusSquare, x + L / 2, y + L / 2, h, h, area, piece.source});
      }
  return out;
}

namespace {

// Fundamental domain [0, period) x [0, height) of the plane modulo the
// lattice generated by (period, 0) and (shift, height).  The region is the
// strip lo <= w <= hi.
struct Frame {
  Scalar period;
  Scalar height;
  Scalar shift;
  Scalar lo;
  Scalar hi;
  bool rotated;
  Scalar cover;  // side of the square torus the centres are reduced on
  Scalar base_x;  // circles the witnesses are reported on
  Scalar base_y;
  std::vector<Piece> pieces;  // lifted to the cover for product regions
};

Frame make_frame(const GeometricTiling& t) {
  const Scalar pi = Scalar::pi();
  const auto& r = t.region;
  switch (r.kind) {
    case TilingRegion::Kind::Annulus:
      return {r.l1 * 2, r.l1, r.l1, pi, r.l1 - pi, true, r.l1, r.l1, r.l1, t.pieces};
    case TilingRegion::Kind::Product: {
      Cover c = common_cover(r.l1, r.l2);
      std::vector<Piece> lifted;
      for (const auto& p : t.pieces)
        for (unsigned long a = 0; a < c.n1; ++a)
          for (unsigned long b = 0; b < c.n2; ++b) {
            Piece q = p;
            q.center_x += r.l1 * Rational(a);
            q.center_y += r.l2 * Rational(b);
            lifted.push_back(std::move(q));
          }
      return {c.length * 2, c.length, c.length, Scalar(0), c.length, true, c.length, r.l1, r.l2,
              std::move(lifted)};
    }
    case TilingRegion::Kind::Torus:
      return {r.l1, r.l1, Scalar(0), Scalar(0), r.l1, false, r.l1, r.l1, r.l1, t.pieces};
  }
  throw Error(ErrorKind::InvalidArgument, "unknown region");
}

struct Portion {
  std::size_t piece;  // index into the original piece list
  Scalar u0, u1, w0, w1;
};

struct Layout {
  Frame frame;
  std::vector<Portion> portions;
  std::optional<TilingVerdict> failure;  // protrusion or a piece overlapping itself
};

std::pair<Scalar, Scalar> to_xy(const Frame& f, const Scalar& u, const Scalar& w, unsigned bits) {
  if (!f.rotated) return {u, w};
  return {reduce_mod((u - w) / 2, f.base_x, bits), reduce_mod((u + w) / 2, f.base_y, bits)};
}

Layout build_layout(const GeometricTiling& t, unsigned bits) {
  Layout out{make_frame(t), {}, std::nullopt};
  const Frame& f = out.frame;
  const std::size_t copies = t.pieces.empty() ? 1 : f.pieces.size() / t.pieces.size();

  auto fail = [&](TilingVerdict::Kind kind, std::size_t i, const Scalar& u, const Scalar& w) {
    TilingVerdict v;
    v.kind = kind;
    v.first = v.second = i;
    v.witness = to_xy(f, u, w, bits);
    out.failure = std::move(v);
  };

  for (std::size_t k = 0; k < f.pieces.size() && !out.failure; ++k) {
    const Piece& p = f.pieces[k];
    const std::size_t i = k / copies;
    Scalar uc, wc;
    if (f.rotated) {
      Scalar x = reduce_mod(p.center_x, f.cover, bits);
      Scalar y = reduce_mod(p.center_y, f.cover, bits);
      if (order(y, x, bits) < 0) y += f.cover;
      uc = reduce_mod(x + y, f.period, bits);
      wc = y - x;
    } else {
      uc = reduce_mod(p.center_x, f.period, bits);
      wc = reduce_mod(p.center_y, f.height, bits);
    }
    if (order(p.half_w * 2, f.height, bits) > 0 || order(p.half_u * 2, f.period, bits) > 0) {
      fail(TilingVerdict::Kind::Overlap, i, uc, wc);
      break;
    }

    // Split along w at 0 and height, then along u at 0 and period.
    std::vector<std::array<Scalar, 3>> wparts;  // w0, w1, u shift
    Scalar w0 = wc - p.half_w, w1 = wc + p.half_w;
    if (order(w0, Scalar(0), bits) < 0) {
      wparts.push_back({w0 + f.height, f.height, f.shift});
      wparts.push_back({Scalar(0), w1, Scalar(0)});
    } else if (order(w1, f.height, bits) > 0) {
      wparts.push_back({w0, f.height, Scalar(0)});
      wparts.push_back({Scalar(0), w1 - f.height, -f.shift});
    } else {
      wparts.push_back({w0, w1, Scalar(0)});
    }
    for (auto& [a, b, shift] : wparts) {
      if (order(a, f.lo, bits) < 0) {
        fail(TilingVerdict::Kind::Protrusion, i, uc + shift, (a + min(b, f.lo, bits)) / 2);
        break;
      }
      if (order(b, f.hi, bits) > 0) {
        fail(TilingVerdict::Kind::Protrusion, i, uc + shift, (max(a, f.hi, bits) + b) / 2);
        break;
      }
      if (a == b) continue;
      Scalar u0 = reduce_mod(uc - p.half_u + shift, f.period, bits);
      Scalar u1 = u0 + p.half_u * 2;
      if (order(u1, f.period, bits) > 0) {
        out.portions.push_back({i, u0, f.period, a, b});
        out.portions.push_back({i, Scalar(0), u1 - f.period, a, b});
      } else {
        out.portions.push_back({i, u0, u1, a, b});
      }
    }
  }
  return out;
}

struct Grid {
  std::vector<Scalar> us;
  std::vector<Scalar> ws;
  // Rank ranges of each portion: [u_lo, u_hi) x [w_lo, w_hi)
  std::vector<std::array<std::size_t, 4>> ranks;
};

std::vector<Scalar> sorted_unique(std::vector<Scalar> v, unsigned bits) {
  std::sort(v.begin(), v.end(), [bits](const Scalar& a, const Scalar& b) { return order(a, b, bits) < 0; });
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::size_t rank_of(const std::vector<Scalar>& sorted, const Scalar& x, unsigned bits) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x,
                             [bits](const Scalar& a, const Scalar& b) { return order(a, b, bits) < 0; });
  return static_cast<std::size_t>(it - sorted.begin());
}

Grid build_grid(const Layout& layout, unsigned bits) {
  const Frame& f = layout.frame;
  std::vector<Scalar> us{Scalar(0), f.period}, ws{f.lo, f.hi};
  for (const auto& p : layout.portions) {
    us.push_back(p.u0);
    us.push_back(p.u1);
    ws.push_back(p.w0);
    ws.push_back(p.w1);
  }
  Grid g{sorted_unique(std::move(us), bits), sorted_unique(std::move(ws), bits), {}};
  for (const auto& p : layout.portions)
    g.ranks.push_back({rank_of(g.us, p.u0, bits), rank_of(g.us, p.u1, bits),
                       rank_of(g.ws, p.w0, bits), rank_of(g.ws, p.w1, bits)});
  return g;
}

}  // namespace

TilingVerdict verify_tiling(const GeometricTiling& t, unsigned bits) {
  TilingVerdict verdict;
  for (const auto& p : t.pieces) verdict.piece_area += p.area;
  verdict.region_area = t.region.area(bits);

  Layout layout = build_layout(t, bits);
  if (layout.failure) {
    layout.failure->piece_area = verdict.piece_area;
    layout.failure->region_area = verdict.region_area;
    return *layout.failure;
  }
  const Frame& f = layout.frame;

  // An inverted or empty strip has no cells; any piece already protruded.
  if (order(f.lo, f.hi, bits) < 0) {
    Grid g = build_grid(layout, bits);
    const std::size_t nu = g.us.size() - 1, nw = g.ws.size() - 1;
    constexpr std::uint32_t kNone = UINT32_MAX;
    std::vector<std::uint32_t> count(nu * nw, 0), first(nu * nw, kNone), second(nu * nw, kNone);
    for (std::size_t k = 0; k < layout.portions.size(); ++k) {
      const auto& [ua, ub, wa, wb] = g.ranks[k];
      const auto piece = static_cast<std::uint32_t>(layout.portions[k].piece);
      for (std::size_t wi = wa; wi < wb; ++wi)
        for (std::size_t ui = ua; ui < ub; ++ui) {
          std::size_t cell = wi * nu + ui;
          if (count[cell]++ == 0)
            first[cell] = piece;
          else if (second[cell] == kNone)
            second[cell] = piece;
        }
    }
    for (std::size_t wi = 0; wi < nw; ++wi) {
      // Cells below lo or above hi cannot occur; ws starts at lo and ends at hi.
      for (std::size_t ui = 0; ui < nu; ++ui) {
        std::size_t cell = wi * nu + ui;
        if (count[cell] == 1) continue;
        Scalar u = (g.us[ui] + g.us[ui + 1]) / 2;
        Scalar w = (g.ws[wi] + g.ws[wi + 1]) / 2;
        verdict.witness = to_xy(f, u, w, bits);
        if (count[cell] == 0) {
          verdict.kind = TilingVerdict::Kind::Gap;
        } else {
          verdict.kind = TilingVerdict::Kind::Overlap;
          verdict.first = first[cell];
          verdict.second = second[cell];
        }
        return verdict;
      }
    }
  }
  if (!(verdict.piece_area == verdict.region_area)) verdict.kind = TilingVerdict::Kind::AreaMismatch;
  return verdict;
}

MeasureTiling to_measure_tiling(const GeometricTiling& t, unsigned bits) {
  if (t.region.kind == TilingRegion::Kind::Product)
    throw Error(ErrorKind::Unsupported, "a product tiling becomes a measure tiling after psi");
  Layout layout = build_layout(t, bits);
  if (layout.failure)
    throw Error(ErrorKind::InvalidTiling,
                std::string(to_string(layout.failure->kind)) + " of piece " +
                    std::to_string(layout.failure->first));
  const Rational scale = t.region.kind == TilingRegion::Kind::Annulus ? Rational(1, 2) : Rational(1);
  MeasureTiling m;
  m.x.name = "X";
  m.y.name = "Y";
  if (!(order(layout.frame.lo, layout.frame.hi, bits) < 0)) {
    m.pieces.resize(t.pieces.size());
    return m;
  }
  Grid g = build_grid(layout, bits);
  for (std::size_t k = 0; k + 1 < g.us.size(); ++k) {
    m.x.atoms.push_back("x" + std::to_string(k));
    m.x.measures.push_back((g.us[k + 1] - g.us[k]) * scale);
  }
  for (std::size_t k = 0; k + 1 < g.ws.size(); ++k) {
    m.y.atoms.push_back("y" + std::to_string(k));
    m.y.measures.push_back((g.ws[k + 1] - g.ws[k]) * scale);
  }
  m.pieces.resize(t.pieces.size());
  for (std::size_t k = 0; k < layout.portions.size(); ++k) {
    auto& piece = m.pieces[layout.portions[k].piece];
    const auto& [ua, ub, wa, wb] = g.ranks[k];
    for (std::size_t i = ua; i < ub; ++i) piece.a.push_back(i);
    for (std::size_t i = wa; i < wb; ++i) piece.b.push_back(i);
  }
  for (auto& p : m.pieces) {
    for (auto* v : {&p.a, &p.b}) {
      std::sort(v->begin(), v->end());
      v->erase(std::unique(v->begin(), v->end()), v->end());
    }
  }
  return m;
}

}  // namespace commensura
