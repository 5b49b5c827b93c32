#include "commensura/engine.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

#include "commensura/error.hpp"

namespace commensura {

std::string_view to_string(AnalysisReport::Verdict v) {
  switch (v) {
    case AnalysisReport::Verdict::Conformant: return "Conformant";
    case AnalysisReport::Verdict::HypothesisViolation: return "HypothesisViolation";
    case AnalysisReport::Verdict::InternalInconsistency: return "InternalInconsistency";
  }
  return "Unknown";
}

HypothesisAudit check_hypotheses(const MetricGraph& g, const Subgraph& s, const DistanceTable& d,
                                 const AnalysisOptions& opts) {
  const unsigned bits = opts.precision_bits;
  const Scalar pi = Scalar::pi();
  HypothesisAudit audit;
  try {
    audit.girth = girth(g, bits);
    audit.girth_ok = order(audit.girth->length, pi * 2, bits) >= 0;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoCycle) throw;
  }
  if (!s.edges().empty()) {
    audit.diameter = point_diameter(g, s, d, bits);
    audit.diameter_ok = order(audit.diameter->max_distance, pi, bits) <= 0;
  }
  for (VertexId v : s.vertices())
    if (s.degree(v) <= 1) audit.low_degree.push_back(v);
  return audit;
}

namespace {

struct Context {
  const MetricGraph& g;
  const Subgraph& s;
  const DistanceTable& d;
  const AnalysisOptions& opts;
  std::optional<HypothesisAudit> audit;

  unsigned bits() const { return opts.precision_bits; }

  Inconsistency inconsistency(std::string reason) {
    if (!audit) audit = check_hypotheses(g, s, d, opts);
    return Inconsistency{std::move(reason), *audit};
  }
};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

bool internal(const Error& e) { return e.kind() == ErrorKind::InternalInconsistency; }

CycleRecord cycle_record(Context& ctx, const Cycle& c) {
  const unsigned bits = ctx.bits();
  const Scalar pi = Scalar::pi();
  CycleRecord r;
  r.cycle = c;
  r.ratio = commensurable_with_pi(c.length);
  r.bound = pi * (c.length - pi * 2) * Rational(2);
  r.packing_bound = c.length / 2 - pi;

  std::vector<std::string> problems;
  if (!r.ratio) problems.push_back("length " + to_string(c.length) + " is incommensurable with PI");

  const ImmersedLoop loop = ImmersedLoop::from_cycle(ctx.g, c);
  try {
    r.chords = chords_of_loop(ctx.g, loop, ctx.d, bits);
  } catch (const Error& e) {
    if (!internal(e)) throw;
    problems.push_back(e.what());
    r.inconsistency = ctx.inconsistency(join(problems));
    return r;
  }
  for (std::size_t k = 0; k < r.chords.size(); ++k) {
    r.chord_ratios.push_back(commensurable_with_pi(r.chords[k].length));
    if (!r.chord_ratios.back())
      problems.push_back("chord " + std::to_string(k) + " has length " +
                         to_string(r.chords[k].length) + ", incommensurable with PI");
  }

  const GeometricTiling t = annulus_tiling(loop, r.chords, spliced_region(loop));
  try {
    r.tiling = verify_tiling(t, bits);
    if (!r.tiling->ok())
      problems.push_back("annulus tiling: " + describe(*r.tiling));
    else if (!r.tiling->region_area.is_zero())
      r.dehn = dehn_test(to_measure_tiling(t, bits), bits);
    if (r.dehn && r.dehn->certificate) problems.push_back("Dehn: " + r.dehn->certificate->summary);
  } catch (const Error& e) {
    if (!internal(e)) throw;
    problems.push_back(e.what());
  }

  for (std::size_t p = 0; p < loop.size(); ++p) {
    PositionBound b{p, Area(), false};
    for (const auto& ch : r.chords)
      if (ch.source != p && ch.target != p) b.sum += ch.area;
    b.ok = order(b.sum, r.bound, bits) >= 0;
    if (!b.ok)
      problems.push_back("chords avoiding position " + std::to_string(p) + " have area " +
                         to_string(b.sum) + " < " + to_string(r.bound));
    r.area_bounds.push_back(std::move(b));

    StartPacking pk{p, Scalar(), false};
    for (const auto& ch : r.chords)
      if (ch.source == p) pk.sum += ch.z;
    pk.ok = order(pk.sum, r.packing_bound, bits) <= 0;
    if (!pk.ok)
      problems.push_back("chords starting at position " + std::to_string(p) + " have total z " +
                         to_string(pk.sum) + " > " + to_string(r.packing_bound));
    r.packing.push_back(std::move(pk));
  }
  if (!problems.empty()) r.inconsistency = ctx.inconsistency(join(problems));
  return r;
}

PairRecord pair_record(Context& ctx, const Cycle& c1, const Cycle& c2) {
  if (!vertex_disjoint(c1, c2))
    throw Error(ErrorKind::InvalidArgument, "cycle pair analysis needs two disjoint cycles");
  const unsigned bits = ctx.bits();
  PairRecord r;
  std::vector<EdgeId> edges = c1.edges;
  edges.insert(edges.end(), c2.edges.begin(), c2.edges.end());
  const Subgraph lambda(ctx.g, edges);

  std::vector<std::string> problems;
  try {
    for (auto& ch : chords_of_subgraph(ctx.g, lambda, ctx.d, bits))
      if (c1.contains_vertex(ch.source) && c2.contains_vertex(ch.target))
        r.chords.push_back(std::move(ch));
    for (std::size_t k = 0; k < r.chords.size(); ++k) {
      r.chord_ratios.push_back(commensurable_with_pi(r.chords[k].length));
      if (!r.chord_ratios.back())
        problems.push_back("cross chord " + std::to_string(k) + " has length " +
                           to_string(r.chords[k].length) + ", incommensurable with PI");
    }
    if (commensurable(c1.length, c2.length)) r.cover = common_cover(c1.length, c2.length);
    const GeometricTiling product = product_tiling(ctx.g, c1, c2, r.chords);
    r.tiling = verify_tiling(product, bits);
    if (!r.tiling->ok()) {
      problems.push_back("product tiling: " + describe(*r.tiling));
    } else if (!r.cover) {
      problems.push_back("cycle lengths " + to_string(c1.length) + " and " + to_string(c2.length) +
                         " are incommensurable");
    } else {
      const GeometricTiling torus = psi_transform(product);
      r.torus = verify_tiling(torus, bits);
      if (!r.torus->ok()) {
        problems.push_back("torus tiling: " + describe(*r.torus));
      } else {
        r.dehn = dehn_test(to_measure_tiling(torus, bits), bits);
        if (r.dehn->certificate) problems.push_back("Dehn: " + r.dehn->certificate->summary);
      }
    }
  } catch (const Error& e) {
    if (!internal(e)) throw;
    problems.push_back(e.what());
  }
  if (!problems.empty()) r.inconsistency = ctx.inconsistency(join(problems));
  return r;
}

BarRecord bar_record(Context& ctx, const Bar& bar, const Cycle& c1, const Cycle& c2) {
  const unsigned bits = ctx.bits();
  const Scalar pi = Scalar::pi();
  const BarLoop bl = make_bar_loop(ctx.g, bar, c1, c2);
  BarRecord r;
  r.bar = bar;
  r.params = bl.params;
  r.q = bl.params.b;
  r.r = pi;
  r.a = commensurable_with_pi(c1.length + c2.length);
  r.ratio = commensurable_with_pi(bl.params.b);

  std::vector<std::string> problems;
  if (!r.a) problems.push_back("l1 + l2 is incommensurable with PI");
  if (!r.ratio) problems.push_back("bar length " + to_string(bl.params.b) + " is incommensurable with PI");
  try {
    r.chords = chords_of_loop(ctx.g, bl.loop, ctx.d, bits);
  } catch (const Error& e) {
    if (!internal(e)) throw;
    problems.push_back(e.what());
    r.inconsistency = ctx.inconsistency(join(problems));
    return r;
  }

  auto certified = [&](VertexId v) {
    return v != bl.u && v != bl.v && (c1.contains_vertex(v) || c2.contains_vertex(v));
  };
  for (std::size_t k = 0; k < r.chords.size(); ++k) {
    const Chord& ch = r.chords[k];
    if (certified(ch.source_vertex) && certified(ch.target_vertex) && commensurable_with_pi(ch.length)) {
      r.designated.push_back(k);
      r.designated_sum += ch.z * ch.z;
    }
  }
  if (r.a) {
    r.bound = pi * pi * (*r.a - 4);
    if (order(r.designated_sum, r.bound, bits) <= 0)
      problems.push_back("designated chords give " + to_string(r.designated_sum) +
                         ", not above (a-4) PI^2 = " + to_string(r.bound) + "; deficit " +
                         to_string(r.bound - r.designated_sum));
  }

  try {
    const SplicedRegion spliced = spliced_region(bl.loop, bl.params);
    const GeometricTiling t = annulus_tiling(bl.loop, r.chords, spliced);
    r.tiling = verify_tiling(t, bits);
    if (!r.tiling->ok()) {
      problems.push_back("bar loop tiling: " + describe(*r.tiling));
    } else if (r.a) {
      // Rectangles first, then the designated squares, then the rest.
      GeometricTiling ordered{t.region, {}};
      const std::size_t nc = r.chords.size();
      for (std::size_t k = nc; k < t.pieces.size(); ++k) ordered.pieces.push_back(t.pieces[k]);
      std::vector<bool> chosen(nc, false);
      for (std::size_t k : r.designated) {
        ordered.pieces.push_back(t.pieces[k]);
        chosen[k] = true;
      }
      for (std::size_t k = 0; k < nc; ++k)
        if (!chosen[k]) ordered.pieces.push_back(t.pieces[k]);
      std::vector<std::size_t> designated;
      for (std::size_t k = 0; k < r.designated.size(); ++k) designated.push_back(2 + k);
      r.lemma = dehn_plus_test(to_measure_tiling(ordered, bits), r.q, r.r, *r.a, designated, bits);
      if (!r.lemma->audit_passed())
        problems.push_back("lemma clauses failed: " + join(r.lemma->failed_clauses));
      else if (r.lemma->certificate)
        problems.push_back("lemma: " + r.lemma->certificate->summary);
    }
  } catch (const Error& e) {
    if (!internal(e)) throw;
    problems.push_back(e.what());
  }
  if (!problems.empty()) r.inconsistency = ctx.inconsistency(join(problems));
  return r;
}

// ---------------------------------------------------------------- segments

using Column = std::vector<long>;  // edge multiplicities over the row index

struct System {
  std::vector<Column> columns;
  Column target;
  std::size_t rows = 0;
};

System build_system(const Path& segment, const std::vector<Cycle>& cycles,
                    const std::vector<Path>& bar_paths) {
  std::map<EdgeId, std::size_t> row;
  auto index = [&](const std::vector<EdgeId>& edges) {
    for (EdgeId e : edges) row.emplace(e, 0);
  };
  index(segment.edges);
  for (const auto& c : cycles) index(c.edges);
  for (const auto& b : bar_paths) index(b.edges);
  std::size_t k = 0;
  for (auto& [e, i] : row) i = k++;

  System sys;
  sys.rows = row.size();
  auto vec = [&](const std::vector<EdgeId>& edges) {
    Column v(sys.rows, 0);
    for (EdgeId e : edges) ++v[row[e]];
    return v;
  };
  sys.target = vec(segment.edges);
  for (const auto& c : cycles) sys.columns.push_back(vec(c.edges));
  for (const auto& b : bar_paths) sys.columns.push_back(vec(b.edges));
  return sys;
}

// Gaussian elimination over the chosen columns.  Returns the unique
// solution when the columns are independent and the system is consistent.
std::optional<std::vector<Rational>> solve_exact(const System& sys,
                                                 const std::vector<std::size_t>& cols) {
  const std::size_t n = cols.size();
  std::vector<std::vector<Rational>> m;
  for (std::size_t i = 0; i < sys.rows; ++i) {
    bool used = sys.target[i] != 0;
    for (std::size_t c : cols) used = used || sys.columns[c][i] != 0;
    if (!used) continue;
    std::vector<Rational> rowv(n + 1);
    for (std::size_t j = 0; j < n; ++j) rowv[j] = sys.columns[cols[j]][i];
    rowv[n] = sys.target[i];
    m.push_back(std::move(rowv));
  }
  std::size_t rank = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t p = rank;
    while (p < m.size() && m[p][j] == 0) ++p;
    if (p == m.size()) return std::nullopt;  // dependent columns
    std::swap(m[p], m[rank]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == rank || m[i][j] == 0) continue;
      Rational f = m[i][j] / m[rank][j];
      for (std::size_t k = j; k <= n; ++k) m[i][k] -= f * m[rank][k];
    }
    ++rank;
  }
  for (std::size_t i = rank; i < m.size(); ++i)
    if (m[i][n] != 0) return std::nullopt;
  std::vector<Rational> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = m[j][n] / m[j][j];
    if (x[j] == 0) return std::nullopt;
  }
  return x;
}

// Basic solution of the full system with pivots chosen left to right.
std::optional<std::vector<std::pair<std::size_t, Rational>>> basic_solution(const System& sys) {
  const std::size_t n = sys.columns.size();
  std::vector<std::vector<Rational>> m(sys.rows, std::vector<Rational>(n + 1));
  for (std::size_t i = 0; i < sys.rows; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = sys.columns[j][i];
    m[i][n] = sys.target[i];
  }
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t j = 0; j < n && rank < m.size(); ++j) {
    std::size_t p = rank;
    while (p < m.size() && m[p][j] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    Rational inv = 1 / m[rank][j];
    for (std::size_t k = j; k <= n; ++k) m[rank][k] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == rank || m[i][j] == 0) continue;
      Rational f = m[i][j];
      for (std::size_t k = j; k <= n; ++k) m[i][k] -= f * m[rank][k];
    }
    pivots.push_back(j);
    ++rank;
  }
  for (std::size_t i = rank; i < m.size(); ++i)
    if (m[i][n] != 0) return std::nullopt;
  std::vector<std::pair<std::size_t, Rational>> out;
  for (std::size_t i = 0; i < pivots.size(); ++i)
    if (m[i][n] != 0) out.emplace_back(pivots[i], m[i][n]);
  return out;
}

constexpr std::size_t kSupportSearchBudget = 200'000;

}  // namespace

std::vector<Path> distinct_bar_paths(const std::vector<Bar>& bars) {
  std::vector<Path> out;
  std::vector<std::vector<EdgeId>> seen;
  for (const auto& b : bars) {
    std::vector<EdgeId> key = b.path.edges;
    std::sort(key.begin(), key.end());
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(std::move(key));
    out.push_back(b.path);
  }
  return out;
}

Decomposition decompose_segment(const Path& segment,
                                const std::vector<Cycle>& cycles,
                                const std::vector<Path>& bar_paths) {
  const System sys = build_system(segment, cycles, bar_paths);
  const std::size_t n = sys.columns.size();

  // Supports as bitsets; a candidate support must cover the segment's edges.
  const std::size_t words = (sys.rows + 63) / 64;
  auto bits_of = [&](const Column& c) {
    std::vector<std::uint64_t> b(words, 0);
    for (std::size_t i = 0; i < sys.rows; ++i)
      if (c[i] != 0) b[i / 64] |= std::uint64_t{1} << (i % 64);
    return b;
  };
  const auto need = bits_of(sys.target);
  std::vector<std::vector<std::uint64_t>> supp;
  for (const auto& c : sys.columns) supp.push_back(bits_of(c));

  Decomposition out;
  std::vector<std::pair<std::size_t, Rational>> found;
  std::size_t spent = 0;
  bool done = false;
  for (std::size_t k = 1; k <= std::min(n, sys.rows) && !done; ++k) {
    // C(n, k), saturating at the budget
    double combos = 1;
    for (std::size_t i = 0; i < k; ++i) combos = combos * double(n - i) / double(i + 1);
    if (double(spent) + combos > double(kSupportSearchBudget)) break;
    spent += static_cast<std::size_t>(combos);

    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      bool covers = true;
      for (std::size_t w = 0; w < words && covers; ++w) {
        std::uint64_t u = 0;
        for (std::size_t c : idx) u |= supp[c][w];
        covers = (need[w] & ~u) == 0;
      }
      if (covers) {
        if (auto x = solve_exact(sys, idx)) {
          for (std::size_t i = 0; i < k; ++i) found.emplace_back(idx[i], (*x)[i]);
          done = true;
          out.exhaustive = true;
          break;
        }
      }
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!done && k == std::min(n, sys.rows)) out.exhaustive = true;
  }
  if (!done) {
    auto basic = basic_solution(sys);
    if (!basic || basic->empty())
      throw Error(ErrorKind::InternalInconsistency,
                  "segment of length " + to_string(segment.length) +
                      " is not a rational combination of cycles and bars");
    found = std::move(*basic);
    out.exhaustive = false;
  }

  std::vector<Rational> sum(sys.rows);
  for (const auto& [c, q] : found)
    for (std::size_t i = 0; i < sys.rows; ++i) sum[i] += q * sys.columns[c][i];
  for (std::size_t i = 0; i < sys.rows; ++i)
    if (sum[i] != sys.target[i])
      throw Error(ErrorKind::InternalInconsistency, "segment decomposition does not re-expand");

  for (const auto& [c, q] : found) {
    if (c < cycles.size())
      out.terms.push_back({DecompositionTerm::Kind::Cycle, c, q});
    else
      out.terms.push_back({DecompositionTerm::Kind::Bar, c - cycles.size(), q});
  }
  return out;
}

CycleRecord analyze_cycle(const MetricGraph& g, const Subgraph& s, const Cycle& c,
                          const DistanceTable& d, const AnalysisOptions& opts) {
  Context ctx{g, s, d, opts, std::nullopt};
  return cycle_record(ctx, c);
}

PairRecord analyze_cycle_pair(const MetricGraph& g, const Subgraph& s, const Cycle& c1,
                              const Cycle& c2, const DistanceTable& d,
                              const AnalysisOptions& opts) {
  Context ctx{g, s, d, opts, std::nullopt};
  return pair_record(ctx, c1, c2);
}

BarRecord analyze_bar(const MetricGraph& g, const Subgraph& s, const Bar& bar, const Cycle& c1,
                      const Cycle& c2, const DistanceTable& d, const AnalysisOptions& opts) {
  Context ctx{g, s, d, opts, std::nullopt};
  return bar_record(ctx, bar, c1, c2);
}

AnalysisReport analyze(const MetricGraph& g, const Subgraph& s, const AnalysisOptions& opts) {
  const DistanceTable d(g, opts.precision_bits);
  AnalysisReport rep;
  rep.subgraph = s.name();
  rep.audit = check_hypotheses(g, s, d, opts);
  const std::vector<Cycle> cycles = cycles_of(g, s, opts.cycle_cap);

  if (!rep.audit.passed()) {
    rep.verdict = AnalysisReport::Verdict::HypothesisViolation;
    for (std::size_t i = 0; i < cycles.size(); ++i) {
      CycleRecord r;
      r.cycle = cycles[i];
      r.ratio = commensurable_with_pi(cycles[i].length);
      if (!r.ratio) rep.incommensurable_cycles.push_back(i);
      rep.cycles.push_back(std::move(r));
    }
    return rep;
  }

  Context ctx{g, s, d, opts, rep.audit};
  bool inconsistent = false;
  for (const auto& c : cycles) {
    rep.cycles.push_back(cycle_record(ctx, c));
    inconsistent = inconsistent || rep.cycles.back().inconsistency.has_value();
  }
  for (std::size_t i = 0; i < cycles.size(); ++i)
    for (std::size_t j = i + 1; j < cycles.size(); ++j) {
      if (!vertex_disjoint(cycles[i], cycles[j])) continue;
      ++rep.disjoint_pairs;
      if (rep.pairs.size() >= opts.cycle_cap) continue;
      PairRecord r = pair_record(ctx, cycles[i], cycles[j]);
      r.first = i;
      r.second = j;
      inconsistent = inconsistent || r.inconsistency.has_value();
      rep.pairs.push_back(std::move(r));
    }

  const std::vector<Bar> bars = bars_of(g, s, cycles, opts.cycle_cap);
  for (const auto& b : bars) {
    rep.bars.push_back(bar_record(ctx, b, cycles[b.cycle1], cycles[b.cycle2]));
    inconsistent = inconsistent || rep.bars.back().inconsistency.has_value();
  }
  rep.bar_paths = distinct_bar_paths(bars);

  for (const auto& p : segments_of(g, s)) {
    SegmentRecord r;
    r.segment = p;
    r.ratio = commensurable_with_pi(p.length);
    std::vector<std::string> problems;
    if (!r.ratio) problems.push_back("segment length " + to_string(p.length) + " is incommensurable with PI");
    try {
      r.decomposition = decompose_segment(p, cycles, rep.bar_paths);
      Scalar total;
      for (const auto& t : r.decomposition->terms) {
        const Scalar& len = t.kind == DecompositionTerm::Kind::Cycle ? cycles[t.index].length
                                                                      : rep.bar_paths[t.index].length;
        total += len * t.coefficient;
      }
      r.derived_ratio = commensurable_with_pi(total);
      if (!(total == p.length)) problems.push_back("decomposition length differs from the segment length");
    } catch (const Error& e) {
      if (!internal(e)) throw;
      problems.push_back(e.what());
    }
    if (!problems.empty()) r.inconsistency = ctx.inconsistency(join(problems));
    inconsistent = inconsistent || r.inconsistency.has_value();
    rep.segments.push_back(std::move(r));
  }
  if (inconsistent) rep.verdict = AnalysisReport::Verdict::InternalInconsistency;
  return rep;
}

}  // namespace commensura
