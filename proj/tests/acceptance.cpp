// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <iostream>
#include <set>
#include <sstream>

#include "commensura/error.hpp"
#include "commensura/report.hpp"
#include "fixtures.hpp"

using namespace commensura;
using namespace fixtures;

namespace {

const Scalar kPi = Scalar::pi();
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) note << what;
    ok = ok && cond;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Scalar length_of(const MetricGraph& g, const std::vector<EdgeId>& edges) {
  Scalar s;
  for (EdgeId e : edges) s += g.edge(e).length;
  return s;
}

void heawood_conformance(Outcome& o) {
  const auto t0 = Clock::now();
  MetricGraph h = heawood_graph();
  AnalysisReport r = analyze(h, Subgraph::whole(h));
  const double secs = seconds_since(t0);
  o.require(r.verdict == AnalysisReport::Verdict::Conformant, "verdict is not Conformant");
  std::size_t expected_cycles = 0;
  for (const auto& [len, count] : brute_force_cycle_counts(h)) expected_cycles += count;
  o.require(r.cycles.size() == expected_cycles, "cycle count differs from brute force");
  for (const auto& c : r.cycles) {
    o.require(c.ratio.has_value(), "cycle without ratio");
    if (!c.ratio) return;
    const Rational k = *c.ratio * 3;
    o.require(k.get_den() == 1 && k >= 6, "cycle ratio " + c.ratio->get_str() + " is not k/3 with k >= 6");
    o.require(kPi * *c.ratio == length_of(h, c.cycle.edges), "cycle ratio does not reproduce the length");
  }
  o.require(r.segments.size() == h.edge_count(), "segment count");
  for (const auto& s : r.segments) {
    o.require(s.ratio == Rational(1, 3), "segment ratio is not 1/3");
    o.require(length_of(h, s.segment.edges) == kPi / 3, "segment length");
  }
  o.require(secs < 30, "took " + std::to_string(secs) + " s");
  o.note << r.cycles.size() << " cycles, " << r.segments.size() << " segments in " << secs << " s";
}

void annulus_exactness(Outcome& o) {
  MetricGraph h = heawood_graph();
  DistanceTable d(h);
  ImmersedLoop loop = ImmersedLoop::from_cycle(h, heawood_octagon(h));
  auto chords = chords_of_loop(h, loop, d);
  TilingVerdict v = verify_tiling(annulus_tiling(loop, chords, spliced_region(loop)));
  o.require(v.ok(), "annulus tiling verdict " + std::string(to_string(v.kind)));
  const Scalar l = loop.length();
  Area sum;
  for (const auto& c : chords) sum += c.z * c.z * 2;
  o.require(sum == l * (l - kPi * 2), "sum of 2 z^2 differs from l (l - 2 PI)");
  o.require(sum == kPi * kPi * Rational(16, 9), "sum of 2 z^2 differs from 16/9 PI^2");
  o.require(v.piece_area == sum && v.region_area == sum, "verdict areas");
  o.note << chords.size() << " chords, area " << to_string(sum);
}

void chord_area_bound(Outcome& o) {
  MetricGraph h = heawood_graph();
  DistanceTable d(h);
  const Cycle oct = heawood_octagon(h);
  ImmersedLoop loop = ImmersedLoop::from_cycle(h, oct);
  auto chords = chords_of_loop(h, loop, d);
  const Scalar l = loop.length();
  const Area bound = kPi * (l - kPi * 2) * 2;
  const Scalar packing = l / 2 - kPi;
  for (std::size_t p = 0; p < loop.size(); ++p) {
    Area avoid;
    Scalar starting;
    for (const auto& c : chords) {
      if (c.source != p && c.target != p) avoid += c.area;
      if (c.source == p) starting += c.z;
    }
    o.require(compare(avoid, bound) != Ordering::Less, "area bound fails at " + std::to_string(p));
    o.require(compare(starting, packing) != Ordering::Greater, "packing bound fails at " + std::to_string(p));
  }
  CycleRecord r = analyze_cycle(h, Subgraph::whole(h), oct, d);
  o.require(!r.inconsistency, "engine reports an inconsistency");
  o.require(r.area_bounds.size() == loop.size() && r.packing.size() == loop.size(), "engine position count");
  for (const auto& b : r.area_bounds) o.require(b.ok, "engine area bound");
  for (const auto& b : r.packing) o.require(b.ok, "engine packing bound");
  o.note << "bound " << to_string(bound) << " at " << loop.size() << " positions";
}

void moron_positive(Outcome& o) {
  for (int c : cover_counts(moron_layout(), 33, 32)) o.require(c == 1, "layout is not a tiling cell by cell");
  MeasureTiling t = moron_tiling();
  o.require(!verify_measure_tiling(t, true), "square-mode verification fails");
  DehnResult r = dehn_test(t);
  o.require(r.commensurable.has_value(), "no commensurable result");
  if (!r.commensurable) return;
  o.require(r.commensurable->unit == Scalar(1), "unit");
  o.require(r.commensurable->x == 33 && r.commensurable->y == 32, "side ratios");
  std::multiset<Rational> got(r.commensurable->pieces.begin(), r.commensurable->pieces.end());
  std::multiset<Rational> want{18, 15, 14, 10, 9, 8, 7, 4, 1};
  o.require(got == want, "square sides");
  o.note << "33 x 32 with 9 squares";
}

void dehn_negative(Outcome& o) {
  std::mt19937 rng(2024);
  std::vector<MeasureTiling> candidates;
  const Scalar h(Rational(1, 2));
  candidates.push_back(make_tiling({h, h}, {h, h, kPi - 1}, {{{0}, {0}}, {{1}, {1}}}));
  candidates.push_back(make_tiling({Scalar(1)}, {kPi}, {{{0}, {0}}}));
  for (int i = 0; i < 500; ++i) candidates.push_back(unit_by_pi_candidate(rng));
  std::size_t square = 0;
  for (const auto& t : candidates) {
    DehnResult r = dehn_test(t);
    o.require(r.certificate.has_value(), "candidate without certificate");
    if (!r.certificate) return;
    const auto& c = *r.certificate;
    o.require(c.fx == 1 && c.fy == -1 && c.left == -1, "functional values");
    o.require(c.recheck(t), "certificate does not recheck");
    o.require(failure_is_real(t, c.violated), "named axiom failure is not real");
    bool all_square = true;
    for (std::size_t k = 0; k < t.pieces.size(); ++k) all_square = all_square && t.side_a(k) == t.side_b(k);
    if (all_square) {
      ++square;
      Rational sum = 0;
      for (const auto& [fa, fb] : c.piece_values) sum += fa * fa;
      o.require(c.right == sum && c.right >= 0, "square candidate does not give a sum of squares");
    }
  }
  o.note << candidates.size() << " candidates, " << square << " with square pieces";
}

void functional_identity_suite(Outcome& o) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<std::size_t> dim(1, 7);
  const auto t0 = Clock::now();
  for (int i = 0; i < 1000; ++i) {
    MeasureTiling t = random_guillotine(rng, dim(rng), dim(rng));
    auto [l, r] = functional_identity(t, random_functional(rng));
    o.require(l == r, "case " + std::to_string(i) + " differs");
  }
  const double secs = seconds_since(t0);
  o.require(secs < 60, "took " + std::to_string(secs) + " s");
  o.note << "1000 tilings in " << secs << " s";
}

void lemma_control(Outcome& o) {
  LemmaResult a = dehn_plus_test(lemma_conforming(), Scalar(Rational(1, 2)), Scalar(1), 6, {2});
  o.require(a.audit_passed() && a.ratio == Rational(1, 2), "conforming instance ratio");
  MeasureTiling t = lemma_candidate_pi();
  LemmaResult b = dehn_plus_test(t, kPi, Scalar(1), 6, {6});
  o.require(b.audit_passed() && b.certificate.has_value(), "pi instance certificate");
  if (!b.certificate) return;
  o.require(b.certificate->f(kPi) == 2 && b.certificate->f(Scalar(1)) == -1, "g(q) and g(r)");
  o.require(b.certificate->recheck(t), "certificate does not recheck");
  o.note << "ratio 1/2; g(q) = 2, g(r) = -1";
}

void contrapositive(Outcome& o) {
  MetricGraph c = circle_graph(kPi * 2 + 1, 4);
  DistanceTable dc(c);
  HypothesisAudit a = check_hypotheses(c, Subgraph::whole(c), dc);
  o.require(!a.passed() && !a.diameter_ok && a.diameter, "circle audit passes");
  if (!a.diameter) return;
  const Scalar want = kPi + Rational(1, 2);
  o.require(a.diameter->max_distance == want, "circle witness distance");
  auto m = floyd(c);
  o.require(point_distance(c, m, a.diameter->x.edge, offset_from_u(c, a.diameter->x), a.diameter->y.edge,
                           offset_from_u(c, a.diameter->y)) == want,
            "circle witness points");

  MetricGraph p = perturb(heawood_graph(), "e0", Scalar(1));
  DistanceTable dp(p);
  HypothesisAudit b = check_hypotheses(p, Subgraph::whole(p), dp);
  o.require(!b.passed() && b.diameter, "perturbed audit passes");
  if (!b.diameter) return;
  auto mp = floyd(p);
  const Scalar seen = point_distance(p, mp, b.diameter->x.edge, offset_from_u(p, b.diameter->x), b.diameter->y.edge,
                                     offset_from_u(p, b.diameter->y));
  o.require(seen == b.diameter->max_distance, "perturbed witness points");
  o.require(compare(seen, kPi) == Ordering::Greater, "perturbed witness is not beyond PI");
  o.require(compare(b.diameter->max_distance, sampled_diameter(p, Subgraph::whole(p), 2)) != Ordering::Less,
            "exact diameter below a sampled distance");
  o.note << "witnesses " << to_string(want) << " and " << to_string(seen);
}

void decomposition(Outcome& o) {
  auto theta = parse_graph(kThetaSource);
  const MetricGraph& g = theta.graph;
  auto cycles = cycles_of(g, Subgraph::whole(g));
  const Subgraph* seg = theta.find_subgraph("P");
  Path p{{}, seg->edges(), length_of(g, seg->edges())};
  Decomposition dec = decompose_segment(p, cycles, {});
  std::vector<Rational> sum(g.edge_count(), 0);
  std::multiset<Rational> coeffs;
  for (const auto& t : dec.terms) {
    coeffs.insert(t.coefficient);
    auto v = edge_vector(g, cycles[t.index].edges);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += t.coefficient * v[i];
    o.require(t.coefficient == (cycles[t.index].contains_edge(seg->edges()[0]) ? Rational(1, 2) : Rational(-1, 2)),
              "theta coefficient sign");
  }
  o.require(coeffs == std::multiset<Rational>{Rational(1, 2), Rational(1, 2), Rational(-1, 2)}, "theta coefficients");
  o.require(sum == edge_vector(g, seg->edges()), "theta re-expansion");

  auto leaf = parse_graph(kPseudoleafSource);
  const MetricGraph& lg = leaf.graph;
  Subgraph all = Subgraph::whole(lg);
  auto lcycles = cycles_of(lg, all);
  auto bars = distinct_bar_paths(bars_of(lg, all, lcycles));
  const Subgraph* lseg = leaf.find_subgraph("seg");
  Path lp{{}, lseg->edges(), length_of(lg, lseg->edges())};
  Decomposition ld = decompose_segment(lp, lcycles, bars);
  const EdgeId P = *lg.find_edge("P"), wv = *lg.find_edge("wv");
  std::map<std::set<EdgeId>, Rational> by_bar;
  for (const auto& t : ld.terms) {
    o.require(t.kind == DecompositionTerm::Kind::Bar, "pseudoleaf uses a cycle");
    if (t.kind == DecompositionTerm::Kind::Bar)
      by_bar[{bars[t.index].edges.begin(), bars[t.index].edges.end()}] = t.coefficient;
  }
  o.require(ld.terms.size() == 2 && by_bar[{P, wv}] == 1 && by_bar[{wv}] == -1, "pseudoleaf coefficients");
  o.note << "theta (1/2, 1/2, -1/2); pseudoleaf (+1, -1)";
}

void determinism(Outcome& o) {
  std::vector<std::string> sources{serialize_graph(heawood_graph()),
                                   serialize_graph(incidence_graph(3)),
                                   serialize_graph(circle_graph(kPi * 2 + 1, 4)),
                                   serialize_graph(theta_graph(kPi)),
                                   serialize_graph(dumbbell_graph(kPi * 2, kPi / 3)),
                                   serialize_graph(perturb(heawood_graph(), "e0", Scalar(1))),
                                   kThetaSource,
                                   kPseudoleafSource,
                                   "symbol E 2.718281828 err 1/1000000000\nsymbol tau pi\nvertex a\n"
                                   "edge l a a 2*tau + E\nsubgraph all l\n"};
  for (const auto& src : sources) {
    GraphDocument d = parse_graph(src);
    const std::string once = serialize_graph(d.graph, d.subgraphs);
    GraphDocument again = parse_graph(once);
    o.require(serialize_graph(again.graph, again.subgraphs) == once, "graph round trip");
    o.require(again.graph.edge_count() == d.graph.edge_count(), "graph round trip edge count");
    for (EdgeId e = 0; e < d.graph.edge_count(); ++e)
      o.require(again.graph.edge(e).length == d.graph.edge(e).length, "graph round trip lengths");
  }
  for (const auto& t : {moron_tiling(), lemma_conforming(), lemma_candidate_pi(), lemma_boundary()}) {
    const std::string once = serialize_measure_tiling(t, nullptr);
    MeasureTilingDocument d = parse_measure_tiling(once);
    o.require(serialize_measure_tiling(d.tiling, d.symbols) == once, "measure tiling round trip");
  }
  MetricGraph h = heawood_graph();
  const std::string a = to_json(h, analyze(h, Subgraph::whole(h))).dump(2);
  MetricGraph h2 = parse_graph(serialize_graph(heawood_graph())).graph;
  const std::string b = to_json(h2, analyze(h2, Subgraph::whole(h2))).dump(2);
  o.require(a == b, "machine reports differ");
  o.note << sources.size() << " graphs, 4 measure tilings, report of " << a.size() << " bytes";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)(Outcome&)>> criteria{
      {"heawood conformance", heawood_conformance},
      {"annulus tiling exactness", annulus_exactness},
      {"chord area and packing bounds", chord_area_bound},
      {"dehn positive control", moron_positive},
      {"dehn negative control", dehn_negative},
      {"functional identity suite", functional_identity_suite},
      {"lemma variant control", lemma_control},
      {"contrapositive sensitivity", contrapositive},
      {"segment decomposition", decomposition},
      {"determinism and round trip", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.note << "exception: " << e.what();
    }
    failures += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.note.str()
              << "\n";
  }
  return failures == 0 ? 0 : 1;
}
