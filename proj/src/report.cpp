#include "commensura/report.hpp"

#include <sstream>

namespace commensura {

namespace {

Json ratio_json(const std::optional<Rational>& q) {
  return q ? Json(to_string(*q)) : Json("Incommensurable");
}

Json edge_names(const MetricGraph& g, const std::vector<EdgeId>& edges) {
  Json out = Json::array();
  for (EdgeId e : edges) out.push_back(g.edge(e).name);
  return out;
}

Json inconsistency_json(const MetricGraph& g, const std::optional<Inconsistency>& i) {
  if (!i) return nullptr;
  return Json{{"reason", i->reason}, {"reaudit", to_json(g, i->audit)}};
}

}  // namespace

Json to_json(const MetricGraph& g, const HypothesisAudit& a) {
  Json out;
  out["passed"] = a.passed();
  if (a.girth)
    out["girth"] = {{"ok", a.girth_ok}, {"value", to_string(a.girth->length)},
                    {"witness", to_json(g, a.girth->witness)}};
  else
    out["girth"] = {{"ok", a.girth_ok}, {"value", nullptr}};
  if (a.diameter)
    out["diameter"] = {{"ok", a.diameter_ok},
                       {"max_distance", to_string(a.diameter->max_distance)},
                       {"x", describe(g, a.diameter->x)},
                       {"y", describe(g, a.diameter->y)}};
  else
    out["diameter"] = {{"ok", a.diameter_ok}, {"max_distance", nullptr}};
  Json low = Json::array();
  for (VertexId v : a.low_degree) low.push_back(g.vertex_name(v));
  out["degree"] = {{"ok", a.low_degree.empty()}, {"low_degree", low}};
  return out;
}

Json to_json(const MetricGraph& g, const Cycle& c) {
  Json verts = Json::array();
  for (VertexId v : c.vertices) verts.push_back(g.vertex_name(v));
  return Json{{"vertices", verts}, {"edges", edge_names(g, c.edges)}, {"length", to_string(c.length)}};
}

Json to_json(const MetricGraph& g, const Path& p) {
  Json verts = Json::array();
  for (VertexId v : p.vertices) verts.push_back(g.vertex_name(v));
  return Json{{"vertices", verts}, {"edges", edge_names(g, p.edges)}, {"length", to_string(p.length)}};
}

Json to_json(const MetricGraph& g, const Chord& c) {
  return Json{{"source", c.source},
              {"target", c.target},
              {"s", to_string(c.s)},
              {"t", to_string(c.t)},
              {"from", g.vertex_name(c.source_vertex)},
              {"to", g.vertex_name(c.target_vertex)},
              {"length", to_string(c.length)},
              {"ratio", ratio_json(commensurable_with_pi(c.length))},
              {"z", to_string(c.z)},
              {"area", to_string(c.area)},
              {"geodesic", edge_names(g, c.geodesic)}};
}

Json to_json(const MetricGraph& g, const SubgraphChord& c) {
  return Json{{"from", g.vertex_name(c.source)},
              {"to", g.vertex_name(c.target)},
              {"length", to_string(c.length)},
              {"ratio", ratio_json(commensurable_with_pi(c.length))},
              {"z", to_string(c.z)},
              {"area", to_string(c.area)},
              {"geodesic", edge_names(g, c.geodesic)}};
}

Json to_json(const TilingVerdict& v) {
  Json out;
  out["kind"] = std::string(to_string(v.kind));
  if (v.kind == TilingVerdict::Kind::Overlap) out["pieces"] = {v.first, v.second};
  if (v.kind == TilingVerdict::Kind::Protrusion) out["pieces"] = {v.first};
  if (v.witness) out["witness"] = {to_string(v.witness->first), to_string(v.witness->second)};
  out["piece_area"] = to_string(v.piece_area);
  out["region_area"] = to_string(v.region_area);
  return out;
}

Json to_json(const GeometricTiling& t) {
  Json pieces = Json::array();
  for (const auto& p : t.pieces) {
    Json j{{"kind", std::string(to_string(p.kind))},
           {"center", {to_string(p.center_x), to_string(p.center_y)}},
           {"half_u", to_string(p.half_u)},
           {"half_w", to_string(p.half_w)},
           {"area", to_string(p.area)}};
    if (p.source) j["chord"] = *p.source;
    pieces.push_back(std::move(j));
  }
  return Json{{"region",
               {{"kind", std::string(to_string(t.region.kind))},
                {"l1", to_string(t.region.l1)},
                {"l2", to_string(t.region.l2)}}},
              {"pieces", pieces}};
}

Json to_json(const MeasureTiling& t, const FunctionalCertificate& c, const SymbolTablePtr& table) {
  Json values = Json::array();
  for (const auto& [a, b] : c.piece_values) values.push_back({to_string(a), to_string(b)});
  Json out;
  out["kind"] = std::string(to_string(c.kind));
  if (c.piece) out["piece"] = *c.piece;
  out["functional"] = to_string(c.f, table);
  out["f_x"] = to_string(c.fx);
  out["f_y"] = to_string(c.fy);
  out["piece_values"] = values;
  out["left"] = to_string(c.left);
  out["right"] = to_string(c.right);
  out["violated"] = {{"kind", std::string(to_string(c.violated.kind))},
                     {"detail", describe(t, c.violated)}};
  out["summary"] = c.summary;
  return out;
}

Json to_json(const MeasureTiling& t, const DehnResult& r, const SymbolTablePtr& table) {
  if (r.commensurable) {
    const auto& c = *r.commensurable;
    Json sides = Json::array();
    for (const auto& q : c.pieces) sides.push_back(to_string(q));
    return Json{{"verdict", "Commensurable"},
                {"unit", to_string(c.unit)},
                {"x", to_string(c.x)},
                {"y", to_string(c.y)},
                {"pieces", sides}};
  }
  return Json{{"verdict", "Certificate"}, {"certificate", to_json(t, *r.certificate, table)}};
}

Json to_json(const MeasureTiling& t, const LemmaResult& r, const SymbolTablePtr& table) {
  Json out;
  if (!r.audit_passed())
    out["verdict"] = "HypothesisAudit";
  else if (r.ratio)
    out["verdict"] = "QRCommensurable";
  else
    out["verdict"] = "Certificate";
  out["failed_clauses"] = r.failed_clauses;
  out["ratio"] = r.ratio ? Json(to_string(*r.ratio)) : Json(nullptr);
  out["designated_sum"] = to_string(r.designated_sum);
  out["bound"] = to_string(r.bound);
  out["certificate"] = r.certificate ? to_json(t, *r.certificate, table) : Json(nullptr);
  return out;
}

Json to_json(const MetricGraph& g, const Decomposition& d, const std::vector<Cycle>& cycles,
             const std::vector<Path>& bar_paths) {
  Json terms = Json::array();
  for (const auto& t : d.terms) {
    bool cyc = t.kind == DecompositionTerm::Kind::Cycle;
    const auto& edges = cyc ? cycles[t.index].edges : bar_paths[t.index].edges;
    terms.push_back({{"kind", cyc ? "cycle" : "bar"},
                     {"index", t.index},
                     {"edges", edge_names(g, edges)},
                     {"coefficient", to_string(t.coefficient)}});
  }
  return Json{{"support", d.exhaustive ? "least" : "basic"}, {"terms", terms}};
}

Json to_json(const MetricGraph& g, const AnalysisReport& r) {
  Json out;
  out["verdict"] = std::string(to_string(r.verdict));
  out["subgraph"] = r.subgraph;
  out["audit"] = to_json(g, r.audit);
  out["coverage"] = {{"cycles", r.cycles.size()},
                     {"disjoint_pairs", r.disjoint_pairs},
                     {"pairs_analyzed", r.pairs.size()},
                     {"bars", r.bars.size()},
                     {"segments", r.segments.size()}};

  Json cycles = Json::array();
  for (const auto& c : r.cycles) {
    Json j = to_json(g, c.cycle);
    j["ratio"] = ratio_json(c.ratio);
    if (c.tiling) {
      Json chords = Json::array();
      for (const auto& ch : c.chords) chords.push_back(to_json(g, ch));
      j["chords"] = chords;
      j["tiling"] = to_json(*c.tiling);
      if (c.dehn) {
        const auto& d = *c.dehn;
        j["dehn"] = d.commensurable ? Json{{"verdict", "Commensurable"}, {"unit", to_string(d.commensurable->unit)}}
                                    : Json{{"verdict", "Certificate"}, {"summary", d.certificate->summary}};
      }
      bool area_ok = true, pack_ok = true;
      for (const auto& b : c.area_bounds) area_ok = area_ok && b.ok;
      for (const auto& p : c.packing) pack_ok = pack_ok && p.ok;
      Json least = nullptr;
      for (const auto& b : c.area_bounds)
        if (least.is_null() || order(b.sum, c.area_bounds[least.get<std::size_t>()].sum) < 0)
          least = b.position;
      j["area_bound"] = {{"bound", to_string(c.bound)},
                         {"ok", area_ok},
                         {"least_position", least},
                         {"least_sum", least.is_null() ? Json(nullptr)
                                                       : Json(to_string(c.area_bounds[least.get<std::size_t>()].sum))}};
      j["packing"] = {{"bound", to_string(c.packing_bound)}, {"ok", pack_ok}};
    }
    j["inconsistency"] = inconsistency_json(g, c.inconsistency);
    cycles.push_back(std::move(j));
  }
  out["cycles"] = cycles;
  Json incomm = Json::array();
  for (auto i : r.incommensurable_cycles) incomm.push_back(i);
  out["incommensurable_cycles"] = incomm;

  Json pairs = Json::array();
  for (const auto& p : r.pairs) {
    Json ratios = Json::array();
    for (const auto& q : p.chord_ratios) ratios.push_back(ratio_json(q));
    Json j{{"cycles", {p.first, p.second}}, {"cross_chords", p.chords.size()}, {"chord_ratios", ratios}};
    j["tiling"] = p.tiling ? to_json(*p.tiling) : Json(nullptr);
    j["cover"] = p.cover ? Json{{"n1", p.cover->n1}, {"n2", p.cover->n2}, {"length", to_string(p.cover->length)}}
                         : Json(nullptr);
    j["torus"] = p.torus ? to_json(*p.torus) : Json(nullptr);
    if (p.dehn)
      j["dehn"] = p.dehn->commensurable ? Json{{"verdict", "Commensurable"}, {"unit", to_string(p.dehn->commensurable->unit)}}
                                        : Json{{"verdict", "Certificate"}, {"summary", p.dehn->certificate->summary}};
    j["inconsistency"] = inconsistency_json(g, p.inconsistency);
    pairs.push_back(std::move(j));
  }
  out["pairs"] = pairs;

  Json bars = Json::array();
  for (const auto& b : r.bars) {
    Json j = to_json(g, b.bar.path);
    j["cycles"] = {b.bar.cycle1, b.bar.cycle2};
    j["ratio"] = ratio_json(b.ratio);
    j["normalization"] = {{"q", to_string(b.q)}, {"r", to_string(b.r)},
                          {"a", b.a ? Json(to_string(*b.a)) : Json(nullptr)}};
    j["loop"] = {{"s1", to_string(b.params.s1)}, {"s2", to_string(b.params.s2)},
                 {"chords", b.chords.size()}, {"designated", b.designated.size()}};
    j["tiling"] = b.tiling ? to_json(*b.tiling) : Json(nullptr);
    j["area_bound"] = {{"designated_sum", to_string(b.designated_sum)}, {"bound", to_string(b.bound)}};
    if (b.lemma) {
      const auto& l = *b.lemma;
      j["lemma"] = {{"audit_passed", l.audit_passed()},
                    {"ratio", l.ratio ? Json(to_string(*l.ratio)) : Json(nullptr)},
                    {"certificate", l.certificate ? Json(l.certificate->summary) : Json(nullptr)}};
    }
    j["inconsistency"] = inconsistency_json(g, b.inconsistency);
    bars.push_back(std::move(j));
  }
  out["bars"] = bars;

  Json bar_paths = Json::array();
  for (const auto& p : r.bar_paths) bar_paths.push_back(to_json(g, p));
  out["bar_paths"] = bar_paths;

  std::vector<Cycle> cycle_list;
  for (const auto& c : r.cycles) cycle_list.push_back(c.cycle);
  Json segments = Json::array();
  for (const auto& s : r.segments) {
    Json j = to_json(g, s.segment);
    j["ratio"] = ratio_json(s.ratio);
    j["decomposition"] = s.decomposition ? to_json(g, *s.decomposition, cycle_list, r.bar_paths) : Json(nullptr);
    j["derived_ratio"] = s.derived_ratio ? ratio_json(s.derived_ratio) : Json(nullptr);
    j["inconsistency"] = inconsistency_json(g, s.inconsistency);
    segments.push_back(std::move(j));
  }
  out["segments"] = segments;
  return out;
}

std::string render_human(const MetricGraph& g, const HypothesisAudit& a) {
  std::ostringstream os;
  os << "girth: " << (a.girth ? to_string(a.girth->length) : std::string("none (forest)"))
     << (a.girth_ok ? " ok" : " VIOLATED (< 2*PI)") << "\n";
  if (a.diameter)
    os << "point diameter: " << to_string(a.diameter->max_distance)
       << (a.diameter_ok ? " ok" : " VIOLATED (> PI)") << " between " << describe(g, a.diameter->x)
       << " and " << describe(g, a.diameter->y) << "\n";
  if (!a.low_degree.empty()) {
    os << "degree <= 1:";
    for (VertexId v : a.low_degree) os << " " << g.vertex_name(v);
    os << "\n";
  }
  return os.str();
}

std::string render_human(const MetricGraph& g, const AnalysisReport& r) {
  std::ostringstream os;
  os << "verdict: " << to_string(r.verdict) << "\n" << render_human(g, r.audit);
  auto ratio = [](const std::optional<Rational>& q) {
    return q ? to_string(*q) + "*PI" : std::string("incommensurable with PI");
  };
  os << "cycles: " << r.cycles.size() << "\n";
  for (std::size_t i = 0; i < r.cycles.size(); ++i) {
    const auto& c = r.cycles[i];
    os << "  cycle " << i << ": length " << to_string(c.cycle.length) << " = " << ratio(c.ratio);
    if (c.tiling)
      os << ", " << c.chords.size() << " chords, tiling " << to_string(c.tiling->kind);
    if (c.inconsistency) os << "\n    INCONSISTENT: " << c.inconsistency->reason;
    os << "\n";
  }
  if (!r.incommensurable_cycles.empty()) {
    os << "incommensurable cycles:";
    for (auto i : r.incommensurable_cycles) os << " " << i;
    os << "\n";
  }
  if (r.verdict == AnalysisReport::Verdict::HypothesisViolation) return os.str();
  os << "disjoint cycle pairs: " << r.disjoint_pairs << " (" << r.pairs.size() << " analysed)\n";
  for (const auto& p : r.pairs)
    if (p.inconsistency)
      os << "  pair (" << p.first << ", " << p.second << ") INCONSISTENT: " << p.inconsistency->reason << "\n";
  os << "bars: " << r.bars.size() << "\n";
  for (std::size_t i = 0; i < r.bars.size(); ++i) {
    const auto& b = r.bars[i];
    os << "  bar " << i << " (cycles " << b.bar.cycle1 << ", " << b.bar.cycle2 << "): length "
       << to_string(b.params.b) << " = " << ratio(b.ratio);
    if (b.inconsistency) os << "\n    INCONSISTENT: " << b.inconsistency->reason;
    os << "\n";
  }
  os << "segments: " << r.segments.size() << "\n";
  for (std::size_t i = 0; i < r.segments.size(); ++i) {
    const auto& s = r.segments[i];
    os << "  segment " << i << ": length " << to_string(s.segment.length) << " = " << ratio(s.ratio);
    if (s.decomposition) {
      os << " =";
      for (const auto& t : s.decomposition->terms)
        os << " " << (t.coefficient < 0 ? "" : "+") << to_string(t.coefficient) << "*"
           << (t.kind == DecompositionTerm::Kind::Cycle ? "C" : "B") << t.index;
    }
    if (s.inconsistency) os << "\n    INCONSISTENT: " << s.inconsistency->reason;
    os << "\n";
  }
  return os.str();
}

std::string plot_table(const GeometricTiling& t, int digits) {
  std::ostringstream os;
  os << "# region " << to_string(t.region.kind) << " l1=" << to_decimal(t.region.l1, digits)
     << " l2=" << to_decimal(t.region.l2, digits) << "\n";
  os << "# kind center_x center_y half_u half_w\n";
  for (const auto& p : t.pieces)
    os << to_string(p.kind) << " " << to_decimal(p.center_x, digits) << " " << to_decimal(p.center_y, digits)
       << " " << to_decimal(p.half_u, digits) << " " << to_decimal(p.half_w, digits) << "\n";
  return os.str();
}

}  // namespace commensura
