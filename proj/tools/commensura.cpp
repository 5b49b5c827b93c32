#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "commensura/error.hpp"
#include "commensura/generate.hpp"
#include "commensura/graph_io.hpp"
#include "commensura/report.hpp"

using namespace commensura;

namespace {

enum Exit { kOk = 0, kUsage = 1, kHypothesis = 2, kInconsistent = 3, kResource = 4 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::HypothesisViolation: return kHypothesis;
    case ErrorKind::InternalInconsistency:
    case ErrorKind::InvalidTiling: return kInconsistent;
    case ErrorKind::PrecisionExhausted:
    case ErrorKind::EnumerationCapExceeded: return kResource;
    default: return kUsage;
  }
}

struct Globals {
  unsigned precision_bits = kDefaultPrecisionBits;
  std::size_t cycle_cap = kDefaultCycleCap;
  std::string format = "human";
  std::string export_plot;
  int plot_digits = 6;

  bool machine() const { return format == "machine"; }
  AnalysisOptions options() const { return {precision_bits, cycle_cap}; }
};

std::string read_input(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
    ss << in.rdbuf();
  }
  return ss.str();
}

void emit(const Globals& g, const Json& machine, const std::string& human) {
  if (g.machine())
    std::cout << machine.dump(2) << "\n";
  else
    std::cout << human;
}

Subgraph select(const GraphDocument& doc, const std::string& name) {
  if (name.empty()) return Subgraph::whole(doc.graph, "G");
  const Subgraph* s = doc.find_subgraph(name);
  if (!s) throw Error(ErrorKind::UnknownName, "no subgraph '" + name + "'");
  return *s;
}

std::vector<EdgeId> edge_list(const MetricGraph& g, const std::string& spec) {
  std::vector<EdgeId> out;
  std::string item;
  std::istringstream in(spec);
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    auto e = g.find_edge(item);
    if (!e) throw Error(ErrorKind::UnknownName, "no edge '" + item + "'");
    out.push_back(*e);
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty edge list");
  return out;
}

Cycle cycle_from_spec(const MetricGraph& g, const std::string& spec) {
  ImmersedLoop loop = ImmersedLoop::from_edges(g, edge_list(g, spec));
  if (!loop.embedded()) throw Error(ErrorKind::InvalidArgument, "'" + spec + "' is not an embedded cycle");
  Cycle c;
  for (const auto& st : loop.steps()) {
    c.vertices.push_back(st.from);
    c.edges.push_back(st.edge);
  }
  c.length = loop.length();
  return c;
}

Path path_from_spec(const MetricGraph& g, const std::string& spec, const Cycle& start) {
  Path p;
  p.edges = edge_list(g, spec);
  const Edge& first = g.edge(p.edges.front());
  VertexId cur = start.contains_vertex(first.u) ? first.u : first.v;
  if (!start.contains_vertex(cur)) throw Error(ErrorKind::InvalidArgument, "bar does not start on the first cycle");
  p.vertices.push_back(cur);
  for (EdgeId id : p.edges) {
    const Edge& e = g.edge(id);
    if (e.u != cur && e.v != cur) throw Error(ErrorKind::InvalidArgument, "bar edges do not form a path");
    cur = e.other(cur);
    p.vertices.push_back(cur);
    p.length += e.length;
  }
  return p;
}

void write_plot(const Globals& glob, const GeometricTiling& t) {
  if (glob.export_plot.empty()) return;
  std::ofstream out(glob.export_plot);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + glob.export_plot + "'");
  out << plot_table(t, glob.plot_digits);
}

int run_check(const Globals& glob, const std::string& file, const std::string& sub) {
  GraphDocument doc = parse_graph(read_input(file), glob.precision_bits);
  Subgraph s = select(doc, sub);
  DistanceTable d(doc.graph, glob.precision_bits);
  HypothesisAudit a = check_hypotheses(doc.graph, s, d, glob.options());
  emit(glob, to_json(doc.graph, a),
       render_human(doc.graph, a) + (a.passed() ? "hypotheses hold\n" : "hypotheses violated\n"));
  return a.passed() ? kOk : kHypothesis;
}

int run_analyze(const Globals& glob, const std::string& file, const std::string& sub) {
  GraphDocument doc = parse_graph(read_input(file), glob.precision_bits);
  Subgraph s = select(doc, sub);
  AnalysisReport r = analyze(doc.graph, s, glob.options());
  emit(glob, to_json(doc.graph, r), render_human(doc.graph, r));
  switch (r.verdict) {
    case AnalysisReport::Verdict::Conformant: return kOk;
    case AnalysisReport::Verdict::HypothesisViolation: return kHypothesis;
    case AnalysisReport::Verdict::InternalInconsistency: return kInconsistent;
  }
  return kOk;
}

int run_chords(const Globals& glob, const std::string& file, const std::string& loop_spec) {
  GraphDocument doc = parse_graph(read_input(file), glob.precision_bits);
  const MetricGraph& g = doc.graph;
  ImmersedLoop loop = ImmersedLoop::from_edges(g, edge_list(g, loop_spec));
  DistanceTable d(g, glob.precision_bits);
  auto chords = chords_of_loop(g, loop, d, glob.precision_bits);
  Json list = Json::array();
  std::ostringstream human;
  human << "loop length " << to_string(loop.length()) << ", " << chords.size() << " chords\n";
  for (const auto& c : chords) {
    list.push_back(to_json(g, c));
    human << "  (" << to_string(c.s) << ", " << to_string(c.t) << ") " << g.vertex_name(c.source_vertex)
          << " -> " << g.vertex_name(c.target_vertex) << " length " << to_string(c.length) << " z "
          << to_string(c.z) << "\n";
  }
  emit(glob, Json{{"length", to_string(loop.length())}, {"chords", list}}, human.str());
  return kOk;
}

int run_tile(const Globals& glob, const std::string& file, const std::string& loop_spec,
             const std::vector<std::string>& pair, const std::string& bar_spec) {
  GraphDocument doc = parse_graph(read_input(file), glob.precision_bits);
  const MetricGraph& g = doc.graph;
  const unsigned bits = glob.precision_bits;
  DistanceTable d(g, bits);
  GeometricTiling t;
  std::optional<GeometricTiling> torus;
  if (!loop_spec.empty()) {
    ImmersedLoop loop = ImmersedLoop::from_edges(g, edge_list(g, loop_spec));
    t = annulus_tiling(loop, chords_of_loop(g, loop, d, bits), spliced_region(loop));
  } else if (pair.size() == 2) {
    Cycle c1 = cycle_from_spec(g, pair[0]);
    Cycle c2 = cycle_from_spec(g, pair[1]);
    if (!bar_spec.empty()) {
      Path p = path_from_spec(g, bar_spec, c1);
      BarLoop bl = make_bar_loop(g, Bar{p, 0, 1}, c1, c2);
      t = annulus_tiling(bl.loop, chords_of_loop(g, bl.loop, d, bits), spliced_region(bl.loop, bl.params));
    } else {
      std::vector<EdgeId> edges = c1.edges;
      edges.insert(edges.end(), c2.edges.begin(), c2.edges.end());
      std::vector<SubgraphChord> cross;
      for (auto& ch : chords_of_subgraph(g, Subgraph(g, edges), d, bits))
        if (c1.contains_vertex(ch.source) && c2.contains_vertex(ch.target)) cross.push_back(std::move(ch));
      t = product_tiling(g, c1, c2, cross);
    }
  } else {
    throw Error(ErrorKind::InvalidArgument, "tile needs --loop or --pair");
  }
  TilingVerdict v = verify_tiling(t, bits);
  Json out{{"tiling", to_json(t)}, {"verdict", to_json(v)}};
  std::string human = std::string(to_string(t.region.kind)) + " tiling with " +
                      std::to_string(t.pieces.size()) + " pieces: " + describe(v) + "\n";
  if (v.ok() && t.region.kind == TilingRegion::Kind::Product) {
    GeometricTiling psi = psi_transform(t);
    TilingVerdict pv = verify_tiling(psi, bits);
    out["torus"] = {{"tiling", to_json(psi)}, {"verdict", to_json(pv)}};
    human += "torus tiling with " + std::to_string(psi.pieces.size()) + " pieces: " + describe(pv) + "\n";
    if (!pv.ok()) v = pv;
  }
  write_plot(glob, t);
  emit(glob, out, human);
  return v.ok() ? kOk : kInconsistent;
}

int run_dehn(const Globals& glob, const std::string& file, const std::string& q_text,
             const std::string& r_text, const std::string& a_text, const std::string& designated) {
  MeasureTilingDocument doc = parse_measure_tiling(read_input(file));
  const MeasureTiling& t = doc.tiling;
  const unsigned bits = glob.precision_bits;
  if (q_text.empty() && r_text.empty() && a_text.empty()) {
    auto fail = verify_measure_tiling(t, true, bits);
    DehnResult r = dehn_test(t, bits);
    Json out{{"axioms", fail ? Json{{"kind", std::string(to_string(fail->kind))}, {"detail", describe(t, *fail)}}
                             : Json("Ok")},
             {"result", to_json(t, r, doc.symbols)}};
    std::string human = std::string("axioms: ") + (fail ? describe(t, *fail) : "Ok") + "\n";
    if (r.commensurable)
      human += "commensurable with unit " + to_string(r.commensurable->unit) + "\n";
    else
      human += "certificate: " + r.certificate->summary + "\n";
    emit(glob, out, human);
    return r.commensurable ? kOk : kInconsistent;
  }
  if (q_text.empty() || r_text.empty() || a_text.empty())
    throw Error(ErrorKind::InvalidArgument, "--lemma-q, --lemma-r and --lemma-a go together");
  std::vector<std::size_t> idx;
  std::istringstream in(designated);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) idx.push_back(std::stoul(item));
  LemmaResult r = dehn_plus_test(t, parse_scalar(q_text, doc.symbols), parse_scalar(r_text, doc.symbols),
                                 parse_rational(a_text), idx, bits);
  std::string human;
  if (!r.audit_passed()) {
    for (const auto& c : r.failed_clauses) human += "clause failed: " + c + "\n";
  } else if (r.ratio) {
    human = "q/r = " + to_string(*r.ratio) + "\n";
  } else {
    human = "certificate: " + r.certificate->summary + "\n";
  }
  emit(glob, to_json(t, r, doc.symbols), human);
  if (!r.audit_passed()) return kHypothesis;
  return r.ratio ? kOk : kInconsistent;
}

int run_decompose(const Globals& glob, const std::string& file, const std::string& sub,
                  const std::string& segment) {
  GraphDocument doc = parse_graph(read_input(file), glob.precision_bits);
  const MetricGraph& g = doc.graph;
  Subgraph s = select(doc, sub);
  const Subgraph* named = doc.find_subgraph(segment);
  if (!named) throw Error(ErrorKind::UnknownName, "no subgraph '" + segment + "'");
  std::vector<EdgeId> want = named->edges();
  std::sort(want.begin(), want.end());
  std::optional<Path> seg;
  for (auto& p : segments_of(g, s)) {
    std::vector<EdgeId> have = p.edges;
    std::sort(have.begin(), have.end());
    if (have == want) seg = std::move(p);
  }
  if (!seg) throw Error(ErrorKind::InvalidArgument, "'" + segment + "' is not a segment of the subgraph");
  auto cycles = cycles_of(g, s, glob.cycle_cap);
  auto bar_paths = distinct_bar_paths(bars_of(g, s, cycles, glob.cycle_cap));
  Decomposition dec = decompose_segment(*seg, cycles, bar_paths);
  std::ostringstream human;
  human << segment << " =";
  for (const auto& t : dec.terms) {
    bool cyc = t.kind == DecompositionTerm::Kind::Cycle;
    human << " " << (t.coefficient < 0 ? "" : "+") << to_string(t.coefficient) << "*[";
    const auto& edges = cyc ? cycles[t.index].edges : bar_paths[t.index].edges;
    for (std::size_t i = 0; i < edges.size(); ++i) human << (i ? " " : "") << g.edge(edges[i]).name;
    human << "]";
  }
  human << "\n";
  Json out = to_json(g, dec, cycles, bar_paths);
  out["segment"] = to_json(g, *seg);
  emit(glob, out, human.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Commensurability of cycle, segment and bar lengths with PI in metric graphs"};
  app.require_subcommand(1);
  Globals glob;
  app.add_option("--precision-bits", glob.precision_bits, "interval refinement budget")->capture_default_str();
  app.add_option("--cycle-cap", glob.cycle_cap, "enumeration cap")->capture_default_str();
  app.add_option("--format", glob.format, "output format")
      ->check(CLI::IsMember({"human", "machine"}))
      ->capture_default_str();
  app.add_option("--export-plot", glob.export_plot, "write a decimal piece table (tile)");
  app.add_option("--plot-digits", glob.plot_digits, "decimal digits in the piece table")->capture_default_str();

  std::string file, sub, loop, segment, bar, lemma_q, lemma_r, lemma_a, designated;
  std::vector<std::string> pair, gen_args;

  auto* check = app.add_subcommand("check", "audit the hypotheses");
  check->add_option("graph", file, "graph file ('-' for stdin)")->required();
  check->add_option("--subgraph", sub, "named subgraph (default: whole graph)");

  auto* an = app.add_subcommand("analyze", "full analysis report");
  an->add_option("graph", file, "graph file ('-' for stdin)")->required();
  an->add_option("--subgraph", sub, "named subgraph (default: whole graph)");

  auto* ch = app.add_subcommand("chords", "chords of an immersed loop");
  ch->add_option("graph", file, "graph file")->required();
  ch->add_option("--loop", loop, "comma-separated edge names")->required();

  auto* tile = app.add_subcommand("tile", "build and verify a tiling");
  tile->add_option("graph", file, "graph file")->required();
  auto* loop_opt = tile->add_option("--loop", loop, "embedded loop: comma-separated edges");
  tile->add_option("--pair", pair, "two disjoint cycles, each comma-separated edges")->expected(2)->excludes(loop_opt);
  tile->add_option("--bar", bar, "bar joining the pair (bar loop tiling)");

  auto* dehn = app.add_subcommand("dehn", "square tiling test on a measure tiling file");
  dehn->add_option("tiling", file, "measure tiling file")->required();
  dehn->add_option("--lemma-q", lemma_q, "q for the rectangle variant");
  dehn->add_option("--lemma-r", lemma_r, "r for the rectangle variant");
  dehn->add_option("--lemma-a", lemma_a, "rational a for the rectangle variant");
  dehn->add_option("--designated", designated, "comma-separated designated piece indices");

  auto* dec = app.add_subcommand("decompose", "express a segment through cycles and bars");
  dec->add_option("graph", file, "graph file")->required();
  dec->add_option("--segment", segment, "subgraph naming the segment")->required();
  dec->add_option("--subgraph", sub, "ambient subgraph (default: whole graph)");

  auto* gen = app.add_subcommand("gen", "print a generated fixture graph");
  gen->add_option("args", gen_args, "circle L n | theta [L] | dumbbell loop bar | heawood | pg q | "
                                    "perturb <base...> edge delta")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return run_check(glob, file, sub);
    if (*an) return run_analyze(glob, file, sub);
    if (*ch) return run_chords(glob, file, loop);
    if (*tile) return run_tile(glob, file, loop, pair, bar);
    if (*dehn) return run_dehn(glob, file, lemma_q, lemma_r, lemma_a, designated);
    if (*dec) return run_decompose(glob, file, sub, segment);
    if (*gen) {
      std::cout << serialize_graph(generate(gen_args));
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "commensura: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "commensura: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
