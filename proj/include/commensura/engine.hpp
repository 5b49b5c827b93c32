#pragma once

#include <optional>
#include <string>
#include <vector>

#include "commensura/chords.hpp"
#include "commensura/dehn.hpp"
#include "commensura/graph.hpp"
#include "commensura/tiling.hpp"

namespace commensura {

struct AnalysisOptions {
  unsigned precision_bits = kDefaultPrecisionBits;
  std::size_t cycle_cap = kDefaultCycleCap;
};

struct HypothesisAudit {
  std::optional<Girth> girth;  // absent when G is a forest
  bool girth_ok = true;
  std::optional<DiameterResult> diameter;  // absent when the subgraph has no edges
  bool diameter_ok = true;
  std::vector<VertexId> low_degree;  // vertices of degree <= 1 in the subgraph

  bool passed() const { return girth_ok && diameter_ok && low_degree.empty(); }
};

/// Girth of G at least 2 PI, every two points of S at distance at most PI,
/// and minimum degree two in S.
HypothesisAudit check_hypotheses(const MetricGraph& g, const Subgraph& s, const DistanceTable& d,
                                 const AnalysisOptions& opts = {});

/// A failure the theorem rules out for valid inputs, with the hypothesis
/// audit that explains it.
struct Inconsistency {
  std::string reason;
  HypothesisAudit audit;
};

struct PositionBound {
  std::size_t position;  // loop index of p
  Area sum;              // area of the chords avoiding p
  bool ok;
};

struct StartPacking {
  std::size_t position;
  Scalar sum;  // sum of z over chords starting there
  bool ok;
};

struct CycleRecord {
  Cycle cycle;
  std::optional<Rational> ratio;  // l / PI
  std::vector<Chord> chords;
  std::vector<std::optional<Rational>> chord_ratios;  // d0 / PI
  std::optional<TilingVerdict> tiling;
  std::optional<DehnResult> dehn;
  Area bound;  // 2 PI (l - 2 PI)
  std::vector<PositionBound> area_bounds;
  Scalar packing_bound;  // l/2 - PI
  std::vector<StartPacking> packing;
  std::optional<Inconsistency> inconsistency;
};

CycleRecord analyze_cycle(const MetricGraph& g, const Subgraph& s, const Cycle& c,
                          const DistanceTable& d, const AnalysisOptions& opts = {});

struct PairRecord {
  std::size_t first = 0;  // cycle indices in the report
  std::size_t second = 0;
  std::vector<SubgraphChord> chords;  // from the first cycle to the second
  std::vector<std::optional<Rational>> chord_ratios;
  std::optional<TilingVerdict> tiling;
  std::optional<Cover> cover;
  std::optional<TilingVerdict> torus;
  std::optional<DehnResult> dehn;
  std::optional<Inconsistency> inconsistency;
};

/// Throws InvalidArgument when the cycles share a vertex.
PairRecord analyze_cycle_pair(const MetricGraph& g, const Subgraph& s, const Cycle& c1,
                              const Cycle& c2, const DistanceTable& d,
                              const AnalysisOptions& opts = {});

struct BarRecord {
  Bar bar;
  BarLoopParams params;
  Scalar q;  // b
  Scalar r;  // PI
  std::optional<Rational> a;  // (l1 + l2) / PI
  std::vector<Chord> chords;  // chords of the bar loop
  std::vector<std::size_t> designated;  // indices into chords
  std::optional<TilingVerdict> tiling;
  Area designated_sum;  // sum of z^2 over designated chords
  Area bound;           // (a - 4) PI^2
  std::optional<LemmaResult> lemma;
  std::optional<Rational> ratio;  // b / PI
  std::optional<Inconsistency> inconsistency;
};

/// Throws InvalidArgument when the cycles share a vertex or the bar does not
/// join them.
BarRecord analyze_bar(const MetricGraph& g, const Subgraph& s, const Bar& bar, const Cycle& c1,
                      const Cycle& c2, const DistanceTable& d, const AnalysisOptions& opts = {});

struct DecompositionTerm {
  enum class Kind { Cycle, Bar };
  Kind kind;
  std::size_t index;  // into the cycle list or the bar-path list
  Rational coefficient;
};

struct Decomposition {
  std::vector<DecompositionTerm> terms;
  bool exhaustive = false;  // support of least size; otherwise a basic solution
};

/// Bar paths with distinct edge sets, in first-occurrence order.
std::vector<Path> distinct_bar_paths(const std::vector<Bar>& bars);

/// Rational coefficients with P = sum q_i C_i + sum r_j B_j in the edge
/// space.  Throws InternalInconsistency when no combination exists.
Decomposition decompose_segment(const Path& segment,
                                const std::vector<Cycle>& cycles,
                                const std::vector<Path>& bar_paths);

struct SegmentRecord {
  Path segment;
  std::optional<Rational> ratio;  // length / PI
  std::optional<Decomposition> decomposition;
  std::optional<Rational> derived_ratio;  // from the decomposition
  std::optional<Inconsistency> inconsistency;
};

struct AnalysisReport {
  enum class Verdict { Conformant, HypothesisViolation, InternalInconsistency };
  std::string subgraph;
  HypothesisAudit audit;
  std::vector<CycleRecord> cycles;
  std::vector<PairRecord> pairs;
  std::size_t disjoint_pairs = 0;  // pairs analysed cover [0, pairs.size())
  std::vector<Path> bar_paths;
  std::vector<BarRecord> bars;
  std::vector<SegmentRecord> segments;
  std::vector<std::size_t> incommensurable_cycles;  // listed on audit failure
  Verdict verdict = Verdict::Conformant;
};

std::string_view to_string(AnalysisReport::Verdict v);

AnalysisReport analyze(const MetricGraph& g, const Subgraph& s, const AnalysisOptions& opts = {});

}  // namespace commensura
