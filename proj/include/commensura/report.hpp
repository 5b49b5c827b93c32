#pragma once

#include <string>

#include "json.hpp"

#include "commensura/engine.hpp"

namespace commensura {

using Json = nlohmann::ordered_json;

// Machine reports keep insertion order so the output is byte-stable.
// Scalars are written as literals and rationals as "p/q" strings.

Json to_json(const MetricGraph& g, const HypothesisAudit& a);
Json to_json(const MetricGraph& g, const Cycle& c);
Json to_json(const MetricGraph& g, const Path& p);
Json to_json(const MetricGraph& g, const Chord& c);
Json to_json(const MetricGraph& g, const SubgraphChord& c);
Json to_json(const TilingVerdict& v);
Json to_json(const GeometricTiling& t);
Json to_json(const MeasureTiling& t, const FunctionalCertificate& c, const SymbolTablePtr& table);
Json to_json(const MeasureTiling& t, const DehnResult& r, const SymbolTablePtr& table);
Json to_json(const MeasureTiling& t, const LemmaResult& r, const SymbolTablePtr& table);
Json to_json(const MetricGraph& g, const Decomposition& d, const std::vector<Cycle>& cycles,
             const std::vector<Path>& bar_paths);
Json to_json(const MetricGraph& g, const AnalysisReport& r);

std::string render_human(const MetricGraph& g, const HypothesisAudit& a);
std::string render_human(const MetricGraph& g, const AnalysisReport& r);

/// Piece table with decimal coordinates, one piece per line.
std::string plot_table(const GeometricTiling& t, int digits);

}  // namespace commensura
