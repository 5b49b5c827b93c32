#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "commensura/scalar.hpp"

namespace commensura {

/// Finite measure space: named atoms with positive measures.
struct MeasureSpace {
  std::string name;
  std::vector<std::string> atoms;
  std::vector<Scalar> measures;

  Scalar total() const;
  Scalar measure_of(const std::vector<std::size_t>& subset) const;
};

struct MeasurePiece {
  std::vector<std::size_t> a;  // atom indices of X
  std::vector<std::size_t> b;  // atom indices of Y
};

struct MeasureTiling {
  MeasureSpace x;
  MeasureSpace y;
  std::vector<MeasurePiece> pieces;

  Scalar side_a(std::size_t i) const { return x.measure_of(pieces.at(i).a); }
  Scalar side_b(std::size_t i) const { return y.measure_of(pieces.at(i).b); }
};

struct AxiomFailure {
  enum class Kind { Uncovered, DoublyCovered, NotSquare };
  Kind kind;
  std::size_t x = 0;  // atom pair for coverage failures
  std::size_t y = 0;
  std::size_t first = 0;  // piece indices
  std::size_t second = 0;

  friend bool operator==(const AxiomFailure&, const AxiomFailure&) = default;
};

std::string_view to_string(AxiomFailure::Kind k);
std::string describe(const MeasureTiling& t, const AxiomFailure& f);

/// First violated tiling axiom in scan order (atom pairs in (x, y) order,
/// then NotSquare by piece when `square` is set).  Throws InvalidArgument
/// when an atom measure is not positive.
std::optional<AxiomFailure> verify_measure_tiling(const MeasureTiling& t, bool square,
                                                  unsigned bits = kDefaultPrecisionBits);

/// Q-linear functional given by its values on basis symbols (others map to 0).
struct LinearFunctional {
  std::vector<std::pair<SymbolId, Rational>> values;

  Rational operator()(const Scalar& s) const;
};

std::string to_string(const LinearFunctional& f, const SymbolTablePtr& table);

/// f with f(v1) = a1 and f(v2) = a2, using the lexicographically least
/// support: single symbols first, then symbol pairs.  Throws
/// InternalInconsistency when no such functional exists.
LinearFunctional solve_functional(const Scalar& v1, const Rational& a1, const Scalar& v2,
                                  const Rational& a2);

/// Both sides of f(X) f(Y) = sum_i f(A_i) f(B_i).  Throws InvalidTiling if
/// the pieces do not tile X x Y.
std::pair<Rational, Rational> functional_identity(const MeasureTiling& t, const LinearFunctional& f,
                                                  unsigned bits = kDefaultPrecisionBits);

struct FunctionalCertificate {
  enum class Kind { SidesIncommensurable, PieceIncommensurable, LemmaVariant };
  Kind kind;
  std::optional<std::size_t> piece;  // the incommensurable piece for PieceIncommensurable
  LinearFunctional f;
  Rational fx;  // f(mu X)
  Rational fy;  // f(mu Y)
  std::vector<std::pair<Rational, Rational>> piece_values;  // f(mu A_i), f(mu B_i)
  Rational left;   // f(mu X) f(mu Y)
  Rational right;  // sum_i f(mu A_i) f(mu B_i)
  AxiomFailure violated;
  std::string summary;

  /// Re-evaluates f on `t` and re-runs the axiom check; true iff every
  /// stored value and the violated axiom are reproduced exactly.
  bool recheck(const MeasureTiling& t, unsigned bits = kDefaultPrecisionBits) const;
};

std::string_view to_string(FunctionalCertificate::Kind k);

struct DehnCommensurable {
  Scalar unit;  // every measure is an integer multiple of unit
  Rational x;
  Rational y;
  std::vector<Rational> pieces;  // side of each piece (mu A_i)
};

struct DehnResult {
  std::optional<DehnCommensurable> commensurable;
  std::optional<FunctionalCertificate> certificate;
};

/// Square-tiling test.  Either all of mu X, mu Y, mu A_i are commensurable
/// or a certificate is returned along with the tiling axiom that fails.
DehnResult dehn_test(const MeasureTiling& t, unsigned bits = kDefaultPrecisionBits);

struct LemmaResult {
  std::vector<std::string> failed_clauses;  // empty when the audit passes
  std::optional<Rational> ratio;            // q / r
  std::optional<FunctionalCertificate> certificate;
  Area designated_sum;  // sum of mu(A_i)^2 over designated pieces
  Area bound;           // (a - 4) r^2

  bool audit_passed() const { return failed_clauses.empty(); }
};

/// Pieces 0 and 1 must be r x (q + r) rectangles, the rest squares, and the
/// designated squares commensurable with r with squared sides summing past
/// (a - 4) r^2; mu X = 2q + a r and mu Y = q + (a/2 - 1) r.
LemmaResult dehn_plus_test(const MeasureTiling& t, const Scalar& q, const Scalar& r,
                           const Rational& a, const std::vector<std::size_t>& designated,
                           unsigned bits = kDefaultPrecisionBits);

struct MeasureTilingDocument {
  SymbolTablePtr symbols;
  MeasureTiling tiling;
};

// Line format: `symbol ...` as in graph files, then
//   space X x1=<scalar> x2=<scalar> ...
//   space Y y1=<scalar> ...
//   piece A={x1,x3} B={y2}
MeasureTilingDocument parse_measure_tiling(std::string_view text);
std::string serialize_measure_tiling(const MeasureTiling& t, const SymbolTablePtr& symbols);

}  // namespace commensura
