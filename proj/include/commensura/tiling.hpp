#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "commensura/chords.hpp"
#include "commensura/dehn.hpp"

namespace commensura {

// Geometric tilings of a loop square (R/lZ)^2 or a product of two circles.
// A piece is stored by its centre (x, y) and half extents along the rotated
// axes u = x + y and w = y - x, in which chord squares are axis-aligned.
// Torus pieces (the output of psi_transform) use the plain axes instead.

struct Piece {
  enum class Kind { ChordSquare, SplicedRectangle, TorusSquare };
  Kind kind;
  Scalar center_x;
  Scalar center_y;
  Scalar half_u;
  Scalar half_w;
  Area area;
  std::optional<std::size_t> source;  // chord index for chord squares
};

std::string_view to_string(Piece::Kind k);

struct TilingRegion {
  enum class Kind { Annulus, Product, Torus };
  Kind kind;
  Scalar l1;  // loop length (Annulus), first circle (Product), side (Torus)
  Scalar l2;  // second circle (Product), otherwise equal to l1

  /// l(l - 2 PI) for an annulus (0 below 2 PI), l1 l2 otherwise.
  Area area(unsigned bits = kDefaultPrecisionBits) const;
};

std::string_view to_string(TilingRegion::Kind k);

struct GeometricTiling {
  TilingRegion region;
  std::vector<Piece> pieces;
};

struct TilingVerdict {
  enum class Kind { Ok, Overlap, Gap, AreaMismatch, Protrusion };
  Kind kind = Kind::Ok;
  std::size_t first = 0;   // piece indices (Overlap, Protrusion)
  std::size_t second = 0;
  std::optional<std::pair<Scalar, Scalar>> witness;  // a point (x, y)
  Area piece_area;
  Area region_area;

  bool ok() const { return kind == Kind::Ok; }
};

std::string_view to_string(TilingVerdict::Kind k);
std::string describe(const TilingVerdict& v);

/// One square per chord, followed by the spliced rectangles.
GeometricTiling annulus_tiling(const ImmersedLoop& loop, const std::vector<Chord>& chords,
                               const SplicedRegion& spliced);

/// Coverage is checked on the grid spanned by all piece boundaries in a
/// fundamental domain; the first failing cell in scan order is reported.
/// Protrusion is checked before coverage and the area identity last.
TilingVerdict verify_tiling(const GeometricTiling& t, unsigned bits = kDefaultPrecisionBits);

/// Position of every vertex along an embedded cycle.
std::vector<std::pair<VertexId, Scalar>> cycle_positions(const MetricGraph& g, const Cycle& c);

/// Squares on C1 x C2 for the chords running from C1 to C2.
GeometricTiling product_tiling(const MetricGraph& g, const Cycle& c1, const Cycle& c2,
                               const std::vector<SubgraphChord>& chords);

struct Cover {
  unsigned long n1;
  unsigned long n2;
  Scalar length;  // n1 l1 = n2 l2
};

/// Minimal n1, n2 with n1 l1 = n2 l2.  Throws InternalInconsistency when
/// l1 and l2 are incommensurable.
Cover common_cover(const Scalar& l1, const Scalar& l2);

/// Lifts a product tiling to the common cover and maps every square to its
/// two axis-aligned preimages under (x, y) -> (x + y, x - y).
GeometricTiling psi_transform(const GeometricTiling& product);

/// Atoms are the grid intervals of the fundamental domain.  Annulus
/// lengths are halved so that a chord square has side z and the circle
/// has measure l; torus lengths are kept.  Throws InvalidTiling if a piece
/// leaves the region and Unsupported for product regions.
MeasureTiling to_measure_tiling(const GeometricTiling& t, unsigned bits = kDefaultPrecisionBits);

/// x - k p in [0, p) for the integer k with that property.
Scalar reduce_mod(const Scalar& x, const Scalar& p, unsigned bits = kDefaultPrecisionBits);

}  // namespace commensura
