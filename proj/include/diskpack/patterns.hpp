#pragma once

// Repeated packing patterns: closed-form diameters, existence predicates,
// and coordinate builders.

#include <optional>
#include <string>
#include <vector>

#include "diskpack/core.hpp"

namespace diskpack {

struct Existence {
  bool exists = false;
  std::string reason;
};

struct SeriesFormula {
  SeriesId series;
  int k = 0;
  double m = 0.0;
  std::optional<double> angle;  // alpha or beta, radians
  Existence existence;
  double residual = 0.0;        // defining side-length equation, in diameters
};

/// Closed-form m for member k. SquareMinus3 has no closed form and throws
/// UnsupportedSeries; out-of-range k yields existence = false, not an error.
SeriesFormula m_pattern(SeriesId series, int k);

Existence exists_pattern(SeriesId series, int k);

/// Root of k cos b + cos(b + pi/3) = (k-1) sin(b + pi/3) + sin b: bisection
/// to a 1e-16 bracket, then two Newton steps.
double oblong_alt_angle(int k);

/// Residual of the equation above at angle b.
double oblong_alt_residual(int k, double b);

/// Admissible placements of the shifted rows and columns. Throws
/// UnsupportedSeries outside SquareMinus1 / SquareMinus2.
std::vector<PatternVariant> enumerate_variants(SeriesId series, int k);

/// Smallest admissible variant, used when none is given.
PatternVariant canonical_variant(SeriesId series, int k);

/// Throws PatternNotRepresentable when the pattern does not exist for k,
/// InvalidVariant for indices out of range, and UnsupportedSeries for
/// SquareMinus3 (see build_config_C).
Packing build_pattern(SeriesId series, int k, const PatternVariant& variant = {});

/// Centers of the ideal k^2 + floor(k/2) geometry in diameter units, built
/// from the same formulas for any k >= 2 (overlapping for k >= 8).
std::vector<Point> ideal_halfk_centers(int k);

/// The ideal half-k geometry as a packing object (not necessarily valid).
Packing ideal_halfk_packing(int k);

/// Largest overlap of the ideal half-k geometry as a fraction of the
/// diameter; 0 for 2 <= k <= 7 where the pattern exists.
double halfk_overlap(int k);

/// Engine-frame start built from a pattern with the diameter loosened by
/// `slack` (relative), so that tightening has room to move.
Configuration schematic_configuration(SeriesId series, int k, const PatternVariant& variant = {},
                                      double slack = 0.01);

/// Schematic start for the k^2 - 3 series in the engine frame: a straight
/// (k-3)^2 block at the bottom left, three hexagonally nested columns on the
/// right and rows on top, one loose disk in the top right pocket. Accepts
/// k >= 4; the diameter is 1% below touching.
Configuration build_config_C(int k);

}  // namespace diskpack
