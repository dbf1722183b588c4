#pragma once

// Contact graphs with the bond / gap tolerance regime, solid vs. rattler
// classification, and packing validation.

#include <optional>
#include <string>
#include <vector>

#include "diskpack/core.hpp"

namespace diskpack {

enum class Wall { Left, Right, Bottom, Top };
const char* to_string(Wall w);
Wall parse_wall(const std::string& text);

enum class DiskRole { Solid, Rattler };

struct DiskBond {
  int i;
  int j;
  double gap;
  friend bool operator==(const DiskBond& a, const DiskBond& b) { return a.i == b.i && a.j == b.j; }
};

struct WallBond {
  int i;
  Wall wall;
  double gap;
  friend bool operator==(const WallBond& a, const WallBond& b) { return a.i == b.i && a.wall == b.wall; }
};

/// A pair (or disk-wall pair when j < 0) whose gap falls in the reporting band.
struct NearMiss {
  int i;
  int j;  // -1 for a wall
  Wall wall;
  double gap;
};

inline constexpr double kBondTolRel = 1e-12;
inline constexpr double kGapFloorRel = 1e-7;
inline constexpr double kStrictGapFloorRel = 1e-5;

struct ContactGraph {
  double m = 0.0;
  double bond_tol = 0.0;
  std::vector<Point> centers;
  std::vector<DiskBond> disk_bonds;  // ordered by (i, j)
  std::vector<WallBond> wall_bonds;  // ordered by (i, wall)
  std::vector<DiskRole> roles;
  std::vector<NearMiss> near_misses;  // gap in [bond_tol, 1e-5 m)

  int n() const { return static_cast<int>(centers.size()); }
  int bond_count() const { return static_cast<int>(disk_bonds.size() + wall_bonds.size()); }
  int rattler_count() const;
  bool has_bond(int i, int j) const;
};

/// Bonds every disk pair and disk-wall pair whose gap is below `bond_tol`
/// (default 1e-12 m). The walls of the physical square sit m/2 outside the
/// centers square, so a wall gap is simply the center's distance to the
/// corresponding side of [0,1]^2.
ContactGraph contact_graph(const Packing& p, std::optional<double> bond_tol = std::nullopt);

struct GapReport {
  bool pass = true;         // nothing in [bond_tol, gap_floor)
  bool pass_strict = true;  // nothing in [bond_tol, 1e-5 m)
  double gap_floor = 0.0;
  std::vector<NearMiss> offenders;         // below gap_floor
  std::vector<NearMiss> strict_offenders;  // below 1e-5 m
};

GapReport well_formed_gap_check(const ContactGraph& g, std::optional<double> gap_floor = std::nullopt);

/// Iteratively prunes disks with fewer than three contacts or whose contact
/// normals fit in an open half-plane; pruned disks are rattlers.
std::vector<DiskRole> classify_rattlers(const ContactGraph& g);

struct ValidityReport {
  bool valid = true;
  bool in_bounds = true;
  bool normalized = true;
  double span_error = 0.0;
  double max_overlap = 0.0;  // fraction of m, >= 0
  std::optional<std::pair<int, int>> worst_pair;
  std::string message;
};

ValidityReport validate(const Packing& p, double overlap_tol_rel = kBondTolRel);

/// The eight symmetries of the square, index 0 is the identity.
Point apply_symmetry(Point p, int symmetry);
Wall apply_symmetry(Wall w, int symmetry);
Packing apply_symmetry(const Packing& p, int symmetry);

}  // namespace diskpack
