#include "diskpack/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace diskpack {

const char* to_string(Wall w) {
  switch (w) {
    case Wall::Left: return "left";
    case Wall::Right: return "right";
    case Wall::Bottom: return "bottom";
    case Wall::Top: return "top";
  }
  return "?";
}

Wall parse_wall(const std::string& text) {
  if (text == "left") return Wall::Left;
  if (text == "right") return Wall::Right;
  if (text == "bottom") return Wall::Bottom;
  if (text == "top") return Wall::Top;
  throw Error(ErrorCode::ParseError, "unknown wall '" + text + "'");
}

namespace {

double wall_gap(Point c, Wall w) {
  switch (w) {
    case Wall::Left: return c.x;
    case Wall::Right: return 1.0 - c.x;
    case Wall::Bottom: return c.y;
    case Wall::Top: return 1.0 - c.y;
  }
  return 0.0;
}

Point wall_normal(Wall w) {
  switch (w) {
    case Wall::Left: return {-1.0, 0.0};
    case Wall::Right: return {1.0, 0.0};
    case Wall::Bottom: return {0.0, -1.0};
    case Wall::Top: return {0.0, 1.0};
  }
  return {};
}

constexpr Wall kWalls[] = {Wall::Left, Wall::Right, Wall::Bottom, Wall::Top};

// True when every direction lies strictly inside some open half-plane.
bool in_open_half_plane(std::vector<double> angles) {
  if (angles.empty()) return true;
  std::sort(angles.begin(), angles.end());
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double widest = angles.front() + kTwoPi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) widest = std::max(widest, angles[i] - angles[i - 1]);
  return widest > std::numbers::pi + 1e-9;
}

}  // namespace

int ContactGraph::rattler_count() const {
  return static_cast<int>(std::count(roles.begin(), roles.end(), DiskRole::Rattler));
}

bool ContactGraph::has_bond(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::any_of(disk_bonds.begin(), disk_bonds.end(),
                     [&](const DiskBond& b) { return b.i == i && b.j == j; });
}

ContactGraph contact_graph(const Packing& p, std::optional<double> bond_tol) {
  ContactGraph g;
  g.m = p.m;
  g.bond_tol = bond_tol.value_or(kBondTolRel * p.m);
  g.centers = p.centers;
  const double band = std::max(kStrictGapFloorRel * p.m, g.bond_tol);
  const int n = p.n();
  for (int i = 0; i < n; ++i) {
    for (Wall w : kWalls) {
      const double gap = wall_gap(p.centers[i], w);
      if (gap < g.bond_tol) {
        g.wall_bonds.push_back({i, w, gap});
      } else if (gap < band) {
        g.near_misses.push_back({i, -1, w, gap});
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double gap = distance(p.centers[i], p.centers[j]) - p.m;
      if (gap < g.bond_tol) {
        g.disk_bonds.push_back({i, j, gap});
      } else if (gap < band) {
        g.near_misses.push_back({i, j, Wall::Left, gap});
      }
    }
  }
  g.roles = classify_rattlers(g);
  return g;
}

GapReport well_formed_gap_check(const ContactGraph& g, std::optional<double> gap_floor) {
  GapReport r;
  r.gap_floor = gap_floor.value_or(kGapFloorRel * g.m);
  const double strict = kStrictGapFloorRel * g.m;
  for (const auto& miss : g.near_misses) {
    if (miss.gap < r.gap_floor) r.offenders.push_back(miss);
    if (miss.gap < strict) r.strict_offenders.push_back(miss);
  }
  r.pass = r.offenders.empty();
  r.pass_strict = r.strict_offenders.empty();
  return r;
}

std::vector<DiskRole> classify_rattlers(const ContactGraph& g) {
  const int n = g.n();
  std::vector<std::vector<int>> neighbors(n);
  for (const auto& b : g.disk_bonds) {
    neighbors[b.i].push_back(b.j);
    neighbors[b.j].push_back(b.i);
  }
  std::vector<std::vector<Wall>> walls(n);
  for (const auto& b : g.wall_bonds) walls[b.i].push_back(b.wall);

  std::vector<DiskRole> roles(n, DiskRole::Solid);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      if (roles[i] == DiskRole::Rattler) continue;
      std::vector<double> angles;
      for (int j : neighbors[i]) {
        if (roles[j] == DiskRole::Rattler) continue;
        const Point d = g.centers[j] - g.centers[i];
        angles.push_back(std::atan2(d.y, d.x));
      }
      for (Wall w : walls[i]) {
        const Point d = wall_normal(w);
        angles.push_back(std::atan2(d.y, d.x));
      }
      if (angles.size() < 3 || in_open_half_plane(angles)) {
        roles[i] = DiskRole::Rattler;
        changed = true;
      }
    }
  }
  return roles;
}

ValidityReport validate(const Packing& p, double overlap_tol_rel) {
  ValidityReport r;
  const int n = p.n();
  if (n < 2 || !(p.m > 0.0)) {
    r.valid = false;
    r.message = "packing needs n >= 2 and m > 0";
    return r;
  }
  for (const Point c : p.centers) {
    if (c.x < 0.0 || c.x > 1.0 || c.y < 0.0 || c.y > 1.0 || !std::isfinite(c.x) || !std::isfinite(c.y)) {
      r.in_bounds = false;
    }
  }
  r.span_error = std::abs(std::max(span_x(p.centers), span_y(p.centers)) - 1.0);
  r.normalized = r.span_error <= 1e-9;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double overlap = (p.m - distance(p.centers[i], p.centers[j])) / p.m;
      if (overlap > r.max_overlap) {
        r.max_overlap = overlap;
        r.worst_pair = std::pair{i, j};
      }
    }
  }
  const bool overlapping = r.max_overlap > overlap_tol_rel;
  r.valid = r.in_bounds && r.normalized && !overlapping;
  if (!r.in_bounds) {
    r.message = "center outside the unit square";
  } else if (!r.normalized) {
    r.message = "centers square side differs from 1";
  } else if (overlapping) {
    r.message = "disks " + std::to_string(r.worst_pair->first) + " and " +
                std::to_string(r.worst_pair->second) + " overlap";
  }
  return r;
}

Point apply_symmetry(Point p, int s) {
  Point q = (s & 4) ? Point{p.y, p.x} : p;
  if (s & 1) q.x = 1.0 - q.x;
  if (s & 2) q.y = 1.0 - q.y;
  return q;
}

Wall apply_symmetry(Wall w, int s) {
  Point mid{0.5, 0.5};
  switch (w) {
    case Wall::Left: mid.x = 0.0; break;
    case Wall::Right: mid.x = 1.0; break;
    case Wall::Bottom: mid.y = 0.0; break;
    case Wall::Top: mid.y = 1.0; break;
  }
  const Point q = apply_symmetry(mid, s);
  if (q.x == 0.0) return Wall::Left;
  if (q.x == 1.0) return Wall::Right;
  if (q.y == 0.0) return Wall::Bottom;
  return Wall::Top;
}

Packing apply_symmetry(const Packing& p, int s) {
  Packing out = p;
  for (auto& c : out.centers) c = apply_symmetry(c, s);
  return out;
}

}  // namespace diskpack
