#include "diskpack/polish.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace diskpack {

namespace {

struct System {
  std::vector<int> unknown_of;  // disk -> first unknown index, -1 if frozen
  std::vector<DiskBond> bonds;
  std::vector<WallBond> walls;
  int unknowns = 0;
};

System build_system(const ContactGraph& g, const std::vector<DiskRole>& roles) {
  System s;
  s.unknown_of.assign(g.n(), -1);
  for (int i = 0; i < g.n(); ++i) {
    if (roles[i] == DiskRole::Solid) {
      s.unknown_of[i] = s.unknowns;
      s.unknowns += 2;
    }
  }
  s.unknowns += 1;  // m
  for (const auto& b : g.disk_bonds) {
    if (roles[b.i] == DiskRole::Solid && roles[b.j] == DiskRole::Solid) s.bonds.push_back(b);
  }
  for (const auto& w : g.wall_bonds) {
    if (roles[w.i] == DiskRole::Solid) s.walls.push_back(w);
  }
  return s;
}

void evaluate(const System& s, const std::vector<Point>& c, double m, Eigen::VectorXd& r,
              Eigen::MatrixXd& jac) {
  const int rows = static_cast<int>(s.bonds.size() + s.walls.size());
  const int mcol = s.unknowns - 1;
  r.resize(rows);
  jac.setZero(rows, s.unknowns);
  int row = 0;
  for (const auto& b : s.bonds) {
    const Point d = c[b.j] - c[b.i];
    const double len = norm(d);
    r(row) = len - m;
    const Point u = len > 0.0 ? (1.0 / len) * d : Point{1.0, 0.0};
    const int a = s.unknown_of[b.i];
    const int bb = s.unknown_of[b.j];
    jac(row, a) = -u.x;
    jac(row, a + 1) = -u.y;
    jac(row, bb) = u.x;
    jac(row, bb + 1) = u.y;
    jac(row, mcol) = -1.0;
    ++row;
  }
  for (const auto& w : s.walls) {
    const int a = s.unknown_of[w.i];
    switch (w.wall) {
      case Wall::Left: r(row) = c[w.i].x; jac(row, a) = 1.0; break;
      case Wall::Right: r(row) = c[w.i].x - 1.0; jac(row, a) = 1.0; break;
      case Wall::Bottom: r(row) = c[w.i].y; jac(row, a + 1) = 1.0; break;
      case Wall::Top: r(row) = c[w.i].y - 1.0; jac(row, a + 1) = 1.0; break;
    }
    ++row;
  }
}

double clearance(const Packing& p, int i, Point at) {
  double best = std::min({at.x, 1.0 - at.x, at.y, 1.0 - at.y});
  for (int j = 0; j < p.n(); ++j) {
    if (j != i) best = std::min(best, distance(at, p.centers[j]) - p.m);
  }
  return best;
}

}  // namespace

void recenter_rattlers(Packing& p, const std::vector<DiskRole>& roles) {
  static constexpr Point kDirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                                    {0.7071067811865476, 0.7071067811865476},
                                    {-0.7071067811865476, 0.7071067811865476},
                                    {0.7071067811865476, -0.7071067811865476},
                                    {-0.7071067811865476, -0.7071067811865476}};
  for (int i = 0; i < p.n(); ++i) {
    if (roles[i] != DiskRole::Rattler) continue;
    Point at = p.centers[i];
    double best = clearance(p, i, at);
    for (double step = 0.1 * p.m; step > 1e-12 * p.m;) {
      bool moved = false;
      for (Point d : kDirs) {
        const Point trial = at + step * d;
        const double c = clearance(p, i, trial);
        if (c > best) {
          best = c;
          at = trial;
          moved = true;
          break;
        }
      }
      if (!moved) step *= 0.5;
    }
    p.centers[i] = at;
  }
}

Packing polish(const Packing& p, const ContactGraph& contacts, const PolishOptions& options,
               PolishReport* report) {
  const std::vector<DiskRole> roles =
      contacts.roles.size() == static_cast<std::size_t>(p.n()) ? contacts.roles : classify_rattlers(contacts);
  const System sys = build_system(contacts, roles);
  const int rows = static_cast<int>(sys.bonds.size() + sys.walls.size());
  if (rows == 0 || sys.unknowns == 1) {
    throw Error(ErrorCode::SingularSystem, "no bonds among solid disks");
  }

  PolishReport rep;
  rep.m_before = p.m;
  rep.unknowns = sys.unknowns;
  rep.equations = rows;

  std::vector<Point> c = p.centers;
  double m = p.m;
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  double previous = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int iter = 0;; ++iter) {
    evaluate(sys, c, m, r, jac);
    const double res = r.cwiseAbs().maxCoeff() / m;
    rep.residual_history.push_back(res);
    if (res < options.residual_tol_rel) {
      converged = true;
      break;
    }
    if (iter >= options.max_iterations || (iter >= 3 && res > 0.9 * previous)) break;
    previous = res;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-9);
    if (iter == 0) {
      rep.rank = static_cast<int>(svd.rank());
      // m is pinned iff its unit vector lies in the row space of the Jacobian.
      const double in_row_space =
          svd.matrixV().row(sys.unknowns - 1).head(rep.rank).squaredNorm();
      if (in_row_space < 1.0 - 1e-8) {
        throw Error(ErrorCode::SingularSystem, "bonds do not determine m");
      }
    }
    const Eigen::VectorXd step = svd.solve(-r);
    for (int i = 0; i < p.n(); ++i) {
      const int a = sys.unknown_of[i];
      if (a < 0) continue;
      c[i].x += step(a);
      c[i].y += step(a + 1);
    }
    m += step(sys.unknowns - 1);
    ++rep.iterations;
  }
  if (!converged) {
    throw Error(ErrorCode::ContactMismatch,
                "bond equations are inconsistent (residual " + std::to_string(rep.residual_history.back()) +
                    " m)");
  }
  if (std::abs(m - p.m) > options.max_m_change) {
    throw Error(ErrorCode::ContactMismatch, "m moved by " + std::to_string(m - p.m));
  }

  Packing out = p;
  out.m = m;
  for (auto& q : c) {
    if (std::abs(q.x) < 1e-15) q.x = 0.0;
    if (std::abs(q.y) < 1e-15) q.y = 0.0;
    if (std::abs(q.x - 1.0) < 1e-15) q.x = 1.0;
    if (std::abs(q.y - 1.0) < 1e-15) q.y = 1.0;
  }
  out.centers = std::move(c);
  if (options.recenter_rattlers) recenter_rattlers(out, roles);

  const double tol = kBondTolRel * m;
  for (int i = 0; i < out.n(); ++i) {
    const Point q = out.centers[i];
    if (q.x < -tol || q.x > 1.0 + tol || q.y < -tol || q.y > 1.0 + tol) {
      throw Error(ErrorCode::ContactMismatch, "disk " + std::to_string(i) + " left the centers square");
    }
    for (int j = i + 1; j < out.n(); ++j) {
      if (distance(q, out.centers[j]) < m - tol && !contacts.has_bond(i, j)) {
        throw Error(ErrorCode::ContactMismatch,
                    "unbonded disks " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      }
    }
  }
  rep.m_after = m;
  if (report) *report = rep;
  return out;
}

RefineResult refine_jammed(const Packing& p, const PolishOptions& options) {
  static constexpr double kLadder[] = {1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5};
  std::optional<RefineResult> best;
  std::optional<Error> last;
  for (double rel : kLadder) {
    const ContactGraph detected = contact_graph(p, rel * p.m);
    try {
      RefineResult out;
      out.packing = polish(p, detected, options, &out.report);
      out.contacts = contact_graph(out.packing);
      out.detection_tol = rel * p.m;
      bool kept = true;
      for (const auto& b : detected.disk_bonds) {
        if (detected.roles[b.i] == DiskRole::Solid && detected.roles[b.j] == DiskRole::Solid) {
          kept = kept && out.contacts.has_bond(b.i, b.j);
        }
      }
      if (!kept || !well_formed_gap_check(out.contacts).pass) {
        last = Error(ErrorCode::ContactMismatch, "contact set not well separated at tolerance " + std::to_string(rel));
        continue;
      }
      // An unfinished run can polish onto a neighbouring structure with one
      // contact missing; every clean rung is a valid packing, so keep the largest.
      if (!best || out.packing.m > best->packing.m) best = std::move(out);
    } catch (const Error& e) {
      last = e;
    }
  }
  if (best) return *best;
  throw *last;
}

}  // namespace diskpack
