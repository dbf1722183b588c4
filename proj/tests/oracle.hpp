#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's solvers; values come from direct formulas in long double or from
// brute force over raw coordinates.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "diskpack/core.hpp"

namespace oracle {

using ld = long double;
inline const ld kPi = std::numbers::pi_v<ld>;

inline ld cos15() { return std::sqrt(std::sqrt(ld(3)) + 2) / 2; }

inline ld square_m(int k) { return ld(1) / (k - 1); }
inline ld square_minus1_m(int k) { return ld(1) / (k - 3 + 2 * cos15()); }
inline ld square_minus2_m(int k) { return ld(1) / (k - 5 + 4 * cos15()); }

inline ld oblong_cos(int k) { return (ld(k) * k - k + std::sqrt(ld(2) * k)) / (ld(k) * k + 1); }
inline ld oblong_m(int k) { return 1 / (k * oblong_cos(k)); }

// tan a = k / (2(k-1))  =>  cos a = 2(k-1) / sqrt(k^2 + 4(k-1)^2)
inline ld halfk_m(int k) {
  const ld h = std::sqrt(ld(k) * k + ld(4) * (k - 1) * (k - 1));
  return h / (k * 2 * ld(k - 1));
}

// Regula falsi in long double on the alternative-pattern angle equation.
inline ld oblong_alt_beta(int k) {
  auto f = [k](ld b) {
    return k * std::cos(b) + std::cos(b + kPi / 3) - (k - 1) * std::sin(b + kPi / 3) - std::sin(b);
  };
  ld lo = 0, hi = kPi / 6;
  if (f(hi) > 0) hi = kPi / 3;
  ld flo = f(lo), fhi = f(hi);
  for (int i = 0; i < 400; ++i) {
    const ld mid = (lo * fhi - hi * flo) / (fhi - flo);
    const ld fm = f(mid);
    if (fm == 0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
      fhi /= 2;  // Illinois modification
    } else {
      hi = mid;
      fhi = fm;
      flo /= 2;
    }
  }
  return (lo + hi) / 2;
}

inline ld oblong_alt_m(int k) {
  const ld b = oblong_alt_beta(k);
  return 1 / (k * std::cos(b) + std::cos(b + kPi / 3));
}

// m of raw centers in diameter units: 1 / side of the bounding square.
inline double m_of_raw(const std::vector<diskpack::Point>& c, double diameter) {
  double x0 = c[0].x, x1 = c[0].x, y0 = c[0].y, y1 = c[0].y;
  for (auto p : c) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return diameter / std::max(x1 - x0, y1 - y0);
}

// Smallest distance over all pairs, by brute force.
inline double min_distance(const std::vector<diskpack::Point>& c) {
  double best = INFINITY;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) best = std::min(best, std::hypot(c[i].x - c[j].x, c[i].y - c[j].y));
  return best;
}

// Number of pairs at distance m within tol, by brute force.
inline int touching_pairs(const diskpack::Packing& p, double tol) {
  int count = 0;
  for (int i = 0; i < p.n(); ++i)
    for (int j = i + 1; j < p.n(); ++j)
      if (std::abs(std::hypot(p.centers[i].x - p.centers[j].x, p.centers[i].y - p.centers[j].y) - p.m) < tol) ++count;
  return count;
}

}  // namespace oracle
