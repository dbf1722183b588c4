#include "diskpack/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "diskpack/analysis.hpp"
#include "diskpack/billiards.hpp"
#include "diskpack/polish.hpp"

namespace diskpack {

namespace {

constexpr double kPi = std::numbers::pi;
const double kCos15 = std::cos(kPi / 12.0);
const double kSin15 = std::sin(kPi / 12.0);
const double kSqrt3 = std::sqrt(3.0);

std::string kstr(int k) { return "k = " + std::to_string(k); }

double oblong_cos(int k) {
  const double kk = k;
  return (kk * kk - kk + std::sqrt(2.0 * kk)) / (kk * kk + 1.0);
}

double halfk_angle(int k) { return std::atan(k / (2.0 * (k - 1))); }

double oblong_alt_width(int k, double b) { return k * std::cos(b) + std::cos(b + kPi / 3.0); }

double oblong_alt_slope(int k, double b) {
  return -k * std::sin(b) - std::sin(b + kPi / 3.0) - (k - 1) * std::cos(b + kPi / 3.0) - std::cos(b);
}

void require_k(int k, int lo) {
  if (k < lo) throw Error(ErrorCode::PatternNotRepresentable, "need k >= " + std::to_string(lo) + ", got " + kstr(k));
}

// Line coordinates along one axis: unit gaps between straight lines, cos 15
// on either side of a shifted line.
std::vector<double> line_positions(int k, const std::vector<int>& shifted) {
  auto is_shifted = [&](int t) { return std::find(shifted.begin(), shifted.end(), t) != shifted.end(); };
  std::vector<double> pos(k, 0.0);
  for (int t = 1; t < k; ++t) pos[t] = pos[t - 1] + ((is_shifted(t) || is_shifted(t - 1)) ? kCos15 : 1.0);
  return pos;
}

// rows / cols are 0-based, rows counted from the bottom; rows[q] is paired
// with cols[q]. Every disk on a shifted line leans by sin 15 toward the
// crossing with its partner line.
std::vector<Point> shifted_lines(int k, const std::vector<int>& rows, const std::vector<int>& cols) {
  const std::vector<double> X = line_positions(k, cols);
  const std::vector<double> Y = line_positions(k, rows);
  auto row_at = [&](int r) { return std::find(rows.begin(), rows.end(), r) != rows.end(); };
  auto col_at = [&](int c) { return std::find(cols.begin(), cols.end(), c) != cols.end(); };
  auto partner_of_row = [&](int r) { return cols[std::find(rows.begin(), rows.end(), r) - rows.begin()]; };
  auto partner_of_col = [&](int c) { return rows[std::find(cols.begin(), cols.end(), c) - cols.begin()]; };

  std::vector<Point> out;
  for (int b = k - 1; b >= 0; --b) {
    if (row_at(b)) continue;
    for (int a = 0; a < k; ++a) {
      if (!col_at(a)) out.push_back({X[a], Y[b]});
    }
  }
  for (int r : rows) {
    const int g = partner_of_row(r);
    for (int a = 0; a < k; ++a) {
      if (!col_at(a)) out.push_back({X[a] + (a < g ? kSin15 : -kSin15), Y[r]});
    }
  }
  for (int g : cols) {
    const int r = partner_of_col(g);
    for (int b = k - 1; b >= 0; --b) {
      if (!row_at(b)) out.push_back({X[g], Y[b] + (b < r ? kSin15 : -kSin15)});
    }
  }
  // Crossings of lines that are not partners get one extra disk.
  for (int r : rows) {
    for (int g : cols) {
      if (partner_of_row(r) == g) continue;
      const double sx = g < partner_of_row(r) ? kSin15 : -kSin15;
      const double sy = r < partner_of_col(g) ? kSin15 : -kSin15;
      out.push_back({X[g] + sx, Y[r] + sy});
    }
  }
  return out;
}

void check_variant(SeriesId series, int k, const PatternVariant& v) {
  const std::size_t count = series == SeriesId::SquareMinus1 ? 1 : 2;
  if (v.rows.size() != count || v.cols.size() != count) {
    throw Error(ErrorCode::InvalidVariant, std::string(to_string(series)) + " needs " + std::to_string(count) +
                                               " row and column indices, got '" + to_string(v) + "'");
  }
  for (const auto* list : {&v.rows, &v.cols}) {
    for (int i : *list) {
      if (i <= 1 || i >= k) {
        throw Error(ErrorCode::InvalidVariant,
                    "index " + std::to_string(i) + " outside 2.." + std::to_string(k - 1) + " in '" + to_string(v) + "'");
      }
    }
    if (count == 2 && (*list)[1] < (*list)[0] + 2) {
      throw Error(ErrorCode::InvalidVariant, "shifted lines must be increasing and non-adjacent: '" + to_string(v) + "'");
    }
  }
}

std::vector<Point> oblong_centers(int k) {
  const double ca = oblong_cos(k);
  const double sa = std::sqrt(1.0 - ca * ca);
  std::vector<Point> out;
  auto at = [&](int c, int j) { return Point{c * ca, j + ((c % 2) ? sa : 0.0)}; };
  // The first two disks are the top-left pair kept apart because alpha < 30.
  out.push_back(at(0, k - 1));
  out.push_back(at(1, k - 2));
  for (int c = 0; c <= k; ++c) {
    for (int j = k - 1; j >= 0; --j) {
      if ((c == 0 && j == k - 1) || (c == 1 && j == k - 2)) continue;
      out.push_back(at(c, j));
    }
  }
  return out;
}

std::vector<Point> oblong_alt_centers(int k) {
  const double b = oblong_alt_angle(k);
  const double cb = std::cos(b), sb = std::sin(b);
  const double c60 = std::cos(b + kPi / 3.0), s60 = std::sin(b + kPi / 3.0);
  std::vector<Point> out;
  for (int i = 0; i <= k; ++i) {
    for (int j = k - 1; j >= 0; --j) {
      out.push_back({i * cb + ((j % 2) ? c60 : 0.0), j * s60 + ((i % 2) ? sb : 0.0)});
    }
  }
  return out;
}

Packing confirm(const std::vector<Point>& centers, Provenance prov) {
  Packing p = make_packing(centers, 1.0, std::move(prov));
  return polish(p, contact_graph(p));
}

}  // namespace

Existence exists_pattern(SeriesId series, int k) {
  auto yes = [](std::string why) { return Existence{true, std::move(why)}; };
  auto no = [](std::string why) { return Existence{false, std::move(why)}; };
  switch (series) {
    case SeriesId::Square:
      return k >= 2 ? yes("square grid") : no("needs k >= 2");
    case SeriesId::SquareMinus1:
      return k >= 3 ? yes("one shifted row and column") : no("needs k >= 3");
    case SeriesId::SquareMinus2:
      return k >= 5 ? yes("two non-adjacent shifted rows and columns") : no("needs k >= 5");
    case SeriesId::SquareMinus3:
      return k >= 5 ? yes("tightened schematic start") : no("needs k >= 5");
    case SeriesId::Oblong:
    case SeriesId::OblongAlt: {
      if (k < 2) return no("needs k >= 2");
      const double ca = oblong_cos(k);
      return ca >= kSqrt3 / 2.0 ? yes("cos(alpha) = " + format_sig14(ca) + " >= sqrt(3)/2")
                                : no("cos(alpha) = " + format_sig14(ca) + " < sqrt(3)/2");
    }
    case SeriesId::HalfK: {
      if (k < 2) return no("needs k >= 2");
      const double sa = std::sin(halfk_angle(k));
      return sa >= 0.5 ? yes("sin(alpha) = " + format_sig14(sa) + " >= 1/2")
                       : no("sin(alpha) = " + format_sig14(sa) + " < 1/2, same-column disks overlap");
    }
  }
  return no("unknown series");
}

double oblong_alt_residual(int k, double b) {
  return oblong_alt_width(k, b) - (k - 1) * std::sin(b + kPi / 3.0) - std::sin(b);
}

double oblong_alt_angle(int k) {
  if (k < 2) throw Error(ErrorCode::PatternNotRepresentable, "need k >= 2, got " + kstr(k));
  double lo = 0.0;
  double hi = kPi / 6.0;
  if (oblong_alt_residual(k, hi) > 0.0) hi = kPi / 3.0;  // small k: the root sits above 30 degrees
  while (hi - lo > 1e-16) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (oblong_alt_residual(k, mid) > 0.0 ? lo : hi) = mid;
  }
  double b = 0.5 * (lo + hi);
  for (int i = 0; i < 2; ++i) b -= oblong_alt_residual(k, b) / oblong_alt_slope(k, b);
  return b;
}

SeriesFormula m_pattern(SeriesId series, int k) {
  if (series == SeriesId::SquareMinus3) {
    throw Error(ErrorCode::UnsupportedSeries, "the k^2 - 3 series has no closed form; tighten build_config_C instead");
  }
  if (k < 2) throw Error(ErrorCode::PatternNotRepresentable, "need k >= 2, got " + kstr(k));
  SeriesFormula f;
  f.series = series;
  f.k = k;
  f.existence = exists_pattern(series, k);
  switch (series) {
    case SeriesId::Square:
      f.m = 1.0 / (k - 1);
      break;
    case SeriesId::SquareMinus1:
      f.m = 1.0 / (k - 3 + std::sqrt(2.0 + kSqrt3));
      f.residual = 1.0 / f.m - (k - 3 + 2.0 * kCos15);
      break;
    case SeriesId::SquareMinus2:
      f.m = 1.0 / (k - 5 + 2.0 * std::sqrt(2.0 + kSqrt3));
      f.residual = 1.0 / f.m - (k - 5 + 4.0 * kCos15);
      break;
    case SeriesId::Oblong: {
      const double ca = oblong_cos(k);
      const double a = std::acos(ca);
      f.angle = a;
      f.m = 1.0 / (k * ca);
      f.residual = k * ca - (k - 1) - std::sin(a);
      break;
    }
    case SeriesId::OblongAlt: {
      const double b = oblong_alt_angle(k);
      f.angle = b;
      f.m = 1.0 / oblong_alt_width(k, b);
      f.residual = oblong_alt_residual(k, b);
      break;
    }
    case SeriesId::HalfK: {
      const double a = halfk_angle(k);
      f.angle = a;
      f.m = 1.0 / (k * std::cos(a));
      f.residual = k * std::cos(a) - 2.0 * (k - 1) * std::sin(a);
      break;
    }
    case SeriesId::SquareMinus3:
      break;
  }
  return f;
}

std::vector<PatternVariant> enumerate_variants(SeriesId series, int k) {
  std::vector<PatternVariant> out;
  if (series == SeriesId::SquareMinus1) {
    for (int i = 2; i <= k - 1; ++i)
      for (int j = 2; j <= k - 1; ++j) out.push_back({{i}, {j}});
  } else if (series == SeriesId::SquareMinus2) {
    std::vector<std::vector<int>> pairs;
    for (int a = 2; a <= k - 1; ++a)
      for (int b = a + 2; b <= k - 1; ++b) pairs.push_back({a, b});
    for (const auto& r : pairs)
      for (const auto& c : pairs) out.push_back({r, c});
  } else {
    throw Error(ErrorCode::UnsupportedSeries, std::string(to_string(series)) + " has no placement variants");
  }
  return out;
}

PatternVariant canonical_variant(SeriesId series, int k) {
  if (series == SeriesId::SquareMinus1) return {{2}, {2}};
  if (series == SeriesId::SquareMinus2) return {{2, 4}, {2, 4}};
  (void)k;
  return {};
}

Packing build_pattern(SeriesId series, int k, const PatternVariant& variant) {
  if (series == SeriesId::SquareMinus3) {
    throw Error(ErrorCode::UnsupportedSeries, "the k^2 - 3 pattern comes from tightening build_config_C");
  }
  const Existence e = exists_pattern(series, k);
  if (!e.exists) {
    throw Error(ErrorCode::PatternNotRepresentable, std::string(to_string(series)) + " at " + kstr(k) + ": " + e.reason);
  }
  const bool has_variants = series == SeriesId::SquareMinus1 || series == SeriesId::SquareMinus2;
  if (!has_variants && !variant.empty()) {
    throw Error(ErrorCode::InvalidVariant, std::string(to_string(series)) + " takes no variant");
  }
  const PatternVariant v = variant.empty() ? canonical_variant(series, k) : variant;
  FromPattern prov{series, k, v};

  switch (series) {
    case SeriesId::Square: {
      std::vector<Point> c;
      for (int j = k - 1; j >= 0; --j)
        for (int i = 0; i < k; ++i) c.push_back({double(i), double(j)});
      return make_packing(c, 1.0, prov);
    }
    case SeriesId::SquareMinus1:
    case SeriesId::SquareMinus2: {
      check_variant(series, k, v);
      // Variant rows count from the top; the builder works bottom-up.
      std::vector<int> rows, cols;
      for (auto it = v.rows.rbegin(); it != v.rows.rend(); ++it) rows.push_back(k - *it);
      for (int j : v.cols) cols.push_back(j - 1);
      return confirm(shifted_lines(k, rows, cols), prov);
    }
    case SeriesId::Oblong:
      return confirm(oblong_centers(k), prov);
    case SeriesId::OblongAlt:
      return confirm(oblong_alt_centers(k), prov);
    case SeriesId::HalfK:
      return confirm(ideal_halfk_centers(k), prov);
    case SeriesId::SquareMinus3:
      break;
  }
  throw Error(ErrorCode::UnsupportedSeries, "unknown series");
}

std::vector<Point> ideal_halfk_centers(int k) {
  if (k < 2) throw Error(ErrorCode::PatternNotRepresentable, "need k >= 2, got " + kstr(k));
  const double a = halfk_angle(k);
  const double ca = std::cos(a), sa = std::sin(a);
  std::vector<Point> out;
  for (int c = 0; c <= k; ++c) {
    if (c % 2 == 0) {
      for (int j = k - 1; j >= 0; --j) out.push_back({c * ca, 2.0 * j * sa});
    } else {
      for (int j = k - 2; j >= 0; --j) out.push_back({c * ca, (2.0 * j + 1.0) * sa});
    }
  }
  return out;
}

Packing ideal_halfk_packing(int k) {
  return make_packing(ideal_halfk_centers(k), 1.0, FromPattern{SeriesId::HalfK, k, {}});
}

double halfk_overlap(int k) {
  if (k < 2) throw Error(ErrorCode::NotApplicable, "half-k geometry needs k >= 2, got " + kstr(k));
  if (exists_pattern(SeriesId::HalfK, k).exists) return 0.0;
  const auto c = ideal_halfk_centers(k);
  return std::max(0.0, 1.0 - min_pair_distance(c));
}

Configuration schematic_configuration(SeriesId series, int k, const PatternVariant& variant, double slack) {
  if (!(slack >= 0.0 && slack < 0.5)) throw Error(ErrorCode::InvalidStart, "slack must lie in [0, 0.5)");
  Configuration cfg = to_configuration(build_pattern(series, k, variant));
  cfg.diameter *= 1.0 - slack;
  return cfg;
}

Configuration build_config_C(int k) {
  require_k(k, 4);
  const double a = k - 3;       // column / row holding the block's neighbors
  const double h = kSqrt3 / 2;  // hexagonal layer spacing
  std::vector<Point> c;
  for (int j = k - 4; j >= 0; --j)
    for (int i = 0; i <= k - 4; ++i) c.push_back({double(i), double(j)});
  for (int j = k - 3; j >= 0; --j) c.push_back({a, double(j)});
  for (int j = k - 4; j >= 0; --j) c.push_back({a + h, j + 0.5});
  for (int j = k - 2; j >= 0; --j) c.push_back({a + 2 * h, double(j)});
  for (int i = 0; i <= k - 4; ++i) c.push_back({double(i), a});
  for (int i = 0; i <= k - 4; ++i) c.push_back({i + 0.5, a + h});
  for (int i = 0; i <= k - 2; ++i) c.push_back({double(i), a + 2 * h});
  // The pocket next to the top right corner leaves about 0.05 diameters of play.
  const double loose = k - 2.265;
  c.push_back({loose, loose});

  // Touching hexagonal chains would span the square and freeze the start, so
  // the diameter is loosened by 1% to let the engine rearrange the layers.
  const double side = a + 2 * h + 1.0;
  Configuration cfg;
  cfg.diameter = 0.99 / side;
  for (const Point q : c) cfg.centers.push_back({(q.x + 0.5) / side, (q.y + 0.5) / side});
  return cfg;
}

}  // namespace diskpack
