#include "diskpack/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace diskpack {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::UnsupportedSeries: return "UnsupportedSeries";
    case ErrorCode::PatternNotRepresentable: return "PatternNotRepresentable";
    case ErrorCode::InvalidVariant: return "InvalidVariant";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidStart: return "InvalidStart";
    case ErrorCode::StaleEvent: return "StaleEvent";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ContactMismatch: return "ContactMismatch";
    case ErrorCode::MissingChallenger: return "MissingChallenger";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

double norm(Point a) { return std::hypot(a.x, a.y); }
double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

const char* to_string(SeriesId id) {
  switch (id) {
    case SeriesId::Square: return "square";
    case SeriesId::SquareMinus1: return "square-1";
    case SeriesId::SquareMinus2: return "square-2";
    case SeriesId::SquareMinus3: return "square-3";
    case SeriesId::Oblong: return "oblong";
    case SeriesId::OblongAlt: return "oblong-alt";
    case SeriesId::HalfK: return "halfk";
  }
  return "?";
}

SeriesId parse_series(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (c != '_' && c != ' ') t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (t == "square" || t == "k2") return SeriesId::Square;
  if (t == "square-1" || t == "squareminus1" || t == "k2-1") return SeriesId::SquareMinus1;
  if (t == "square-2" || t == "squareminus2" || t == "k2-2") return SeriesId::SquareMinus2;
  if (t == "square-3" || t == "squareminus3" || t == "k2-3") return SeriesId::SquareMinus3;
  if (t == "oblong" || t == "k(k+1)") return SeriesId::Oblong;
  if (t == "oblong-alt" || t == "oblongalt") return SeriesId::OblongAlt;
  if (t == "halfk" || t == "half-k") return SeriesId::HalfK;
  throw Error(ErrorCode::ParseError, "unknown series '" + text + "'");
}

int series_count(SeriesId id, int k) {
  switch (id) {
    case SeriesId::Square: return k * k;
    case SeriesId::SquareMinus1: return k * k - 1;
    case SeriesId::SquareMinus2: return k * k - 2;
    case SeriesId::SquareMinus3: return k * k - 3;
    case SeriesId::Oblong:
    case SeriesId::OblongAlt: return k * (k + 1);
    case SeriesId::HalfK: return k * k + k / 2;
  }
  return 0;
}

std::string to_string(const PatternVariant& v) {
  if (v.empty()) return "-";
  std::ostringstream out;
  auto list = [&out](const std::vector<int>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << xs[i];
  };
  list(v.rows);
  out << (v.rows.size() > 1 ? ";" : ",");
  list(v.cols);
  return out.str();
}

PatternVariant parse_variant(const std::string& text) {
  std::vector<int> nums;
  bool semicolon = false;
  std::string token;
  auto flush = [&] {
    if (token.empty()) throw Error(ErrorCode::ParseError, "malformed variant '" + text + "'");
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw Error(ErrorCode::ParseError, "malformed variant '" + text + "'");
    }
    nums.push_back(value);
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || c == ';') {
      flush();
      semicolon = semicolon || c == ';';
    } else if (c != ' ' && c != '(' && c != ')') {
      token.push_back(c);
    }
  }
  flush();
  PatternVariant v;
  if (nums.size() == 2) {
    v.rows = {nums[0]};
    v.cols = {nums[1]};
  } else if (nums.size() == 4) {
    v.rows = {nums[0], nums[1]};
    v.cols = {nums[2], nums[3]};
  } else {
    throw Error(ErrorCode::ParseError, "variant needs 2 or 4 indices: '" + text + "'");
  }
  (void)semicolon;
  return v;
}

std::string describe(const Provenance& p) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "unknown"; }
    std::string operator()(const FromPattern& f) const {
      return std::string("pattern ") + to_string(f.series) + " k=" + std::to_string(f.k) +
             " variant=" + to_string(f.variant);
    }
    std::string operator()(const FromSimulation& f) const {
      return "simulated seed=" + std::to_string(f.seed) + " params=" + f.params_digest;
    }
    std::string operator()(const FromFile& f) const { return "loaded " + f.path; }
  };
  return std::visit(Visitor{}, p);
}

double span_x(std::span<const Point> centers) {
  auto [lo, hi] = std::minmax_element(centers.begin(), centers.end(),
                                      [](Point a, Point b) { return a.x < b.x; });
  return hi->x - lo->x;
}

double span_y(std::span<const Point> centers) {
  auto [lo, hi] = std::minmax_element(centers.begin(), centers.end(),
                                      [](Point a, Point b) { return a.y < b.y; });
  return hi->y - lo->y;
}

FrameTransform normalize(std::span<const Point> centers) {
  if (centers.size() < 2) {
    throw Error(ErrorCode::DegenerateInput, "need at least two centers");
  }
  double min_x = centers[0].x, min_y = centers[0].y;
  double max_x = min_x, max_y = min_y;
  for (Point c : centers) {
    min_x = std::min(min_x, c.x);
    min_y = std::min(min_y, c.y);
    max_x = std::max(max_x, c.x);
    max_y = std::max(max_y, c.y);
  }
  const double side = std::max(max_x - min_x, max_y - min_y);
  if (!(side > 0.0)) {
    throw Error(ErrorCode::DegenerateInput, "all centers coincide");
  }
  return FrameTransform{{min_x, min_y}, 1.0 / side};
}

Packing make_packing(std::span<const Point> centers, double diameter, Provenance provenance) {
  const FrameTransform t = normalize(centers);
  Packing p;
  p.m = diameter * t.scale;
  p.provenance = std::move(provenance);
  p.centers.reserve(centers.size());
  for (Point c : centers) {
    Point q = t.apply(c);
    // Snap the rounding residue at the square's edges.
    q.x = std::clamp(q.x, 0.0, 1.0);
    q.y = std::clamp(q.y, 0.0, 1.0);
    if (std::abs(q.x) < 1e-15) q.x = 0.0;
    if (std::abs(q.y) < 1e-15) q.y = 0.0;
    p.centers.push_back(q);
  }
  return p;
}

std::vector<PairGap> pair_distances(const Packing& p) {
  std::vector<PairGap> out;
  const int n = p.n();
  out.reserve(static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      out.push_back({i, j, distance(p.centers[i], p.centers[j]) - p.m});
    }
  }
  return out;
}

double min_pair_distance(std::span<const Point> centers) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      best = std::min(best, distance(centers[i], centers[j]));
    }
  }
  return best;
}

std::string format_sig14(double value) {
  if (value == 0.0 || !std::isfinite(value)) {
    return value == 0.0 ? "0.0000000000000" : (std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf"));
  }
  const int exponent = static_cast<int>(std::floor(std::log10(std::abs(value))));
  int decimals = std::max(0, 13 - exponent);
  char buf[128];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
  std::string s(buf, ptr);
  // Rounding may carry into a new leading digit (9.99.. -> 10.0..); trim one decimal.
  const auto digits = std::count_if(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  const auto leading_zeros = [&] {
    std::size_t z = 0;
    for (char c : s) {
      if (c == '-' || c == '.') continue;
      if (c != '0') break;
      ++z;
    }
    return z;
  }();
  if (static_cast<std::size_t>(digits) - leading_zeros > 14 && decimals > 0) {
    auto [p2, e2] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals - 1);
    s.assign(buf, p2);
  }
  return s;
}

}  // namespace diskpack
