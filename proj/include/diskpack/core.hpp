#pragma once

// Domain types and geometric primitives for packings of equal disks in a
// square. All coordinates live in the centers-square frame: the smallest
// axis-aligned square containing the disk centers is mapped to [0,1]^2, and
// m is the disk diameter measured in units of that square's side.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace diskpack {

enum class ErrorCode {
  DegenerateInput,
  UnsupportedSeries,
  PatternNotRepresentable,
  InvalidVariant,
  NotApplicable,
  NoConvergence,
  InvalidStart,
  StaleEvent,
  SingularSystem,
  ContactMismatch,
  MissingChallenger,
  ParseError,
  ValidationError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double norm(Point a);
double distance(Point a, Point b);

enum class SeriesId {
  Square,        // n = k^2
  SquareMinus1,  // n = k^2 - 1
  SquareMinus2,  // n = k^2 - 2
  SquareMinus3,  // n = k^2 - 3
  Oblong,        // n = k(k+1)
  OblongAlt,     // n = k(k+1), hexagonal-column alternative
  HalfK,         // n = k^2 + floor(k/2)
};

inline constexpr SeriesId kAllSeries[] = {
    SeriesId::Square, SeriesId::SquareMinus1, SeriesId::SquareMinus2,
    SeriesId::SquareMinus3, SeriesId::Oblong, SeriesId::OblongAlt,
    SeriesId::HalfK};

const char* to_string(SeriesId id);
/// Accepts the lowercase CLI spellings ("square", "k2-1", "squareminus1",
/// "oblong", "oblong-alt", "halfk", ...). Throws ParseError otherwise.
SeriesId parse_series(const std::string& text);

/// Number of disks in member k of a series.
int series_count(SeriesId id, int k);

/// Positions of shifted rows and columns, 1-based and counted from the top
/// left corner. Empty for series without placement choices.
struct PatternVariant {
  std::vector<int> rows;
  std::vector<int> cols;

  bool empty() const { return rows.empty() && cols.empty(); }
  friend bool operator==(const PatternVariant&, const PatternVariant&) = default;
};

std::string to_string(const PatternVariant& v);
/// Parses "i,j" or "i1,i2;j1,j2".
PatternVariant parse_variant(const std::string& text);

struct FromPattern {
  SeriesId series;
  int k;
  PatternVariant variant;
};
struct FromSimulation {
  std::uint64_t seed;
  std::string params_digest;
};
struct FromFile {
  std::string path;
};
using Provenance = std::variant<std::monostate, FromPattern, FromSimulation, FromFile>;

std::string describe(const Provenance& p);

struct Packing {
  double m = 0.0;
  std::vector<Point> centers;
  Provenance provenance;

  int n() const { return static_cast<int>(centers.size()); }
};

/// Starting configuration for the billiards engine. Coordinates and diameter
/// are in the engine's frame: the physical unit square, centers confined to
/// [d/2, 1 - d/2].
struct Configuration {
  double diameter = 0.0;
  std::vector<Point> centers;
  bool overlap_allowed = false;

  int n() const { return static_cast<int>(centers.size()); }
};

/// Translate-then-scale map onto the centers square. Never rotates.
struct FrameTransform {
  Point offset;        // subtracted first
  double scale = 1.0;  // then multiplied

  Point apply(Point p) const { return scale * (p - offset); }
};

/// Maps the smallest axis-aligned square enclosing `centers` onto [0,1]^2,
/// anchored at the lower-left corner of the bounding box.
FrameTransform normalize(std::span<const Point> centers);

/// Applies normalize() and rescales the diameter accordingly.
Packing make_packing(std::span<const Point> centers, double diameter, Provenance provenance = {});

struct PairGap {
  int i;
  int j;
  double gap;  // distance - m
};

/// All pairwise gaps ordered by (i, j).
std::vector<PairGap> pair_distances(const Packing& p);

/// Smallest pairwise distance; +inf when n < 2.
double min_pair_distance(std::span<const Point> centers);

double span_x(std::span<const Point> centers);
double span_y(std::span<const Point> centers);

/// Rounds to 14 significant digits in fixed notation using the C locale.
std::string format_sig14(double value);

}  // namespace diskpack
