#pragma once

// Text formats: packing files, the best-known table, SVG diagrams and
// series CSV.
//
// Packing file, version 1. One record per line, fields separated by single
// spaces, '#' starts a comment line:
//
//   version 1
//   n <count>
//   m <value>
//   provenance none | pattern <series> <k> <variant|-> | simulation <seed> <digest> | file <path>
//   center <i> <x> <y>                 (one per disk, i = 0..n-1)
//   contact disk <i> <j>               (optional section, i < j)
//   contact wall <i> <left|right|bottom|top>
//
// Reals are written with 14 significant digits.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diskpack/analysis.hpp"
#include "diskpack/billiards.hpp"
#include "diskpack/core.hpp"
#include "diskpack/series.hpp"

namespace diskpack {

std::string save_packing(const Packing& p, bool with_contacts);

/// Parses, validates and cross-checks a packing file. The provenance of the
/// result is FromFile{source}.
/// Throws ParseError, ValidationError or ContactMismatch.
Packing load_packing(const std::string& text, const std::string& source = "");

/// Provenance line stored in a packing file, without loading it.
Provenance stored_provenance(const std::string& text);

struct BestKnownEntry {
  int n = 0;
  double m = 0.0;
  // Simulated entries record how to rerun them; literature entries carry a note.
  bool simulated = true;
  std::uint64_t seed_base = 0;
  int seed_count = 0;
  std::uint64_t best_seed = 0;
  double growth_rate = 0.0;
  std::string params_digest;
  std::string note;

  std::string describe() const;
  /// Parameters of the run that produced the entry (defaults plus growth rate).
  SimParams params() const;
};

/// Data file grammar:
///   version 1
///   row <n> <m> simulated <seed_base> <seed_count> <best_seed> <growth_rate> <digest>
///   row <n> <m> literature <note ...>
struct BestKnownTable {
  std::map<int, BestKnownEntry> rows;

  /// Keeps the larger m for n; returns true when the table changed.
  bool merge(const BestKnownEntry& e);
  std::optional<BestKnownEntry> find(int n) const;
  std::map<int, Challenger> challengers() const;
};

std::string save_table(const BestKnownTable& t);
BestKnownTable load_table(const std::string& text);

struct SvgOptions {
  bool labels = false;
  double size = 1000.0;
};

/// Physical square of side 1 + m mapped to a size x size viewport; solid
/// disks grey, rattlers white, a black dot at every contact point.
std::string render_svg(const Packing& p, const ContactGraph& g, const SvgOptions& options = {});

std::string export_series_csv(const SeriesReport& r);

std::string read_file(const std::string& path);
/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace diskpack
