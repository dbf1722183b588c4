#pragma once

// Series-level analysis: pattern m against challenger m per k, thresholds
// n0 / n1, the oblong crossover and pattern recognition for packings.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diskpack/billiards.hpp"
#include "diskpack/core.hpp"
#include "diskpack/polish.hpp"

namespace diskpack {

/// A challenger must exceed the pattern by more than this to beat it.
inline constexpr double kBeatMargin = 1e-10;

struct Challenger {
  double m = 0.0;
  std::string source;
};

struct SimulationBudget {
  SimParams params;
  std::vector<std::uint64_t> seeds;
};

/// Where challenger values come from. Table entries take precedence over a
/// simulation; the competing oblong pattern is always considered when enabled.
struct ChallengerSource {
  std::map<int, Challenger> table;  // by n
  std::optional<SimulationBudget> simulation;
  bool alternative_patterns = true;
};

struct SeriesRow {
  int k = 0;
  int n = 0;
  bool exists = false;
  std::optional<double> m_pattern;
  std::optional<double> m_challenger;
  std::string challenger_source;
  bool beaten = false;
  std::optional<double> overlap;  // half-k series only
};

struct SeriesReport {
  SeriesId series;
  std::vector<SeriesRow> rows;
  std::optional<int> n0;  // last member not beaten before n1
  std::optional<int> n1;  // first beaten member
};

/// Throws MissingChallenger when an existing member has no challenger value.
SeriesReport series_threshold(SeriesId series, int k_lo, int k_hi, const ChallengerSource& source);

bool pattern_beaten(double m_pattern, double m_challenger);

struct CrossoverRow {
  int k = 0;
  double m = 0.0;      // main oblong pattern
  double m_alt = 0.0;  // hexagonal-column alternative
  SeriesId winner;
};

/// Requires k_lo >= 4 (NotApplicable otherwise).
std::vector<CrossoverRow> oblong_crossover(int k_lo, int k_hi);

/// Tightened and polished configuration C, computed once per k with seed 1
/// and default parameters.
const RefineResult& tightened_config_C(int k);

struct SeriesMatch {
  SeriesId series;
  int k = 0;
  PatternVariant variant;
};

/// Identifies a pattern by m (within 1e-9) and by the solid-disk centers
/// under the eight square symmetries (within 1e-7).
std::optional<SeriesMatch> match_series(const Packing& p);

}  // namespace diskpack
