#include "diskpack/series.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "diskpack/analysis.hpp"
#include "diskpack/patterns.hpp"

namespace diskpack {

namespace {

std::optional<SeriesId> competing_pattern(SeriesId s) {
  if (s == SeriesId::Oblong) return SeriesId::OblongAlt;
  if (s == SeriesId::OblongAlt) return SeriesId::Oblong;
  return std::nullopt;
}

double pattern_m(SeriesId series, int k) {
  if (series == SeriesId::SquareMinus3) return tightened_config_C(k).packing.m;
  return m_pattern(series, k).m;
}

Challenger simulate(int n, const SimulationBudget& budget) {
  const BestOfResult r = best_of(n, budget.params, budget.seeds);
  double m = r.best.packing.m;
  try {
    m = refine_jammed(r.best.packing).packing.m;
  } catch (const Error&) {
    // keep the raw simulation value
  }
  return {m, "simulated seed " + std::to_string(r.best.seed) + " of " + std::to_string(budget.seeds.size())};
}

bool same_solid_layout(const Packing& candidate, const std::vector<DiskRole>& cand_roles, const Packing& p,
                       const std::vector<DiskRole>& roles) {
  constexpr double kTol = 1e-7;
  std::vector<Point> mine;
  for (int i = 0; i < p.n(); ++i) {
    if (roles[i] == DiskRole::Solid) mine.push_back(p.centers[i]);
  }
  std::vector<Point> theirs;
  for (int i = 0; i < candidate.n(); ++i) {
    if (cand_roles[i] == DiskRole::Solid) theirs.push_back(candidate.centers[i]);
  }
  if (mine.size() != theirs.size()) return false;
  for (int s = 0; s < 8; ++s) {
    std::vector<bool> used(mine.size(), false);
    bool all = true;
    for (const Point q : theirs) {
      const Point t = apply_symmetry(q, s);
      bool found = false;
      for (std::size_t i = 0; i < mine.size() && !found; ++i) {
        if (!used[i] && distance(t, mine[i]) < kTol) used[i] = found = true;
      }
      if (!found) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

bool pattern_beaten(double m_pattern, double m_challenger) { return m_challenger > m_pattern + kBeatMargin; }

SeriesReport series_threshold(SeriesId series, int k_lo, int k_hi, const ChallengerSource& source) {
  SeriesReport report;
  report.series = series;
  for (int k = std::max(k_lo, 2); k <= k_hi; ++k) {
    SeriesRow row;
    row.k = k;
    row.n = series_count(series, k);
    row.exists = exists_pattern(series, k).exists;
    if (series == SeriesId::HalfK) row.overlap = halfk_overlap(k);
    if (series != SeriesId::SquareMinus3) row.m_pattern = m_pattern(series, k).m;
    if (row.exists) {
      row.m_pattern = pattern_m(series, k);
      std::optional<Challenger> best;
      auto offer = [&best](Challenger c) {
        if (!best || c.m > best->m) best = std::move(c);
      };
      if (auto it = source.table.find(row.n); it != source.table.end()) {
        offer(it->second);
      } else if (source.simulation) {
        offer(simulate(row.n, *source.simulation));
      }
      if (source.alternative_patterns) {
        if (auto other = competing_pattern(series); other && exists_pattern(*other, k).exists) {
          offer({m_pattern(*other, k).m, std::string(to_string(*other)) + " pattern"});
        }
      }
      if (!best) {
        throw Error(ErrorCode::MissingChallenger, "no challenger for n = " + std::to_string(row.n));
      }
      row.m_challenger = best->m;
      row.challenger_source = best->source;
      row.beaten = pattern_beaten(*row.m_pattern, best->m);
    }
    report.rows.push_back(row);
  }
  for (const auto& row : report.rows) {
    if (row.exists && row.beaten) {
      report.n1 = row.n;
      break;
    }
  }
  for (const auto& row : report.rows) {
    if (!row.exists || row.beaten) continue;
    if (report.n1 && row.n > *report.n1) break;
    report.n0 = row.n;
  }
  return report;
}

std::vector<CrossoverRow> oblong_crossover(int k_lo, int k_hi) {
  if (k_lo < 4) throw Error(ErrorCode::NotApplicable, "the oblong patterns exist only for k >= 4");
  std::vector<CrossoverRow> rows;
  for (int k = k_lo; k <= k_hi; ++k) {
    CrossoverRow r;
    r.k = k;
    r.m = m_pattern(SeriesId::Oblong, k).m;
    r.m_alt = m_pattern(SeriesId::OblongAlt, k).m;
    r.winner = r.m_alt > r.m ? SeriesId::OblongAlt : SeriesId::Oblong;
    rows.push_back(r);
  }
  return rows;
}

const RefineResult& tightened_config_C(int k) {
  static std::mutex lock;
  static std::map<int, RefineResult> cache;
  std::lock_guard guard(lock);
  auto it = cache.find(k);
  if (it == cache.end()) {
    const PackResult r = tighten(build_config_C(k), SimParams{}, 1);
    if (!r.jammed) throw Error(ErrorCode::NoConvergence, "configuration C did not jam for k = " + std::to_string(k));
    it = cache.emplace(k, refine_jammed(r.packing)).first;
  }
  return it->second;
}

std::optional<SeriesMatch> match_series(const Packing& p) {
  constexpr double kMTol = 1e-9;
  const ContactGraph g = contact_graph(p);
  for (SeriesId series : kAllSeries) {
    for (int k = 2; series_count(series, k) <= p.n(); ++k) {
      if (series_count(series, k) != p.n() || !exists_pattern(series, k).exists) continue;
      if (std::abs(pattern_m(series, k) - p.m) > kMTol) continue;
      std::vector<PatternVariant> variants{{}};
      if (series == SeriesId::SquareMinus1 || series == SeriesId::SquareMinus2) {
        variants = enumerate_variants(series, k);
      }
      for (const auto& v : variants) {
        const Packing cand = series == SeriesId::SquareMinus3 ? tightened_config_C(k).packing
                                                              : build_pattern(series, k, v);
        if (same_solid_layout(cand, contact_graph(cand).roles, p, g.roles)) return SeriesMatch{series, k, v};
      }
    }
  }
  return std::nullopt;
}

}  // namespace diskpack
