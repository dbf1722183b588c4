// Acceptance checks. Prints one line per criterion and exits non-zero when
// any criterion fails. Simulated challengers for criterion 8 come from
// data/best_known.txt when present (their best seeds are re-run), otherwise
// they are simulated here and cached into that file.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "diskpack/analysis.hpp"
#include "diskpack/billiards.hpp"
#include "diskpack/io.hpp"
#include "diskpack/patterns.hpp"
#include "diskpack/polish.hpp"
#include "diskpack/series.hpp"

#ifndef DISKPACK_SOURCE_DIR
#define DISKPACK_SOURCE_DIR "."
#endif

using namespace diskpack;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;
int ran = 0;
std::set<int> selected;  // empty: all

void run(int id, const char* title, const std::function<void(Outcome&)>& body) {
  if (!selected.empty() && !selected.count(id)) return;
  ++ran;
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::string detail = o.detail.str();
  detail.erase(0, detail.find_first_not_of(' '));
  std::printf("criterion %d: %s  %s (%.1fs)  %s\n", id, o.pass ? "PASS" : "FAIL", title, secs, detail.c_str());
  std::fflush(stdout);
}

double refined_m(const Packing& p) {
  try {
    return refine_jammed(p).packing.m;
  } catch (const Error&) {
    return p.m;
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

void closed_forms(Outcome& o) {
  const double sq = m_pattern(SeriesId::Square, 7).m;
  const double s1 = m_pattern(SeriesId::SquareMinus1, 7).m;
  const double s2 = m_pattern(SeriesId::SquareMinus2, 7).m;
  o.require(sq == 1.0 / 6.0, "square k=7 is 1/6");
  o.require(std::abs(s1 - 0.168581424) < 5e-10, "k^2-1 at k=7");
  o.require(std::abs(s2 - 0.1705406887) < 5e-11, "k^2-2 at k=7");
  o.detail << "m(49)=" << fmt(sq) << " m(48)=" << fmt(s1) << " m(47)=" << fmt(s2);
}

void residuals(Outcome& o) {
  double worst = 0.0;
  for (int k = 2; k <= 12; ++k) {
    if (exists_pattern(SeriesId::Oblong, k).exists) {
      const auto f = m_pattern(SeriesId::Oblong, k);
      const double a = *f.angle;
      worst = std::max(worst, std::abs(k * std::cos(a) - (k - 1) - std::sin(a)));
      worst = std::max(worst, std::abs(f.m * k * std::cos(a) - 1.0));
    }
    if (exists_pattern(SeriesId::HalfK, k).exists) {
      const auto f = m_pattern(SeriesId::HalfK, k);
      const double a = *f.angle;
      worst = std::max(worst, std::abs(k * std::cos(a) - 2.0 * (k - 1) * std::sin(a)));
      worst = std::max(worst, std::abs(f.m * k * std::cos(a) - 1.0));
    }
    if (exists_pattern(SeriesId::OblongAlt, k).exists) {
      const auto f = m_pattern(SeriesId::OblongAlt, k);
      const double b = *f.angle;
      const double r = k * std::cos(b) + std::cos(b + kPi / 3) - (k - 1) * std::sin(b + kPi / 3) - std::sin(b);
      worst = std::max(worst, std::abs(r));
      worst = std::max(worst, std::abs(f.m * (k * std::cos(b) + std::cos(b + kPi / 3)) - 1.0));
    }
  }
  o.require(worst < 1e-13, "residual below 1e-13");
  o.detail << "max residual " << worst;
}

void existence(Outcome& o) {
  for (int k = 1; k <= 20; ++k) {
    o.require(exists_pattern(SeriesId::Oblong, k).exists == (k >= 4), "oblong k=" + std::to_string(k));
    o.require(exists_pattern(SeriesId::HalfK, k).exists == (k >= 2 && k <= 7), "half-k k=" + std::to_string(k));
  }
  const double ov = halfk_overlap(8);
  o.require(ov > 0.0 && ov < 0.01, "half-k overlap at k=8 in (0, 0.01)");
  o.detail << "overlap(8)=" << fmt(ov);
}

void crossover(Outcome& o) {
  for (const auto& r : oblong_crossover(4, 12)) {
    const bool want_alt = r.k >= 8;
    o.require(want_alt ? r.m_alt > r.m : r.m_alt < r.m, "k=" + std::to_string(r.k));
    if (r.k == 7 || r.k == 8) o.detail << " k=" << r.k << " m=" << fmt(r.m) << " alt=" << fmt(r.m_alt);
  }
}

void schematic_agreement(Outcome& o) {
  struct Case {
    SeriesId s;
    int k;
  };
  for (const Case c : {Case{SeriesId::SquareMinus1, 5}, Case{SeriesId::SquareMinus1, 6}, Case{SeriesId::SquareMinus2, 6}}) {
    const double target = m_pattern(c.s, c.k).m;
    const auto cfg = schematic_configuration(c.s, c.k, canonical_variant(c.s, c.k));
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto r = tighten(cfg, SimParams{}, seed);
      o.require(r.jammed, "jammed");
      worst = std::max(worst, std::abs(refine_jammed(r.packing).packing.m - target));
    }
    o.require(worst < 1e-12, std::string(to_string(c.s)) + " k=" + std::to_string(c.k));
    o.detail << " " << to_string(c.s) << "(" << c.k << ") dev " << worst;
  }
}

void config_c(Outcome& o) {
  for (int k : {5, 6}) {
    const auto cfg = build_config_C(k);
    double lo = INFINITY, hi = -INFINITY;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto r = tighten(cfg, SimParams{}, seed);
      o.require(r.jammed, "jammed");
      const double m = refine_jammed(r.packing).packing.m;
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    const double spread = (hi - lo) / hi;
    o.require(spread < 1e-12, "spread at k=" + std::to_string(k));
    o.detail << " k=" << k << " m=" << fmt(hi) << " spread " << spread;
  }
}

void small_n(Outcome& o) {
  struct Case {
    int n;
    double target;
  };
  const auto seeds = seed_range(1, 50);
  for (const Case c : {Case{2, std::sqrt(2.0)}, Case{4, 1.0}, Case{5, 1.0 / std::sqrt(2.0)}}) {
    const double m = refined_m(best_of(c.n, SimParams{}, seeds).best.packing);
    o.require(std::abs(m - c.target) < 1e-6, "n=" + std::to_string(c.n));
    o.detail << " n=" << c.n << " m=" << fmt(m);
  }
  const double m10 = refined_m(best_of(10, SimParams{}, seeds).best.packing);
  o.require(m10 > 5.0 / 12.0, "n=10 exceeds 5/12");
  o.detail << " n=10 m=" << fmt(m10);
}

void thresholds(Outcome& o) {
  const std::string path = std::string(DISKPACK_SOURCE_DIR) + "/data/best_known.txt";
  BestKnownTable table;
  try {
    table = load_table(read_file(path));
  } catch (const Error&) {
  }
  bool cache_changed = false;
  std::map<int, Challenger> challengers;
  for (int n : {34, 35, 36, 47, 48, 49}) {
    auto e = table.find(n);
    if (!e || !e->simulated || e->seed_count < 50) {
      SimParams params;
      const auto r = best_of(n, params, seed_range(1, 50));
      BestKnownEntry fresh;
      fresh.n = n;
      fresh.m = refined_m(r.best.packing);
      fresh.seed_base = 1;
      fresh.seed_count = 50;
      fresh.best_seed = r.best.seed;
      fresh.growth_rate = params.growth_rate;
      fresh.params_digest = params.digest();
      cache_changed = table.merge(fresh) || cache_changed;
      e = table.find(n);
    }
    double m = e->m;
    if (n >= 47) {
      // Self-consistency: the stored best seed reproduces the stored value.
      const SimParams params = e->params();
      o.require(params.digest() == e->params_digest, "parameter digest for n=" + std::to_string(n));
      const double again = refined_m(pack_random(n, params, e->best_seed).packing);
      o.require(std::abs(again - e->m) < 1e-12, "seed rerun reproduces n=" + std::to_string(n));
      m = again;
    }
    challengers[n] = {m, e->describe()};
  }
  if (cache_changed) write_file_atomic(path, save_table(table));

  struct Case {
    SeriesId s;
    int n0;
    int n1;
  };
  for (const Case c : {Case{SeriesId::SquareMinus2, 34, 47}, Case{SeriesId::SquareMinus1, 35, 48}, Case{SeriesId::Square, 36, 49}}) {
    ChallengerSource src;
    src.table = challengers;
    const auto r = series_threshold(c.s, 6, 7, src);
    o.require(r.rows.size() == 2 && !r.rows[0].beaten && r.rows[1].beaten, std::string(to_string(c.s)) + " verdicts");
    o.require(r.n0 == c.n0 && r.n1 == c.n1, std::string(to_string(c.s)) + " thresholds");
    for (const auto& row : r.rows) {
      o.detail << " n=" << row.n << (row.beaten ? " beaten " : " held ") << fmt(*row.m_challenger) << " vs "
               << fmt(*row.m_pattern) << ";";
    }
  }
}

void tolerance_regime(Outcome& o) {
  int checked = 0;
  for (SeriesId s : kAllSeries) {
    if (s == SeriesId::SquareMinus3) continue;
    for (int k = 2; k <= 12; ++k) {
      if (!exists_pattern(s, k).exists) continue;
      std::vector<PatternVariant> variants{{}};
      if (s == SeriesId::SquareMinus1 || s == SeriesId::SquareMinus2) variants = enumerate_variants(s, k);
      for (const auto& v : variants) {
        const Packing p = build_pattern(s, k, v);
        const auto g = contact_graph(p, 1e-12 * p.m);
        const auto r = well_formed_gap_check(g, 1e-7 * p.m);
        o.require(r.pass, std::string(to_string(s)) + " k=" + std::to_string(k) + " variant " + to_string(v));
        ++checked;
      }
    }
  }
  o.detail << checked << " packings";
}

// A pair collision may be reported from either side.
std::pair<int, int> canonical(const Collision& c) {
  if (c.partner >= 0 && c.partner < c.disk) return {c.partner, c.disk};
  return {c.disk, c.partner};
}

void predictor_oracle(Outcome& o) {
  for (int n : {3, 7, 12}) {
    SimParams params;
    SeedStream rng(100 + n);
    std::vector<Point> pos;
    while (static_cast<int>(pos.size()) < n) pos.push_back({rng.uniform(), rng.uniform()});
    const auto vel = random_velocities(n, 1.0, rng);
    BilliardsEngine grid(pos, vel, 0.0, params, Predictor::CellGrid);
    BilliardsEngine brute(pos, vel, 0.0, params, Predictor::BruteForce);
    int matched = 0;
    for (; matched < 100000; ++matched) {
      const auto a = grid.next_collision();
      const auto b = brute.next_collision();
      if (!a || !b) break;
      if (canonical(*a) != canonical(*b) || a->time != b->time) break;
      if ((matched + 1) % 10000 == 0) {
        grid.rescale_speeds(1.0);
        brute.rescale_speeds(1.0);
        grid.synchronize();
        brute.synchronize();
      }
    }
    o.require(matched == 100000, "n=" + std::to_string(n) + " diverged at event " + std::to_string(matched));
    o.detail << " n=" << n << " d=" << fmt(grid.diameter());
  }
}

void rattlers(Outcome& o) {
  const int alt = contact_graph(build_pattern(SeriesId::OblongAlt, 8)).rattler_count();
  o.require(alt == 1, "oblong alternative k=8");
  const int c9 = tightened_config_C(9).contacts.rattler_count();
  o.require(c9 == 1, "configuration C k=9");
  int zero_checked = 0;
  for (SeriesId s : {SeriesId::Square, SeriesId::Oblong, SeriesId::HalfK}) {
    for (int k = 2; k <= 12; ++k) {
      if (!exists_pattern(s, k).exists) continue;
      o.require(contact_graph(build_pattern(s, k)).rattler_count() == 0,
                std::string(to_string(s)) + " k=" + std::to_string(k));
      ++zero_checked;
    }
  }
  o.detail << "alt(8)=" << alt << " C(9)=" << c9 << " m=" << fmt(tightened_config_C(9).packing.m) << ", "
           << zero_checked << " rattler-free patterns";
}

}  // namespace

// Optional arguments restrict the run to the listed criterion numbers.
int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  run(1, "closed-form constants", closed_forms);
  run(2, "defining-equation residuals", residuals);
  run(3, "existence boundaries", existence);
  run(4, "oblong crossover", crossover);
  run(5, "schematic tightening matches closed forms", schematic_agreement);
  run(6, "k^2-3 reproducibility", config_c);
  run(7, "small-n optima by simulation", small_n);
  run(8, "threshold inequalities", thresholds);
  run(9, "tolerance regime", tolerance_regime);
  run(10, "cell grid vs brute force predictor", predictor_oracle);
  run(11, "rattler counts", rattlers);
  std::printf("%d of %d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
