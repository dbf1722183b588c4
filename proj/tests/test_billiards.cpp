#include <doctest.h>

#include <cmath>

#include "diskpack/analysis.hpp"
#include "diskpack/billiards.hpp"

using namespace diskpack;

namespace {

SimParams fast_params() {
  SimParams p;
  p.growth_rate = 1e-2;
  p.event_window = 2000;
  return p;
}

// The same pair collision may be reported from either side.
std::pair<int, int> canonical(const Collision& c) {
  if (c.partner >= 0 && c.partner < c.disk) return {c.partner, c.disk};
  return {c.disk, c.partner};
}

}  // namespace

TEST_CASE("head-on pair time matches the closed form") {
  SimParams params;
  params.growth_rate = 1e-3;
  const double d0 = 0.1;
  BilliardsEngine e({{0.3, 0.5}, {0.7, 0.5}}, {{1.0, 0.0}, {-1.0, 0.0}}, d0, params,
                    Predictor::BruteForce);
  const Event ev = e.predict_event(0);
  CHECK(ev.partner == 1);
  // 0.4 - 2t = d0 + g t
  CHECK(ev.time == doctest::Approx((0.4 - d0) / (2.0 + params.growth_rate)).epsilon(1e-14));
}

TEST_CASE("wall time matches the closed form") {
  SimParams params;
  params.growth_rate = 2e-3;
  const double d0 = 0.1;
  BilliardsEngine e({{0.5, 0.5}}, {{0.3, 0.0}}, d0, params, Predictor::BruteForce);
  const Event ev = e.predict_event(0);
  CHECK(ev.partner == kRightWall);
  // 0.5 + 0.3 t = 1 - (d0 + g t) / 2
  CHECK(ev.time == doctest::Approx(0.45 / (0.3 + params.growth_rate / 2)).epsilon(1e-14));
}

TEST_CASE("disks separate faster than they grow after a collision") {
  SimParams params;
  params.growth_rate = 1e-3;
  BilliardsEngine e({{0.3, 0.52}, {0.7, 0.5}}, {{1.0, 0.1}, {-1.0, 0.0}}, 0.1, params,
                    Predictor::BruteForce);
  const Event ev = e.predict_event(0);
  REQUIRE(ev.partner == 1);
  e.resolve_collision(ev);
  const auto v = e.velocities();
  // Normal from the committed positions.
  const Point a = Point{0.3, 0.52} + ev.time * Point{1.0, 0.1};
  const Point b = Point{0.7, 0.5} + ev.time * Point{-1.0, 0.0};
  const Point nrm = (1.0 / norm(b - a)) * (b - a);
  const double u_after = dot(v[1] - v[0], nrm);
  CHECK(u_after > params.growth_rate);
  // Momentum is conserved.
  CHECK(v[0].x + v[1].x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(v[0].y + v[1].y == doctest::Approx(0.1));
}

TEST_CASE("resolving a stale event is rejected") {
  SimParams params;
  BilliardsEngine e({{0.3, 0.5}, {0.7, 0.5}}, {{1.0, 0.0}, {-1.0, 0.0}}, 0.1, params,
                    Predictor::BruteForce);
  const Event ev = e.predict_event(0);
  e.resolve_collision(ev);
  try {
    e.resolve_collision(ev);
    FAIL("expected StaleEvent");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::StaleEvent);
  }
}

TEST_CASE("runs are deterministic in the seed") {
  const auto params = fast_params();
  const auto a = pack_random(9, params, 11);
  const auto b = pack_random(9, params, 11);
  REQUIRE(a.packing.n() == b.packing.n());
  CHECK(a.packing.m == b.packing.m);
  CHECK(a.events_processed == b.events_processed);
  for (int i = 0; i < a.packing.n(); ++i) CHECK(a.packing.centers[i] == b.packing.centers[i]);
  const auto c = pack_random(9, params, 12);
  CHECK(c.packing.centers[0] != a.packing.centers[0]);
}

TEST_CASE("cell grid and brute force agree on a short run") {
  SimParams params;
  params.growth_rate = 1e-2;
  SeedStream rng(5);
  std::vector<Point> pos;
  while (pos.size() < 10) pos.push_back({rng.uniform(), rng.uniform()});
  const auto vel = random_velocities(10, 1.0, rng);
  BilliardsEngine grid(pos, vel, 0.0, params, Predictor::CellGrid);
  BilliardsEngine brute(pos, vel, 0.0, params, Predictor::BruteForce);
  int mismatches = 0;
  for (int step = 0; step < 3000; ++step) {
    const auto a = grid.next_collision();
    const auto b = brute.next_collision();
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    if (canonical(*a) != canonical(*b) || a->time != b->time) {
      ++mismatches;
      break;
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("jammed runs produce valid packings") {
  const auto r = pack_random(6, fast_params(), 1);
  CHECK(r.jammed);
  const auto v = validate(r.packing, 1e-9);
  CHECK(v.valid);
  CHECK(r.packing.m > 0.5);
  CHECK(r.packing.m < 0.6009252126);  // never above the optimum for six disks
  CHECK(r.m_trace.size() >= 2);
  for (std::size_t i = 1; i < r.m_trace.size(); ++i) CHECK(r.m_trace[i].second >= r.m_trace[i - 1].second);
}

TEST_CASE("tighten rejects overlapping or escaping starts") {
  Configuration c;
  c.diameter = 0.2;
  c.centers = {{0.3, 0.3}, {0.35, 0.3}};
  try {
    tighten(c, fast_params(), 1);
    FAIL("expected InvalidStart");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidStart);
  }
  c.centers = {{0.05, 0.5}, {0.6, 0.5}};
  CHECK_THROWS_AS(tighten(c, fast_params(), 1), Error);
}

TEST_CASE("best_of visits seeds in order and keeps the best") {
  const std::vector<std::uint64_t> seeds{4, 2, 3, 2};
  std::vector<std::uint64_t> visited;
  const auto r = best_of(5, fast_params(), seeds, [&](const PackResult& p) { visited.push_back(p.seed); });
  CHECK(visited == std::vector<std::uint64_t>{2, 3, 4});
  REQUIRE(r.per_seed_m.size() == 3);
  double best = 0.0;
  std::uint64_t best_seed = 0;
  for (auto [s, m] : r.per_seed_m) {
    if (m > best) {
      best = m;
      best_seed = s;
    }
  }
  CHECK(r.best.packing.m == best);
  CHECK(r.best.seed == best_seed);
  CHECK_THROWS(best_of(5, fast_params(), std::vector<std::uint64_t>{}));
}

TEST_CASE("best_of reports a budget without any jam") {
  auto p = fast_params();
  p.max_events = 50;
  try {
    best_of(20, p, seed_range(1, 2));
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
  }
}

TEST_CASE("parameter validation") {
  SimParams p;
  CHECK_NOTHROW(p.validate());
  p.growth_rate = 0.0;
  CHECK_THROWS(p.validate());
  p = {};
  p.jam_rel_growth_tol = 1e-3;
  CHECK_THROWS(p.validate());
  p = {};
  p.neighbor_cell_size_factor = 0.5;
  CHECK_THROWS(p.validate());
  CHECK(SimParams{}.digest() == SimParams{}.digest());
  CHECK(SimParams{}.digest() != fast_params().digest());
}

TEST_CASE("random velocities have zero mean and the requested rms") {
  SeedStream rng(3);
  const auto v = random_velocities(50, 2.5, rng);
  Point mean{};
  double sq = 0.0;
  for (auto p : v) {
    mean = mean + p;
    sq += dot(p, p);
  }
  CHECK(std::abs(mean.x) < 1e-12);
  CHECK(std::abs(mean.y) < 1e-12);
  CHECK(std::sqrt(sq / 50) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("to_configuration places centers inside the engine box") {
  Packing p;
  p.m = 1.0;
  p.centers = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const auto c = to_configuration(p);
  CHECK(c.diameter == doctest::Approx(0.5));
  CHECK(c.centers[0].x == doctest::Approx(0.25));
  CHECK(c.centers[3].y == doctest::Approx(0.75));
}
