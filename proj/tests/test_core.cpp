#include <doctest.h>

#include <random>

#include "diskpack/core.hpp"

using namespace diskpack;

TEST_CASE("series counts") {
  CHECK(series_count(SeriesId::Square, 7) == 49);
  CHECK(series_count(SeriesId::SquareMinus1, 7) == 48);
  CHECK(series_count(SeriesId::SquareMinus2, 7) == 47);
  CHECK(series_count(SeriesId::SquareMinus3, 9) == 78);
  CHECK(series_count(SeriesId::Oblong, 8) == 72);
  CHECK(series_count(SeriesId::OblongAlt, 8) == 72);
  CHECK(series_count(SeriesId::HalfK, 8) == 68);
  CHECK(series_count(SeriesId::HalfK, 3) == 10);
}

TEST_CASE("series names round trip") {
  for (SeriesId s : kAllSeries) CHECK(parse_series(to_string(s)) == s);
  CHECK(parse_series("SquareMinus1") == SeriesId::SquareMinus1);
  CHECK(parse_series("half-k") == SeriesId::HalfK);
  CHECK_THROWS_AS(parse_series("hexagonal"), Error);
}

TEST_CASE("variant parsing") {
  CHECK(parse_variant("2,3") == PatternVariant{{2}, {3}});
  CHECK(parse_variant("2,4;3,5") == PatternVariant{{2, 4}, {3, 5}});
  CHECK(to_string(PatternVariant{{2, 4}, {3, 5}}) == "2,4;3,5");
  CHECK(to_string(PatternVariant{{2}, {3}}) == "2,3");
  CHECK(to_string(PatternVariant{}) == "-");
  for (const char* bad : {"", "2", "2,x", "1,2,3", "2,,3"}) {
    CHECK_THROWS_WITH_AS(parse_variant(bad), doctest::Contains("variant"), Error);
  }
}

TEST_CASE("normalize maps the bounding square onto the unit square") {
  const std::vector<Point> c{{2.0, 3.0}, {4.0, 3.5}, {3.0, 5.0}};
  const auto t = normalize(c);
  CHECK(t.apply({2.0, 3.0}) == Point{0.0, 0.0});
  CHECK(t.scale == doctest::Approx(0.5));
  const Packing p = make_packing(c, 1.0);
  CHECK(p.m == doctest::Approx(0.5));
  CHECK(span_x(p.centers) == doctest::Approx(1.0));
  CHECK(span_y(p.centers) == doctest::Approx(1.0));
}

TEST_CASE("normalize rejects degenerate input") {
  const std::vector<Point> one{{0.5, 0.5}};
  CHECK_THROWS_AS(normalize(one), Error);
  const std::vector<Point> same{{0.5, 0.5}, {0.5, 0.5}};
  try {
    normalize(same);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateInput);
  }
}

TEST_CASE("property: normalize is idempotent") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> c(2 + trial % 9);
    for (auto& q : c) q = {u(rng), u(rng)};
    const Packing once = make_packing(c, 0.3);
    const Packing twice = make_packing(once.centers, once.m);
    REQUIRE(twice.n() == once.n());
    CHECK(twice.m == doctest::Approx(once.m).epsilon(1e-15));
    for (int i = 0; i < once.n(); ++i) {
      CHECK(std::abs(twice.centers[i].x - once.centers[i].x) < 1e-15);
      CHECK(std::abs(twice.centers[i].y - once.centers[i].y) < 1e-15);
    }
  }
}

TEST_CASE("pair distances are ordered and measured from m") {
  Packing p;
  p.m = 0.5;
  p.centers = {{0, 0}, {1, 0}, {0, 1}};
  const auto d = pair_distances(p);
  REQUIRE(d.size() == 3);
  CHECK(d[0].i == 0);
  CHECK(d[0].j == 1);
  CHECK(d[0].gap == doctest::Approx(0.5));
  CHECK(d[2].gap == doctest::Approx(std::sqrt(2.0) - 0.5));
  CHECK(min_pair_distance(p.centers) == doctest::Approx(1.0));
}

TEST_CASE("fourteen significant digits") {
  CHECK(format_sig14(1.0) == "1.0000000000000");
  CHECK(format_sig14(0.0) == "0.0000000000000");
  CHECK(format_sig14(1.0 / 6.0) == "0.16666666666667");
  CHECK(format_sig14(0.168581424244717) == "0.16858142424472");
  CHECK(format_sig14(9.999999999999999) == "10.000000000000");
  CHECK(format_sig14(-0.25) == "-0.25000000000000");
}

TEST_CASE("provenance descriptions") {
  CHECK(describe(Provenance{}) == "unknown");
  CHECK(describe(FromPattern{SeriesId::Square, 3, {}}) == "pattern square k=3 variant=-");
  CHECK(describe(FromSimulation{5, "abc"}) == "simulated seed=5 params=abc");
}
