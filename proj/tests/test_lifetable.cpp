#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "ssf/common.hpp"
#include "ssf/lifetable.hpp"
#include "ssf/sources.hpp"

using ssf::LifeTable;
using ssf::rebuild_from_lx;

TEST_CASE("two-age toy table closes with e = 1/m") {
  const LifeTable t = rebuild_from_lx({100.0, 50.0}, 1, 0.5);
  CHECK(t.start_age() == 0);
  CHECK(t.open_age() == 1);
  CHECK(t.ex_at(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(t.Lx_at(1) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(t.ex_at(0) == doctest::Approx(1.75).epsilon(1e-14));
}

TEST_CASE("three-age table matches the hand-evaluated columns") {
  const LifeTable t = rebuild_from_lx({100.0, 60.0, 30.0}, 2, 0.4);
  CHECK(t.dx() == std::vector<double>{40.0, 30.0, 30.0});
  CHECK(t.Lx_at(0) == doctest::Approx(80.0));
  CHECK(t.Lx_at(1) == doctest::Approx(45.0));
  CHECK(t.Lx_at(2) == doctest::Approx(75.0));
  CHECK(t.person_years_above(0) == doctest::Approx(200.0));
  CHECK(t.ex_at(0) == doctest::Approx(2.0));
  CHECK(ssf::life_expectancy(t, 1) == doctest::Approx(2.0));

  // Cross-check every column against the spreadsheet-style oracle.
  const auto hand = oracle::lifetable_by_hand({100.0, 60.0, 30.0}, 0.4);
  for (int age = 0; age <= 2; ++age) {
    CHECK(t.dx_at(age) == doctest::Approx(hand.d[age]).epsilon(1e-15));
    CHECK(t.Lx_at(age) == doctest::Approx(hand.L[age]).epsilon(1e-15));
    CHECK(t.mx_at(age) == doctest::Approx(hand.m[age]).epsilon(1e-15));
    CHECK(t.ex_at(age) == doctest::Approx(hand.e[age]).epsilon(1e-15));
  }
}

TEST_CASE("published deaths are ignored and recomputed from lx") {
  // 2006-vintage inconsistency: the published file carried d80 = 41,982
  // and d79 = 2,675 against l79 = 44,649, l80 = 41,849.
  std::vector<double> lx = {44649.0, 41849.0};
  const LifeTable t = rebuild_from_lx(std::move(lx), 80, 0.1);
  CHECK(t.dx_at(80) == doctest::Approx(41849.0));  // not 41,982
  CHECK(t.dx_at(79) == doctest::Approx(2800.0));   // not 2,675
}

TEST_CASE("close_open_interval") {
  const auto basic = ssf::close_open_interval(50.0, 0.5);
  CHECK(basic.e == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(basic.L == doctest::Approx(100.0).epsilon(1e-15));

  // m recovered from the 2002 published value e80 = 9.2.
  const auto ibge = ssf::close_open_interval(41849.0, 0.10869565);
  CHECK(ibge.e == doctest::Approx(9.2).epsilon(1e-6));
  CHECK(ibge.L == doctest::Approx(385011.0).epsilon(1e-5));

  const auto unit = ssf::close_open_interval(1.0, 1.0);
  CHECK(unit.e == 1.0);
  CHECK(unit.L == 1.0);

  CHECK_THROWS_AS(ssf::close_open_interval(50.0, 0.0), ssf::InputError);
  CHECK_THROWS_AS(ssf::close_open_interval(50.0, -1.0), ssf::InputError);
  CHECK_THROWS_AS(ssf::close_open_interval(0.0, 0.5), ssf::InputError);
}

TEST_CASE("life_expectancy range checks") {
  const LifeTable t = rebuild_from_lx({100.0, 50.0}, 1, 0.5);
  CHECK(ssf::life_expectancy(t, 0) == doctest::Approx(1.75));
  CHECK(ssf::life_expectancy(t, 1) == doctest::Approx(2.0));
  CHECK_THROWS_AS(ssf::life_expectancy(t, 2), ssf::InputError);
  CHECK_THROWS_AS(ssf::life_expectancy(t, -1), ssf::InputError);
}

TEST_CASE("construction rejections") {
  CHECK_THROWS_WITH_AS(rebuild_from_lx({100.0, 101.0, 90.0}, 2, 0.5),
                       doctest::Contains("age 1"), ssf::InputError);
  CHECK_THROWS_AS(rebuild_from_lx({100.0, 0.0}, 1, 0.5), ssf::InputError);
  CHECK_THROWS_AS(rebuild_from_lx({100.0, 50.0}, 1, 0.0), ssf::InputError);
  CHECK_THROWS_AS(rebuild_from_lx({}, 1, 0.5), ssf::InputError);
  CHECK_THROWS_AS(rebuild_from_lx({0.0, 0.0}, 1, 0.5), ssf::InputError);
}

TEST_CASE("rounded_e_for_ssf floor and half-up rounding") {
  ssf::EVector v;
  v.e_by_age = {{43, 35.07}, {63, 19.6}};
  const ssf::MortalitySource src(v);
  CHECK(ssf::rounded_e_for_ssf(src, 43.0) == doctest::Approx(35.1));
  CHECK(ssf::rounded_e_for_ssf(src, 63.9) == doctest::Approx(19.6));  // floor
  CHECK_THROWS_AS(ssf::rounded_e_for_ssf(src, 80.0), ssf::InputError);

  CHECK(ssf::round_half_up(19.55, 1) == doctest::Approx(19.6));
  CHECK(ssf::round_half_up(19.549, 1) == doctest::Approx(19.5));
}

TEST_CASE("random tables satisfy every column identity") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int rep = 0; rep < 300; ++rep) {
    const int n = 2 + static_cast<int>(unit(rng) * 38);
    const int start_age = static_cast<int>(unit(rng) * 60);
    std::vector<double> lx(n);
    lx[0] = 1000.0 + unit(rng) * 99000.0;
    for (int i = 1; i < n; ++i) {
      lx[i] = lx[i - 1] * (0.55 + 0.449 * unit(rng));
    }
    const double m_inf = 0.05 + 1.95 * unit(rng);
    const int open_age = start_age + n - 1;
    const LifeTable t = rebuild_from_lx(lx, open_age, m_inf);

    // Round-trip: the stored lx is the input, bit for bit.
    CHECK(t.lx() == lx);

    // Closing identity to machine precision.
    CHECK(std::abs(t.ex_at(open_age) * t.mx_at(open_age) - 1.0) < 1e-12);

    const auto hand = oracle::lifetable_by_hand(lx, m_inf);
    for (int i = 0; i < n; ++i) {
      const int age = start_age + i;
      CHECK(t.dx_at(age) == hand.d[i]);
      CHECK(t.Lx_at(age) == hand.L[i]);
      CHECK(std::abs(t.ex_at(age) - hand.e[i]) < 1e-12 * (1.0 + hand.e[i]));
      if (age < open_age) {
        CHECK(t.dx_at(age) >= 0.0);
        CHECK(t.Lx_at(age) >= lx[i + 1]);
        CHECK(t.Lx_at(age) <= lx[i]);
        CHECK(t.ex_at(age) <= t.ex_at(age + 1) + 1.0 + 1e-12);
        CHECK(t.survival_prob(age) ==
              doctest::Approx(lx[i + 1] / lx[i]).epsilon(1e-15));
        CHECK(t.death_prob(age) + t.survival_prob(age) ==
              doctest::Approx(1.0).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("perturbing terminal m only shifts e through the tail term") {
  const std::vector<double> lx = {100.0, 80.0, 60.0, 40.0};
  const LifeTable t1 = rebuild_from_lx(lx, 3, 0.5);
  const LifeTable t2 = rebuild_from_lx(lx, 3, 0.25);
  // Below the open age d, L, m are untouched.
  for (int age = 0; age < 3; ++age) {
    CHECK(t1.dx_at(age) == t2.dx_at(age));
    CHECK(t1.Lx_at(age) == t2.Lx_at(age));
    CHECK(t1.mx_at(age) == t2.mx_at(age));
  }
  // The tail adds (e2 - e1) * l_open person-years at every earlier age.
  const double extra = (t2.ex_at(3) - t1.ex_at(3)) * t1.lx_at(3);
  for (int age = 0; age <= 3; ++age) {
    CHECK(t2.person_years_above(age) - t1.person_years_above(age) ==
          doctest::Approx(extra).epsilon(1e-12));
  }
}
