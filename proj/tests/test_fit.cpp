#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ssf/common.hpp"
#include "ssf/ggm.hpp"

using ssf::FitOptions;
using ssf::FitResult;
using ssf::GgmParams;
using ssf::MortalityData;

namespace {

const GgmParams kTruth{2e-5, 0.13, 5e-4, 0.2};

MortalityData perfect_data(const GgmParams& p, int lo = 30, int hi = 99,
                           double exposure = 1e6) {
  std::vector<int> ages;
  std::vector<double> deaths, exposures;
  for (int x = lo; x <= hi; ++x) {
    ages.push_back(x);
    exposures.push_back(exposure);
    deaths.push_back(ssf::hazard(p, x + 0.5) * exposure);
  }
  return MortalityData::make(ages, deaths, exposures);
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

}  // namespace

TEST_CASE("perfect data recovers the generating parameters") {
  const MortalityData data = perfect_data(kTruth);
  const FitResult r = ssf::fit(data);

  CHECK(r.converged);
  CHECK(r.age_min == 30);
  CHECK(r.age_max == 99);
  CHECK(r.n_restarts_used == 32);
  CHECK(rel_err(r.params.a, kTruth.a) < 0.01);
  CHECK(rel_err(r.params.b, kTruth.b) < 0.01);
  CHECK(rel_err(r.params.c, kTruth.c) < 0.10);
  CHECK(rel_err(r.params.sigma2, kTruth.sigma2) < 0.10);

  // The optimum cannot beat the generator by more than numerical slack.
  CHECK(r.loglik <= ssf::log_likelihood(kTruth, data) + 1e-6);
  CHECK(r.loglik >= ssf::log_likelihood(kTruth, data) - 1.0);
}

TEST_CASE("stationarity at the reported optimum") {
  const MortalityData data = perfect_data(kTruth);
  const FitResult r = ssf::fit(data);
  const auto g = ssf::loglik_gradient_log_scale(r.params, data);
  const double norm =
      std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
  CHECK(norm < 1e-3 * std::abs(r.loglik));
}

TEST_CASE("fitted hazard is monotone where the frailty ratio allows") {
  const MortalityData data = perfect_data(kTruth);
  const FitResult r = ssf::fit(data);
  if (r.params.sigma2 * r.params.a / r.params.b < 1.0) {
    double prev = ssf::hazard(r.params, 0.0);
    for (double x = 0.5; x <= 110.0; x += 0.5) {
      const double h = ssf::hazard(r.params, x);
      CHECK(h >= prev - 1e-15);
      CHECK(h >= r.params.c);
      prev = h;
    }
  }
}

TEST_CASE("permuting age cells leaves the fit identical") {
  const MortalityData data = perfect_data(kTruth, 30, 79);
  std::vector<int> ages = data.ages;
  std::vector<double> deaths = data.deaths, exposures = data.exposures;
  std::mt19937_64 rng(99);
  std::vector<std::size_t> perm(ages.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> ages2;
  std::vector<double> deaths2, exposures2;
  for (std::size_t i : perm) {
    ages2.push_back(ages[i]);
    deaths2.push_back(deaths[i]);
    exposures2.push_back(exposures[i]);
  }
  const MortalityData shuffled =
      MortalityData::make(ages2, deaths2, exposures2);

  FitOptions opt;
  opt.seed = 7;
  const FitResult r1 = ssf::fit(data, opt);
  const FitResult r2 = ssf::fit(shuffled, opt);
  CHECK(r1.params.a == r2.params.a);
  CHECK(r1.params.b == r2.params.b);
  CHECK(r1.params.c == r2.params.c);
  CHECK(r1.params.sigma2 == r2.params.sigma2);
  CHECK(r1.loglik == r2.loglik);
}

TEST_CASE("parallel starts reproduce the sequential result exactly") {
  const MortalityData data = perfect_data(kTruth, 30, 79);
  FitOptions par;
  par.seed = 5;
  par.parallel = true;
  FitOptions seq = par;
  seq.parallel = false;
  const FitResult a = ssf::fit(data, par);
  const FitResult b = ssf::fit(data, seq);
  CHECK(a.params.a == b.params.a);
  CHECK(a.params.b == b.params.b);
  CHECK(a.params.c == b.params.c);
  CHECK(a.params.sigma2 == b.params.sigma2);
  CHECK(a.loglik == b.loglik);
  CHECK(a.converged == b.converged);
}

TEST_CASE("one Poisson replicate lands near the truth") {
  std::mt19937_64 rng(2024);
  std::vector<int> ages;
  std::vector<double> deaths, exposures;
  for (int x = 30; x <= 99; ++x) {
    const double mu = ssf::hazard(kTruth, x + 0.5);
    ages.push_back(x);
    exposures.push_back(1e6);
    deaths.push_back(static_cast<double>(
        std::poisson_distribution<long>(mu * 1e6)(rng)));
  }
  const FitResult r =
      ssf::fit(MortalityData::make(ages, deaths, exposures));
  CHECK(rel_err(r.params.a, kTruth.a) < 0.15);
  CHECK(rel_err(r.params.b, kTruth.b) < 0.15);
  CHECK(rel_err(r.params.sigma2, kTruth.sigma2) < 0.6);
}

TEST_CASE("fit rejections") {
  // Too few cells.
  CHECK_THROWS_AS(ssf::fit(MortalityData::make({30, 31, 32}, {1.0, 1.0, 1.0},
                                               {10.0, 10.0, 10.0})),
                  ssf::InputError);
  // Enough rows, but everything below min_age.
  const MortalityData young = perfect_data(kTruth, 10, 25);
  CHECK_THROWS_AS(ssf::fit(young), ssf::InputError);
  // All-zero deaths.
  std::vector<int> ages;
  std::vector<double> deaths, exposures;
  for (int x = 30; x < 60; ++x) {
    ages.push_back(x);
    deaths.push_back(0.0);
    exposures.push_back(100.0);
  }
  CHECK_THROWS_AS(ssf::fit(MortalityData::make(ages, deaths, exposures)),
                  ssf::InputError);
}

TEST_CASE("min_age option filters cells and is reflected in the range") {
  const MortalityData data = perfect_data(kTruth, 25, 99);
  FitOptions opt;
  opt.min_age = 40;
  const FitResult r = ssf::fit(data, opt);
  CHECK(r.age_min == 40);
  CHECK(r.age_max == 99);
}
