#include "ssf/ggm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ssf/common.hpp"

namespace ssf {

namespace {
constexpr double kLogRatioCutoff = -27.631021115928547;  // ln(1e-12)
constexpr double kMaxTailAge = 150.0;
}  // namespace

void GgmParams::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) ||
      !std::isfinite(sigma2)) {
    throw InputError("GGM parameters must be finite");
  }
  if (!(a > 0.0)) throw InputError("GGM parameter a must be positive");
  if (!(b > 0.0)) throw InputError("GGM parameter b must be positive");
  if (c < 0.0) throw InputError("GGM parameter c must be non-negative");
  if (sigma2 < 0.0) throw InputError("GGM parameter sigma2 must be non-negative");
  if (sigma2 > 0.0 && !std::isfinite(b / sigma2 + c)) {
    throw InputError("GGM hazard plateau b/sigma2 + c is not finite");
  }
}

MortalityData MortalityData::make(std::vector<int> ages,
                                  std::vector<double> deaths,
                                  std::vector<double> exposures) {
  const std::size_t n = ages.size();
  if (deaths.size() != n || exposures.size() != n) {
    throw InputError("ages, deaths and exposures must have equal lengths");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return ages[i] < ages[j]; });

  MortalityData d;
  d.ages.reserve(n);
  d.deaths.reserve(n);
  d.exposures.reserve(n);
  for (std::size_t k : order) {
    if (!d.ages.empty() && d.ages.back() == ages[k]) {
      throw InputError("duplicate age " + std::to_string(ages[k]) +
                       " in mortality data");
    }
    if (!(deaths[k] >= 0.0) || !std::isfinite(deaths[k])) {
      throw InputError("negative or non-finite deaths at age " +
                       std::to_string(ages[k]));
    }
    if (!(exposures[k] >= 0.0) || !std::isfinite(exposures[k])) {
      throw InputError("negative or non-finite exposure at age " +
                       std::to_string(ages[k]));
    }
    if (deaths[k] > 0.0 && !(exposures[k] > 0.0)) {
      throw InputError("zero exposure with positive deaths at age " +
                       std::to_string(ages[k]));
    }
    d.ages.push_back(ages[k]);
    d.deaths.push_back(deaths[k]);
    d.exposures.push_back(exposures[k]);
  }
  return d;
}

double hazard(const GgmParams& p, double age) {
  const double bx = p.b * age;
  double senescent;
  if (p.sigma2 < kSigma2Zero) {
    senescent = p.a * std::exp(bx);
  } else if (bx > 700.0) {
    senescent = p.b / p.sigma2;  // exp(bx) dominates the frailty denominator
  } else {
    const double em1 = std::expm1(bx);
    senescent = p.a * (em1 + 1.0) / (1.0 + p.sigma2 * (p.a / p.b) * em1);
  }
  return senescent + p.c;
}

double log_survival(const GgmParams& p, double age) {
  const double bx = p.b * age;
  if (p.sigma2 < kSigma2Zero) {
    return -p.c * age - (p.a / p.b) * std::expm1(bx);
  }
  double ln_denom;
  if (bx > 700.0) {
    ln_denom = std::log(p.sigma2 * p.a / p.b) + bx;
  } else {
    ln_denom = std::log1p(p.sigma2 * (p.a / p.b) * std::expm1(bx));
  }
  return -p.c * age - ln_denom / p.sigma2;
}

double survival(const GgmParams& p, double age) {
  return std::exp(log_survival(p, age));
}

double log_likelihood(const GgmParams& p, const MortalityData& data) {
  if (data.size() == 0) throw InputError("empty mortality data");
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double lambda = hazard(p, data.ages[i] + 0.5) * data.exposures[i];
    double term;
    if (data.deaths[i] > 0.0) {
      if (!(lambda > 0.0)) return -std::numeric_limits<double>::infinity();
      term = data.deaths[i] * std::log(lambda) - lambda;
    } else {
      term = -lambda;
    }
    if (!std::isfinite(term)) return -std::numeric_limits<double>::infinity();
    acc += term;
  }
  return acc;
}

std::array<double, 4> loglik_gradient_log_scale(const GgmParams& p,
                                                const MortalityData& data) {
  const std::array<double, 4> q = detail::encode_log(p);
  const double h = 1e-5;
  std::array<double, 4> grad{};
  for (int k = 0; k < 4; ++k) {
    std::array<double, 4> hi = q, lo = q;
    hi[k] += h;
    lo[k] -= h;
    grad[k] = (log_likelihood(detail::decode_log(hi), data) -
               log_likelihood(detail::decode_log(lo), data)) /
              (2.0 * h);
  }
  return grad;
}

namespace {

template <typename F>
double adaptive_simpson_step(const F& f, double a, double fa, double b,
                             double fb, double m, double fm, double whole,
                             double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                               depth - 1) +
         adaptive_simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                               depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_step(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

}  // namespace

double remaining_life_expectancy(const GgmParams& p, double age) {
  p.validate();
  if (!(age >= 0.0)) throw InputError("age must be non-negative");
  const double ls0 = log_survival(p, age);
  if (!(ls0 > -700.0)) {
    throw InputError("survival already underflows at age " +
                     std::to_string(age));
  }
  const auto ratio = [&](double t) {
    return std::exp(log_survival(p, age + t) - ls0);
  };

  double upper = kMaxTailAge;
  bool truncated = true;
  for (double t = 5.0; t <= kMaxTailAge; t += 5.0) {
    if (log_survival(p, age + t) - ls0 < kLogRatioCutoff) {
      upper = t;
      truncated = false;
      break;
    }
  }

  const double e = adaptive_simpson(ratio, 0.0, upper, 1e-8);
  if (truncated) {
    // Exponential-tail estimate of the mass beyond the cap.
    const double tail =
        ratio(kMaxTailAge) / std::max(hazard(p, age + kMaxTailAge), 1e-300);
    if (tail > std::max(1e-6, 1e-6 * e)) {
      throw NumericError(
          "life expectancy integral has not converged by t = 150 "
          "(estimated tail " +
          std::to_string(tail) +
          " years); the hazard is too small for a finite mean "
          "(e.g. c = 0 with a near 0)");
    }
  }
  return e;
}

MortalityData mortality_data_from_lifetable(const LifeTable& table,
                                            int min_age) {
  const int open = table.open_age();
  if (min_age >= open) {
    throw InputError("min_age " + std::to_string(min_age) +
                     " must be below the open age " + std::to_string(open));
  }
  const int lo = std::max(min_age, table.start_age());
  std::vector<int> ages;
  std::vector<double> deaths;
  std::vector<double> exposures;
  for (int x = lo; x < open; ++x) {
    ages.push_back(x);
    deaths.push_back(table.dx_at(x));
    exposures.push_back(table.Lx_at(x));
  }
  return MortalityData::make(std::move(ages), std::move(deaths),
                             std::move(exposures));
}

}  // namespace ssf
