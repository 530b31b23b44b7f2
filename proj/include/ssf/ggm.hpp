#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ssf/lifetable.hpp"

namespace ssf {

/// Below this value sigma2 is treated as exactly zero and the explicit
/// Gompertz-Makeham formulas are used.
inline constexpr double kSigma2Zero = 1e-10;

/// Parameters of the gamma-Gompertz-Makeham hazard
///   mu(x) = a e^{bx} / (1 + sigma2 (a/b)(e^{bx} - 1)) + c.
/// a: hazard level at age 0; b: senescence rate; c: age-independent
/// (Makeham) level; sigma2: frailty variance. sigma2 = 0 is admitted as
/// the plain Gompertz-Makeham limit. With sigma2 > 0 the hazard levels
/// off at b/sigma2 + c.
struct GgmParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double sigma2 = 0.0;

  /// Throws InputError unless a, b > 0, c >= 0, sigma2 >= 0, everything
  /// finite, and the plateau b/sigma2 + c is finite when sigma2 > 0.
  void validate() const;
};

/// Death counts and person-years of exposure per single-year age bin
/// [x, x+1). Rows are kept sorted by age; duplicate ages are rejected.
struct MortalityData {
  std::vector<int> ages;
  std::vector<double> deaths;
  std::vector<double> exposures;

  /// Validates and normalizes (sorts rows by age). Throws InputError on
  /// length mismatch, duplicate ages, negative deaths, negative
  /// exposures, or zero exposure where deaths are positive.
  static MortalityData make(std::vector<int> ages, std::vector<double> deaths,
                            std::vector<double> exposures);

  std::size_t size() const { return ages.size(); }
};

struct FitOptions {
  int min_age = 30;        // cells below this age are excluded from the fit
  int restarts = 32;       // multi-start count
  std::uint64_t seed = 1;  // drives the low-discrepancy start rotation
  double tol = 1e-10;      // relative simplex f-spread tolerance
  int max_iters = 4000;    // per start
  bool parallel = true;    // run starts concurrently (result is identical
                           // to sequential execution for the same seed)
};

struct FitResult {
  GgmParams params;
  double loglik = 0.0;
  bool converged = false;
  int n_restarts_used = 0;
  int age_min = 0;
  int age_max = 0;
};

/// Force of mortality mu(x). Exact Gompertz-Makeham when sigma2 is below
/// kSigma2Zero.
double hazard(const GgmParams& p, double age);

/// ln S(x) where S(x) = e^{-cx} (1 + sigma2 (a/b)(e^{bx}-1))^{-1/sigma2};
/// sigma2 -> 0 limit: -cx - (a/b)(e^{bx}-1).
double log_survival(const GgmParams& p, double age);

/// S(x) = exp(log_survival). S(0) = 1, non-increasing,
/// -d/dx ln S = hazard.
double survival(const GgmParams& p, double age);

/// Poisson log-likelihood with the hazard evaluated mid-bin:
///   l = sum_x [ D_x ln(mu(x+0.5) E_x) - mu(x+0.5) E_x ]
/// (the constant ln D_x! is omitted). Returns -infinity when some cell
/// has D > 0 with mu*E = 0. Throws InputError on empty data.
double log_likelihood(const GgmParams& p, const MortalityData& data);

/// Central finite differences of the log-likelihood with respect to the
/// log-scale optimization coordinates (ln a, ln b, ln(c+1e-12),
/// ln(sigma2+1e-12)). Used for stationarity checks at a fitted optimum.
std::array<double, 4> loglik_gradient_log_scale(const GgmParams& p,
                                                const MortalityData& data);

/// Remaining life expectancy e(x) = int_0^inf S(x+t)/S(x) dt by adaptive
/// quadrature, truncated where the survival ratio drops below 1e-12
/// (capped at t = 150), absolute tolerance 1e-8 years.
/// Throws InputError when S(x) underflows to zero and NumericError when
/// the truncated tail is not negligible (the integral effectively
/// diverges, e.g. c = 0 with a -> 0).
double remaining_life_expectancy(const GgmParams& p, double age);

/// D_x = d(x), E_x = L(x) from a rebuilt table, for ages
/// min_age .. open_age - 1 (the open interval is excluded).
/// Throws InputError when min_age >= open_age.
MortalityData mortality_data_from_lifetable(const LifeTable& table,
                                            int min_age);

/// Maximum-likelihood fit of the four GGM parameters.
///
/// Deterministic multi-start search: `restarts` seeded low-discrepancy
/// points over log-scaled boxes a in [1e-8,1e-2], b in [0.01,0.3],
/// c in [0,0.05], sigma2 in [1e-6,1], each polished by Nelder-Mead
/// simplex descent, then a tighter polish pass from the best start.
/// Identical results for the same seed whether starts run sequentially
/// or in parallel. Fitted sigma2 below kSigma2Zero is reported as 0.
///
/// Throws InputError when fewer than 8 cells remain at or above
/// options.min_age, or when all deaths are zero.
FitResult fit(const MortalityData& data, const FitOptions& options = {});

namespace detail {
// Log-scale optimization coordinates:
// (ln a, ln b, ln(c + 1e-12), ln(sigma2 + 1e-12)).
std::array<double, 4> encode_log(const GgmParams& p);
GgmParams decode_log(const std::array<double, 4>& q);
}  // namespace detail

}  // namespace ssf
