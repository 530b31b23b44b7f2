#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "ssf/common.hpp"
#include "ssf/ggm.hpp"

namespace ssf {

namespace {

constexpr std::size_t kMinCells = 8;

struct SimplexResult {
  std::array<double, 4> x{};
  double f = std::numeric_limits<double>::infinity();
  bool converged = false;
};

using Objective = double (*)(const std::array<double, 4>&,
                             const MortalityData&);

double neg_loglik(const std::array<double, 4>& q, const MortalityData& data) {
  const double ll = log_likelihood(detail::decode_log(q), data);
  return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
}

/// Nelder-Mead simplex descent on the 4 log-scale coordinates.
/// Standard reflection/expansion/contraction/shrink coefficients;
/// stops when the simplex f-spread falls below tol relative to |f|.
SimplexResult nelder_mead(Objective obj, const MortalityData& data,
                          const std::array<double, 4>& x0, double step,
                          double tol, int max_iters) {
  constexpr int n = 4;
  std::array<std::array<double, 4>, n + 1> verts;
  std::array<double, n + 1> fv;
  for (int i = 0; i <= n; ++i) {
    verts[i] = x0;
    if (i > 0) verts[i][i - 1] += step;
    fv[i] = obj(verts[i], data);
  }

  bool converged = false;
  for (int iter = 0; iter < max_iters; ++iter) {
    std::array<int, n + 1> idx;
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = idx[0];
    const int worst = idx[n];
    const int second_worst = idx[n - 1];

    const double spread = std::abs(fv[worst] - fv[best]);
    if (spread <= tol * (std::abs(fv[best]) + std::abs(fv[worst])) + 1e-14) {
      converged = true;
      break;
    }

    std::array<double, 4> centroid{};
    for (int i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (int k = 0; k < 4; ++k) centroid[k] += verts[i][k] / n;
    }

    const auto blend = [&](double coef) {
      std::array<double, 4> p;
      for (int k = 0; k < 4; ++k) {
        p[k] = centroid[k] + coef * (verts[worst][k] - centroid[k]);
      }
      return p;
    };

    const std::array<double, 4> reflected = blend(-1.0);
    const double f_ref = obj(reflected, data);
    if (f_ref < fv[best]) {
      const std::array<double, 4> expanded = blend(-2.0);
      const double f_exp = obj(expanded, data);
      if (f_exp < f_ref) {
        verts[worst] = expanded;
        fv[worst] = f_exp;
      } else {
        verts[worst] = reflected;
        fv[worst] = f_ref;
      }
      continue;
    }
    if (f_ref < fv[second_worst]) {
      verts[worst] = reflected;
      fv[worst] = f_ref;
      continue;
    }
    const std::array<double, 4> contracted = blend(0.5);
    const double f_con = obj(contracted, data);
    if (f_con < fv[worst]) {
      verts[worst] = contracted;
      fv[worst] = f_con;
      continue;
    }
    for (int i = 0; i <= n; ++i) {  // shrink toward the best vertex
      if (i == best) continue;
      for (int k = 0; k < 4; ++k) {
        verts[i][k] = verts[best][k] + 0.5 * (verts[i][k] - verts[best][k]);
      }
      fv[i] = obj(verts[i], data);
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i) {
    if (fv[i] < fv[best]) best = i;
  }
  return {verts[best], fv[best], converged};
}

double halton(std::uint64_t index, std::uint64_t base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

double splitmix_unit(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z = z ^ (z >> 31);
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

/// Seeded Halton points over the log-scaled parameter boxes
/// a in [1e-8, 1e-2], b in [0.01, 0.3], c in [0, 0.05],
/// sigma2 in [1e-6, 1]. The seed rotates the sequence (Cranley-Patterson).
std::vector<std::array<double, 4>> make_starts(int restarts,
                                               std::uint64_t seed) {
  static constexpr std::uint64_t bases[4] = {2, 3, 5, 7};
  const double lo[4] = {std::log(1e-8), std::log(0.01), std::log(1e-12),
                        std::log(1e-6 + 1e-12)};
  const double hi[4] = {std::log(1e-2), std::log(0.3), std::log(0.05 + 1e-12),
                        std::log(1.0 + 1e-12)};
  std::uint64_t state = seed;
  double rot[4];
  for (double& r : rot) r = splitmix_unit(state);

  std::vector<std::array<double, 4>> starts(restarts);
  for (int i = 0; i < restarts; ++i) {
    for (int d = 0; d < 4; ++d) {
      double u = halton(static_cast<std::uint64_t>(i) + 1, bases[d]) + rot[d];
      u -= std::floor(u);
      starts[i][d] = lo[d] + u * (hi[d] - lo[d]);
    }
  }
  return starts;
}

}  // namespace

std::array<double, 4> detail::encode_log(const GgmParams& p) {
  return {std::log(p.a), std::log(p.b), std::log(p.c + 1e-12),
          std::log(p.sigma2 + 1e-12)};
}

GgmParams detail::decode_log(const std::array<double, 4>& q) {
  GgmParams p;
  p.a = std::exp(q[0]);
  p.b = std::exp(q[1]);
  p.c = std::max(0.0, std::exp(q[2]) - 1e-12);
  p.sigma2 = std::max(0.0, std::exp(q[3]) - 1e-12);
  return p;
}

FitResult fit(const MortalityData& data, const FitOptions& options) {
  if (options.restarts < 1) throw InputError("restarts must be >= 1");
  if (!(options.tol > 0.0)) throw InputError("tol must be positive");

  std::vector<int> ages;
  std::vector<double> deaths;
  std::vector<double> exposures;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.ages[i] < options.min_age) continue;
    ages.push_back(data.ages[i]);
    deaths.push_back(data.deaths[i]);
    exposures.push_back(data.exposures[i]);
  }
  if (ages.size() < kMinCells) {
    throw InputError("fit needs at least " + std::to_string(kMinCells) +
                     " age cells at or above age " +
                     std::to_string(options.min_age) + ", got " +
                     std::to_string(ages.size()));
  }
  const MortalityData cells =
      MortalityData::make(std::move(ages), std::move(deaths),
                          std::move(exposures));
  if (std::all_of(cells.deaths.begin(), cells.deaths.end(),
                  [](double d) { return d == 0.0; })) {
    throw InputError("all death counts are zero; nothing to fit");
  }

  const auto starts = make_starts(options.restarts, options.seed);
  std::vector<SimplexResult> results(starts.size());
  const auto run_start = [&](std::size_t i) {
    results[i] = nelder_mead(&neg_loglik, cells, starts[i], 0.5, options.tol,
                             options.max_iters);
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (options.parallel && starts.size() > 1 && hw > 1) {
    std::vector<std::future<void>> tasks;
    tasks.reserve(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i) {
      tasks.push_back(std::async(std::launch::async, run_start, i));
    }
    for (auto& t : tasks) t.get();
  } else {
    for (std::size_t i = 0; i < starts.size(); ++i) run_start(i);
  }

  std::size_t best = 0;  // ties break toward the lower start index
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].f < results[best].f) best = i;
  }

  SimplexResult final = nelder_mead(&neg_loglik, cells, results[best].x, 0.05,
                                    options.tol * 1e-3, options.max_iters * 2);
  if (results[best].f < final.f) final = results[best];
  if (!std::isfinite(final.f)) {
    throw NumericError("GGM fit failed: no start produced a finite likelihood");
  }

  FitResult r;
  r.params = detail::decode_log(final.x);
  if (r.params.sigma2 < kSigma2Zero) r.params.sigma2 = 0.0;
  r.loglik = log_likelihood(r.params, cells);
  r.converged = final.converged;
  r.n_restarts_used = options.restarts;
  r.age_min = cells.ages.front();
  r.age_max = cells.ages.back();
  return r;
}

}  // namespace ssf
