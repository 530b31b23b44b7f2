#include "ssf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssf/common.hpp"

namespace ssf {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kEps = 1e-9;
}  // namespace

double relative_discrepancy(double f_counterfactual, double f_official) {
  if (!(f_official > 0.0)) {
    throw InputError("official factor must be positive for a relative "
                     "discrepancy");
  }
  return (f_counterfactual / f_official - 1.0) * 100.0;
}

double ct1(double age, double e_rounded, double A) {
  if (!(age >= 0.0)) throw InputError("age must be non-negative");
  if (!(e_rounded > 0.0)) throw InputError("life expectancy must be positive");
  if (!(A > 0.0)) throw InputError("contribution rate must be positive");
  const double q = 100.0 + age;
  const double u = 0.5 * (-q + std::sqrt(q * q + 400.0 * e_rounded));
  return u / A;
}

Ct1Feasibility ct1_feasibility(double age, double ct1_value, WorkerClass c,
                               const RuleConfig& cfg) {
  Ct1Feasibility r;
  r.max_ct = age - cfg.min_entry_age + cfg.bonus(c);
  r.min_ct_line = cfg.min_ect(c) + cfg.bonus(c);
  r.exceeds_entry_age_limit = ct1_value > r.max_ct + kEps;
  r.below_min_ect_line = ct1_value < r.min_ct_line - kEps;
  r.feasible = !r.exceeds_entry_age_limit && !r.below_min_ect_line;
  return r;
}

namespace {

NraResult nra_ssf_crossing(WorkerClass c, double entry_age,
                           const Scenario& scenario) {
  const RuleConfig& cfg = scenario.config;
  const double beta = cfg.bonus(c);
  const double x_min = entry_age + cfg.min_ect(c);
  constexpr double x_max = 100.0;
  constexpr double tol = 1e-6;

  // Full-career factor with a fixed per-segment e (floor-age lookup).
  const auto factor = [&](double x, double e) {
    return ssf(x, (x - entry_age) + beta, e, cfg.A);
  };

  for (int k = static_cast<int>(std::floor(x_min));
       k < static_cast<int>(x_max); ++k) {
    const double lo = std::max(x_min, static_cast<double>(k));
    const double hi = static_cast<double>(k) + 1.0;
    if (lo >= hi) continue;
    const double e = rounded_e_for_ssf(scenario.source, lo, EMode::floor_rounded);
    if (factor(lo, e) >= 1.0) {
      // Already at or past 1 at the segment start: either the minimum
      // eligible age or a floor-lookup jump at the integer boundary.
      return {c, entry_age, lo, lo - entry_age, NraRule::ssf_crossing};
    }
    if (factor(hi, e) < 1.0) continue;
    double a = lo, b = hi;
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      (factor(mid, e) < 1.0 ? a : b) = mid;
    }
    const double x = 0.5 * (a + b);
    return {c, entry_age, x, x - entry_age, NraRule::ssf_crossing};
  }
  throw NumericError("the factor never reaches 1 below age 100 for " +
                     to_string(c) + " entering at age " +
                     std::to_string(entry_age) +
                     " (life expectancies too high or career too short)");
}

NraResult nra_points(WorkerClass c, double entry_age,
                     const Scenario& scenario) {
  const RuleConfig& cfg = scenario.config;
  auto it = cfg.points.find(scenario.ssf_year);
  if (it == cfg.points.end()) {
    std::string known;
    for (const auto& [y, thr] : cfg.points) {
      if (!known.empty()) known += ", ";
      known += std::to_string(y);
    }
    throw InputError("no points thresholds configured for year " +
                     std::to_string(scenario.ssf_year) +
                     " (known years: " + known + ")");
  }
  const double threshold = is_female(c) ? it->second.female : it->second.male;
  const double tb = is_teacher(c) ? cfg.teacher_point_bonus : 0.0;
  // x + (x - entry_age) + tb = threshold, subject to ECT >= min_ect.
  const double x_points = 0.5 * (threshold + entry_age - tb);
  const double x = std::max(x_points, entry_age + cfg.min_ect(c));
  return {c, entry_age, x, x - entry_age, NraRule::points};
}

}  // namespace

NraResult nra(WorkerClass c, double entry_age, const Scenario& scenario,
              NraRule rule) {
  if (entry_age < scenario.config.min_entry_age - kEps) {
    throw InputError("entry age " + std::to_string(entry_age) +
                     " is below the minimum entry age " +
                     std::to_string(scenario.config.min_entry_age));
  }
  return rule == NraRule::points ? nra_points(c, entry_age, scenario)
                                 : nra_ssf_crossing(c, entry_age, scenario);
}

double FactorMatrix::at(int row_value, int age) const {
  return cells[static_cast<std::size_t>(row_value - grid.row_min)]
              [static_cast<std::size_t>(age - grid.age_min)];
}

bool FactorMatrix::populated(int row_value, int age) const {
  return !std::isnan(at(row_value, age));
}

namespace {

bool cell_feasible(int row, int age, const FactorGrid& grid,
                   const RuleConfig& cfg) {
  const double max_ect = age - cfg.min_entry_age;
  if (grid.rows_are_ect) {
    const WorkerClass c = grid.worker;
    return row >= cfg.min_ect(c) - kEps && row <= max_ect + kEps;
  }
  // CT rows: populated when feasible for at least one class.
  for (WorkerClass c : kAllWorkerClasses) {
    const double ect = row - cfg.bonus(c);
    if (ect >= cfg.min_ect(c) - kEps && ect <= max_ect + kEps) return true;
  }
  return false;
}

}  // namespace

FactorMatrix build_factor_matrix(const MortalitySource& source, int ssf_year,
                                 FactorRule rule, const FactorGrid& grid,
                                 const RuleConfig& cfg, EMode e_mode) {
  if (grid.age_min > grid.age_max || grid.row_min > grid.row_max) {
    throw InputError("factor grid has an empty age or row range");
  }
  if (rule == FactorRule::combined && !grid.rows_are_ect) {
    throw InputError("combined-rule tables need ECT rows for a single "
                     "worker class (CT rows are class-independent)");
  }
  FactorMatrix m;
  m.grid = grid;
  const std::size_t n_rows =
      static_cast<std::size_t>(grid.row_max - grid.row_min + 1);
  const std::size_t n_ages =
      static_cast<std::size_t>(grid.age_max - grid.age_min + 1);
  m.cells.assign(n_rows, std::vector<double>(n_ages, kNan));

  for (int age = grid.age_min; age <= grid.age_max; ++age) {
    const double e = rounded_e_for_ssf(source, age, e_mode);
    for (int row = grid.row_min; row <= grid.row_max; ++row) {
      if (!cell_feasible(row, age, grid, cfg)) continue;
      const double ct =
          grid.rows_are_ect ? row + cfg.bonus(grid.worker) : row;
      double f = ssf(age, ct, e, cfg.A);
      if (rule == FactorRule::combined && cfg.has_points(ssf_year) &&
          meets_points(age, row, grid.worker, ssf_year, cfg)) {
        f = std::max(1.0, f);
      }
      m.cells[static_cast<std::size_t>(row - grid.row_min)]
             [static_cast<std::size_t>(age - grid.age_min)] = f;
    }
  }
  return m;
}

ScenarioComparison compare_sources(const MortalitySource& official,
                                   const MortalitySource& counterfactual,
                                   int ssf_year, FactorRule rule,
                                   const FactorGrid& grid,
                                   const RuleConfig& cfg) {
  ScenarioComparison cmp;
  cmp.ssf_year = ssf_year;
  cmp.rule = rule;
  cmp.official = build_factor_matrix(official, ssf_year, rule, grid, cfg);
  cmp.counterfactual =
      build_factor_matrix(counterfactual, ssf_year, rule, grid, cfg);
  cmp.discrepancy = cmp.official;
  for (std::size_t r = 0; r < cmp.discrepancy.cells.size(); ++r) {
    for (std::size_t a = 0; a < cmp.discrepancy.cells[r].size(); ++a) {
      const double fo = cmp.official.cells[r][a];
      const double fc = cmp.counterfactual.cells[r][a];
      cmp.discrepancy.cells[r][a] = (std::isnan(fo) || std::isnan(fc))
                                        ? kNan
                                        : relative_discrepancy(fc, fo);
    }
  }
  return cmp;
}

std::vector<ScenarioComparison> sweep(const std::vector<int>& ssf_years,
                                      const SweepSources& sources,
                                      const FactorGrid& grid,
                                      const RuleConfig& cfg) {
  std::vector<ScenarioComparison> out;
  for (int year : ssf_years) {
    std::vector<FactorRule> rules;
    if (!cfg.has_points(year) || !grid.rows_are_ect) {
      rules = {FactorRule::ssf_only};
    } else if (year == 2015) {
      rules = {FactorRule::ssf_only, FactorRule::combined};  // coexistence year
    } else {
      rules = {FactorRule::combined};
    }

    const int ty = table_year_for(year);
    const auto off = sources.official.find(ty);
    const auto cf = sources.counterfactual.find(ty);
    if (off == sources.official.end() || cf == sources.counterfactual.end()) {
      ScenarioComparison err;
      err.ssf_year = year;
      err.rule = rules.front();
      err.error = "missing table vintage " + std::to_string(ty) +
                  " for SSF year " + std::to_string(year);
      out.push_back(std::move(err));
      continue;
    }
    for (FactorRule rule : rules) {
      out.push_back(
          compare_sources(off->second, cf->second, year, rule, grid, cfg));
    }
  }
  return out;
}

}  // namespace ssf
