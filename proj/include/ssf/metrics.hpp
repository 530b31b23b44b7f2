#pragma once

#include <map>
#include <string>
#include <vector>

#include "ssf/rules.hpp"

namespace ssf {

/// Relative discrepancy (%) between a counterfactual and an official
/// factor, on unrounded values: (f_cf / f_official - 1) * 100.
/// Throws InputError when the official factor is not positive.
double relative_discrepancy(double f_counterfactual, double f_official);

/// Contribution time that makes the factor exactly 1 at a given age:
/// the positive root of u^2 + (100+x) u - 100 e = 0 with u = CT*A.
/// Throws InputError on non-positive e or A, or negative age.
double ct1(double age, double e_rounded, double A);

struct Ct1Feasibility {
  bool feasible = false;
  bool exceeds_entry_age_limit = false;  // CT1 > age - min_entry_age + bonus
  bool below_min_ect_line = false;       // CT1 < min_ect + bonus
  double max_ct = 0.0;
  double min_ct_line = 0.0;
};

/// Checks a CT1 value against the two legal constraints for a class:
/// the maximum CT reachable by someone who entered the labor market at
/// the minimum entry age, and the minimum-CT line min_ect + bonus.
Ct1Feasibility ct1_feasibility(double age, double ct1_value, WorkerClass c,
                               const RuleConfig& cfg);

enum class NraRule { ssf_crossing, points };

struct NraResult {
  WorkerClass worker;
  double entry_age = 0.0;
  double nra = 0.0;
  double ect_at_nra = 0.0;  // full career: NRA - entry age
  NraRule rule = NraRule::ssf_crossing;
};

/// Normal retirement age for a full career started at `entry_age`
/// (so ECT = x - entry_age and CT = ECT + bonus).
///
/// ssf_crossing: smallest x >= entry_age + min_ect where the factor
/// reaches 1. The factor uses e at the floored age, so it is continuous
/// and increasing inside each integer-age segment and may jump at
/// segment boundaries; the crossing segment is bisected to 1e-6 years,
/// and a boundary jump past 1 returns the boundary age itself.
/// Throws NumericError when the factor stays below 1 up to age 100.
///
/// points: smallest x with x + (x - entry_age) + teacher bonus at the
/// year's threshold and ECT >= min_ect, solved in closed form.
NraResult nra(WorkerClass c, double entry_age, const Scenario& scenario,
              NraRule rule);

enum class FactorRule { ssf_only, combined };

/// Rectangular factor-table layout: age columns by CT or ECT rows.
/// For ssf_only tables the rows are CT values and a cell is populated
/// when feasible for at least one worker class; for combined tables the
/// rows are ECT values of `worker`.
struct FactorGrid {
  int age_min = 43;
  int age_max = 60;
  int row_min = 35;
  int row_max = 52;
  bool rows_are_ect = false;
  WorkerClass worker = WorkerClass::female_worker;
};

/// Factor values over a grid; infeasible cells hold NaN.
struct FactorMatrix {
  FactorGrid grid;
  std::vector<std::vector<double>> cells;  // [row][age column]

  double at(int row_value, int age) const;
  bool populated(int row_value, int age) const;
};

FactorMatrix build_factor_matrix(const MortalitySource& source, int ssf_year,
                                 FactorRule rule, const FactorGrid& grid,
                                 const RuleConfig& cfg,
                                 EMode e_mode = EMode::floor_rounded);

/// One year of an official-vs-counterfactual comparison. `discrepancy`
/// holds relative_discrepancy of the unrounded factors, cellwise.
/// A year that failed to resolve carries the message in `error` and
/// empty matrices.
struct ScenarioComparison {
  int ssf_year = 0;
  FactorRule rule = FactorRule::ssf_only;
  FactorMatrix official;
  FactorMatrix counterfactual;
  FactorMatrix discrepancy;
  std::string error;
};

ScenarioComparison compare_sources(const MortalitySource& official,
                                   const MortalitySource& counterfactual,
                                   int ssf_year, FactorRule rule,
                                   const FactorGrid& grid,
                                   const RuleConfig& cfg);

/// Mortality sources keyed by life-table year (the sweep maps an SSF
/// year t to the table of year t - 2).
struct SweepSources {
  std::map<int, MortalitySource> official;
  std::map<int, MortalitySource> counterfactual;
};

/// One comparison per year under the rule in force: SSF-only before the
/// points rule exists, both modes for 2015 (the coexistence year), and
/// combined from 2016 on while points are configured. Years whose table
/// vintage is missing produce an error entry and the sweep continues.
std::vector<ScenarioComparison> sweep(const std::vector<int>& ssf_years,
                                      const SweepSources& sources,
                                      const FactorGrid& grid,
                                      const RuleConfig& cfg);

}  // namespace ssf
