#pragma once

#include <array>
#include <map>
#include <string>

#include "ssf/sources.hpp"

namespace ssf {

enum class WorkerClass { male_worker, female_worker, male_teacher, female_teacher };

constexpr std::array<WorkerClass, 4> kAllWorkerClasses = {
    WorkerClass::male_worker, WorkerClass::female_worker,
    WorkerClass::male_teacher, WorkerClass::female_teacher};

bool is_female(WorkerClass c);
bool is_teacher(WorkerClass c);
std::string to_string(WorkerClass c);
WorkerClass worker_class_from_string(const std::string& name);

struct PointsThreshold {
  double female = 0.0;
  double male = 0.0;
};

/// All legal constants of the rule family. Defaults follow the statute:
/// A = 0.31; contribution-time bonuses 0/5/5/10 years and minimum
/// effective contribution times 35/30/30/25 years for male worker,
/// female worker, male teacher and female teacher respectively; the
/// progressive points rule at 85/95 for 2015-2018 and 86/96 for 2019
/// (+5 points for teachers). Benefit ceiling and floor are scenario
/// inputs (0 = unset).
struct RuleConfig {
  double A = 0.31;
  std::array<double, 4> bonuses = {0.0, 5.0, 5.0, 10.0};
  std::array<double, 4> min_ect_years = {35.0, 30.0, 30.0, 25.0};
  std::map<int, PointsThreshold> points = {
      {2015, {85.0, 95.0}}, {2016, {85.0, 95.0}}, {2017, {85.0, 95.0}},
      {2018, {85.0, 95.0}}, {2019, {86.0, 96.0}}};
  double teacher_point_bonus = 5.0;
  double ceiling = 0.0;     // C
  double floor_wage = 0.0;  // W
  double min_entry_age = 18.0;

  double bonus(WorkerClass c) const {
    return bonuses[static_cast<std::size_t>(c)];
  }
  double min_ect(WorkerClass c) const {
    return min_ect_years[static_cast<std::size_t>(c)];
  }
  bool has_points(int year) const { return points.count(year) > 0; }

  /// Throws InputError on A <= 0, negative bonuses, or a year whose
  /// female threshold is not below the male one.
  void validate() const;
};

/// A calendar year bound to the mortality source its SSF values are
/// computed from, plus the legal constants. When built from official
/// vintages, the source's table year is ssf_year - 2.
struct Scenario {
  int ssf_year;
  MortalitySource source;
  RuleConfig config;
  EMode e_mode = EMode::floor_rounded;
};

/// Publication lag: the factor computed in calendar year t uses the
/// life table of year t - 2.
inline int table_year_for(int ssf_year) { return ssf_year - 2; }

/// The factor itself, unrounded:
///   ssf = (CT*A / e) * (1 + (x + CT*A) / 100).
/// `e_rounded` must already carry the floor-and-round convention
/// (see rounded_e_for_ssf). Throws InputError on non-positive inputs.
double ssf(double age, double ct, double e_rounded, double A);

struct EffectiveCt {
  double ct = 0.0;         // ECT plus the worker-class bonus
  bool meets_min = false;  // ECT >= statutory minimum for the class
};

/// CT = ECT + bonus(class), with the minimum-contribution check reported
/// alongside. Throws InputError on negative ECT.
EffectiveCt effective_ct(double ect, WorkerClass c, const RuleConfig& cfg);

/// Benefit clamping: max(min(factor * M, ceiling), floor).
/// Throws InputError when floor > ceiling or any amount is non-positive.
double benefit(double mean_salary, double factor, double ceiling,
               double floor_wage);

/// Transition factor over the first 60 months the rule was phased in:
/// f = ssf*n/60 + (60-n)/60. Throws InputError when n is outside [0, 60].
double transition_factor(double ssf_value, int months);

/// The progressive points rule: age + ECT (+5 for teachers) reaches the
/// year's threshold for the worker's sex AND ECT meets the statutory
/// minimum. Throws InputError when the year has no configured points
/// (message lists the known years).
bool meets_points(double age, double ect, WorkerClass c, int year,
                  const RuleConfig& cfg);

/// Factor under the coexistence of the SSF and points rules: when the
/// points conditions are met the worker takes the better of the two, so
/// the result is max(1, ssf); otherwise (or in years where the points
/// rule is absent) it is the plain ssf. Life expectancy is drawn from
/// scenario.source via rounded_e_for_ssf. Throws InputError when ECT is
/// below the statutory minimum for the class.
double combined_factor(double age, double ect, WorkerClass c,
                       const Scenario& scenario);

}  // namespace ssf
