#include "ssf/rules.hpp"

#include <algorithm>
#include <cmath>

#include "ssf/common.hpp"

namespace ssf {

namespace {
// Slack for >= comparisons on sums of user-supplied reals.
constexpr double kEps = 1e-9;
}  // namespace

bool is_female(WorkerClass c) {
  return c == WorkerClass::female_worker || c == WorkerClass::female_teacher;
}

bool is_teacher(WorkerClass c) {
  return c == WorkerClass::male_teacher || c == WorkerClass::female_teacher;
}

std::string to_string(WorkerClass c) {
  switch (c) {
    case WorkerClass::male_worker: return "male_worker";
    case WorkerClass::female_worker: return "female_worker";
    case WorkerClass::male_teacher: return "male_teacher";
    case WorkerClass::female_teacher: return "female_teacher";
  }
  return "unknown";
}

WorkerClass worker_class_from_string(const std::string& name) {
  for (WorkerClass c : kAllWorkerClasses) {
    if (to_string(c) == name) return c;
  }
  throw InputError("unknown worker class '" + name +
                   "' (expected male_worker, female_worker, male_teacher "
                   "or female_teacher)");
}

void RuleConfig::validate() const {
  if (!(A > 0.0)) throw InputError("contribution-rate constant A must be positive");
  for (WorkerClass c : kAllWorkerClasses) {
    if (bonus(c) < 0.0) {
      throw InputError("bonus for " + to_string(c) + " must be >= 0");
    }
    if (min_ect(c) < 0.0) {
      throw InputError("minimum contribution time for " + to_string(c) +
                       " must be >= 0");
    }
  }
  for (const auto& [year, thr] : points) {
    if (!(thr.female < thr.male)) {
      throw InputError("points for year " + std::to_string(year) +
                       ": female threshold must be below the male one");
    }
  }
  if (ceiling > 0.0 && floor_wage > 0.0 && floor_wage > ceiling) {
    throw InputError("benefit floor exceeds the ceiling");
  }
  if (min_entry_age < 0.0) throw InputError("min_entry_age must be >= 0");
}

double ssf(double age, double ct, double e_rounded, double A) {
  if (!(age > 0.0) || !(ct > 0.0) || !(e_rounded > 0.0) || !(A > 0.0)) {
    throw InputError("ssf requires positive age, contribution time, life "
                     "expectancy and contribution rate");
  }
  const double u = ct * A;
  return (u / e_rounded) * (1.0 + (age + u) / 100.0);
}

EffectiveCt effective_ct(double ect, WorkerClass c, const RuleConfig& cfg) {
  if (!(ect >= 0.0)) throw InputError("effective contribution time must be >= 0");
  EffectiveCt r;
  r.ct = ect + cfg.bonus(c);
  r.meets_min = ect >= cfg.min_ect(c) - kEps;
  return r;
}

double benefit(double mean_salary, double factor, double ceiling,
               double floor_wage) {
  if (!(mean_salary > 0.0) || !(ceiling > 0.0) || !(floor_wage > 0.0)) {
    throw InputError("benefit requires positive salary base, ceiling and floor");
  }
  if (floor_wage > ceiling) {
    throw InputError("benefit floor exceeds the ceiling");
  }
  return std::max(std::min(factor * mean_salary, ceiling), floor_wage);
}

double transition_factor(double ssf_value, int months) {
  if (months < 0 || months > 60) {
    throw InputError("transition months must lie in [0, 60], got " +
                     std::to_string(months));
  }
  const double n = static_cast<double>(months);
  return ssf_value * n / 60.0 + (60.0 - n) / 60.0;
}

bool meets_points(double age, double ect, WorkerClass c, int year,
                  const RuleConfig& cfg) {
  auto it = cfg.points.find(year);
  if (it == cfg.points.end()) {
    std::string known;
    for (const auto& [y, thr] : cfg.points) {
      if (!known.empty()) known += ", ";
      known += std::to_string(y);
    }
    throw InputError("no points thresholds configured for year " +
                     std::to_string(year) + " (known years: " + known + ")");
  }
  const double threshold = is_female(c) ? it->second.female : it->second.male;
  const double sum =
      age + ect + (is_teacher(c) ? cfg.teacher_point_bonus : 0.0);
  return sum >= threshold - kEps && ect >= cfg.min_ect(c) - kEps;
}

double combined_factor(double age, double ect, WorkerClass c,
                       const Scenario& scenario) {
  const RuleConfig& cfg = scenario.config;
  const EffectiveCt ef = effective_ct(ect, c, cfg);
  if (!ef.meets_min) {
    throw InputError("ineligible: ECT " + std::to_string(ect) + " is below the "
                     "minimum " + std::to_string(cfg.min_ect(c)) + " for " +
                     to_string(c));
  }
  const double e = rounded_e_for_ssf(scenario.source, age, scenario.e_mode);
  const double f = ssf(age, ef.ct, e, cfg.A);
  if (cfg.has_points(scenario.ssf_year) &&
      meets_points(age, ect, c, scenario.ssf_year, cfg)) {
    return std::max(1.0, f);
  }
  return f;
}

}  // namespace ssf
