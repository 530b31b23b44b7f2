#include "ssf/sources.hpp"

#include <cmath>
#include <string>

#include "ssf/common.hpp"

namespace ssf {

const std::string& MortalitySource::label() const {
  if (const LifeTable* t = table()) return t->label();
  if (const EVector* v = evector()) return v->label;
  return label_;
}

double rounded_e_for_ssf(const MortalitySource& source, double age,
                         EMode mode) {
  if (!(age >= 0.0) || !std::isfinite(age)) {
    throw InputError("age must be a non-negative finite value");
  }
  double e;
  if (const GgmParams* p = source.params()) {
    const double lookup_age =
        mode == EMode::exact_age ? age : std::floor(age);
    e = remaining_life_expectancy(*p, lookup_age);
  } else if (const LifeTable* t = source.table()) {
    e = life_expectancy(*t, static_cast<int>(std::floor(age)));
  } else {
    const EVector& v = *source.evector();
    const int a = static_cast<int>(std::floor(age));
    auto it = v.e_by_age.find(a);
    if (it == v.e_by_age.end()) {
      throw InputError("age " + std::to_string(a) + " not present in e-vector" +
                       (v.label.empty() ? "" : " '" + v.label + "'"));
    }
    e = it->second;
  }
  return round_half_up(e, 1);
}

}  // namespace ssf
