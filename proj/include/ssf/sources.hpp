#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>

#include "ssf/ggm.hpp"
#include "ssf/lifetable.hpp"

namespace ssf {

/// Gazette-style life expectancy vector: one-decimal e values keyed by
/// integer age. Used when only the published e column is available.
struct EVector {
  std::map<int, double> e_by_age;
  std::string label;
};

/// How a mortality source is queried for the SSF life expectancy.
///   floor_rounded: e at the floored age, rounded half-up to 1 decimal
///                  (the statutory convention; the only option for
///                  table and e-vector sources).
///   exact_age:     e evaluated at the exact, possibly fractional, age
///                  (fitted models only; still reported to 1 decimal).
enum class EMode { floor_rounded, exact_age };

/// A mortality source a scenario can draw life expectancies from:
/// an official life table, fitted GGM parameters, or a bare e-vector.
class MortalitySource {
 public:
  explicit MortalitySource(LifeTable table) : src_(std::move(table)) {}
  explicit MortalitySource(GgmParams params, std::string label = "ggm")
      : src_(params), label_(std::move(label)) {
    params.validate();
  }
  explicit MortalitySource(EVector evector) : src_(std::move(evector)) {}

  bool is_model() const { return std::holds_alternative<GgmParams>(src_); }
  const std::string& label() const;

  const LifeTable* table() const { return std::get_if<LifeTable>(&src_); }
  const GgmParams* params() const { return std::get_if<GgmParams>(&src_); }
  const EVector* evector() const { return std::get_if<EVector>(&src_); }

 private:
  std::variant<LifeTable, GgmParams, EVector> src_;
  std::string label_;
};

/// Life expectancy as the SSF formula consumes it, to one decimal.
/// Table and e-vector sources always use the floored age; a model source
/// honors `mode`. Throws InputError when the (floored) age is outside a
/// table or e-vector range.
double rounded_e_for_ssf(const MortalitySource& source, double age,
                         EMode mode = EMode::floor_rounded);

}  // namespace ssf
