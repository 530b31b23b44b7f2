#pragma once

#include <string>
#include <vector>

namespace ssf {

/// Complete period life table with an open-ended terminal interval.
///
/// Column identities (single-year intervals, x below the open age):
///   d(x) = l(x) - l(x+1)            deaths in [x, x+1)
///   L(x) = l(x+1) + d(x)/2          person-years under UDD
///   m(x) = d(x)/L(x)                central death rate
///   T(x) = sum_{j>=x} L(j)          person-years above x
///   e(x) = T(x)/l(x)                remaining life expectancy
/// The open interval is closed under constant hazard:
///   e(open) = 1/m(open),  L(open) = e(open) * l(open),  d(open) = l(open).
///
/// Instances are immutable after construction and safe to share across
/// threads. Build one with rebuild_from_lx().
class LifeTable {
 public:
  int start_age() const { return start_age_; }
  int open_age() const { return start_age_ + static_cast<int>(lx_.size()) - 1; }
  std::size_t size() const { return lx_.size(); }
  const std::string& label() const { return label_; }

  const std::vector<double>& lx() const { return lx_; }
  const std::vector<double>& dx() const { return dx_; }
  const std::vector<double>& Lx() const { return Lx_; }
  const std::vector<double>& mx() const { return mx_; }
  const std::vector<double>& ex() const { return ex_; }

  double lx_at(int age) const { return lx_[index_of(age)]; }
  double dx_at(int age) const { return dx_[index_of(age)]; }
  double Lx_at(int age) const { return Lx_[index_of(age)]; }
  double mx_at(int age) const { return mx_[index_of(age)]; }
  double ex_at(int age) const { return ex_[index_of(age)]; }

  /// T(x), person-years lived above exact age x.
  double person_years_above(int age) const;

  /// p(x) = l(x+1)/l(x). Defined only below the open age.
  double survival_prob(int age) const;
  /// q(x) = 1 - p(x). Defined only below the open age.
  double death_prob(int age) const;
  /// a(x): mean years lived in [x, x+1) by those dying there.
  /// 0.5 under UDD below the open age; e(open) at the open age.
  double avg_years_in_interval(int age) const;

 private:
  friend LifeTable rebuild_from_lx(std::vector<double> lx, int open_age,
                                   double terminal_m, std::string label);
  LifeTable() = default;
  std::size_t index_of(int age) const;

  int start_age_ = 0;
  std::vector<double> lx_, dx_, Lx_, mx_, ex_;
  std::string label_;
};

/// Rebuild a full table from the survivor column alone. Published d/L
/// columns, when present in source files, are deliberately ignored:
/// deaths and person-years are recomputed from lx (UDD below the open
/// age), and the open interval is closed with e = 1/terminal_m.
///
/// The last entry of `lx` belongs to `open_age`; the start age is
/// open_age - (lx.size() - 1).
///
/// Throws InputError if lx increases anywhere (message names the age),
/// if lx at the open age is zero (the table cannot be closed), or if
/// terminal_m <= 0.
LifeTable rebuild_from_lx(std::vector<double> lx, int open_age,
                          double terminal_m, std::string label = {});

struct OpenInterval {
  double e;  // remaining life expectancy at the open age
  double L;  // person-years lived in the open interval
};

/// Constant-hazard closing of the open-ended interval:
/// e = 1/m_inf, L = e * l_open. Throws InputError unless l_open > 0 and
/// m_inf > 0.
OpenInterval close_open_interval(double l_open, double m_inf);

/// e(x) = T(x)/l(x), unrounded. Throws InputError when x is outside
/// [start_age, open_age].
double life_expectancy(const LifeTable& table, int age);

}  // namespace ssf
