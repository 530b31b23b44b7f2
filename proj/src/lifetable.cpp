#include "ssf/lifetable.hpp"

#include <cmath>
#include <utility>

#include "ssf/common.hpp"

namespace ssf {

std::size_t LifeTable::index_of(int age) const {
  if (age < start_age_ || age > open_age()) {
    throw InputError("age " + std::to_string(age) + " outside table range [" +
                     std::to_string(start_age_) + ", " +
                     std::to_string(open_age()) + "]");
  }
  return static_cast<std::size_t>(age - start_age_);
}

double LifeTable::person_years_above(int age) const {
  return ex_at(age) * lx_at(age);
}

double LifeTable::survival_prob(int age) const {
  std::size_t i = index_of(age);
  if (age == open_age()) {
    throw InputError("survival probability is undefined at the open age");
  }
  return lx_[i + 1] / lx_[i];
}

double LifeTable::death_prob(int age) const {
  return 1.0 - survival_prob(age);
}

double LifeTable::avg_years_in_interval(int age) const {
  std::size_t i = index_of(age);
  if (age == open_age()) return ex_[i];
  return 0.5;  // UDD
}

LifeTable rebuild_from_lx(std::vector<double> lx, int open_age,
                          double terminal_m, std::string label) {
  if (lx.empty()) throw InputError("empty lx vector");
  const int start_age = open_age - static_cast<int>(lx.size()) + 1;
  if (start_age < 0) {
    throw InputError("lx vector longer than open_age allows (start age " +
                     std::to_string(start_age) + " < 0)");
  }
  if (!(lx.front() > 0.0)) {
    throw InputError("lx must be strictly positive at the start age " +
                     std::to_string(start_age));
  }
  for (std::size_t i = 0; i + 1 < lx.size(); ++i) {
    if (lx[i + 1] > lx[i]) {
      throw InputError("lx increases at age " +
                       std::to_string(start_age + static_cast<int>(i) + 1) +
                       " (non-monotone survivor column)");
    }
  }
  if (!(lx.back() > 0.0)) {
    throw InputError("lx at the open age " + std::to_string(open_age) +
                     " is zero; the open interval cannot be closed");
  }
  if (!(terminal_m > 0.0) || !std::isfinite(terminal_m)) {
    throw InputError("terminal m must be a positive finite rate");
  }

  const std::size_t n = lx.size();
  LifeTable t;
  t.start_age_ = start_age;
  t.label_ = std::move(label);
  t.lx_ = std::move(lx);
  t.dx_.resize(n);
  t.Lx_.resize(n);
  t.mx_.resize(n);
  t.ex_.resize(n);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    t.dx_[i] = t.lx_[i] - t.lx_[i + 1];
    t.Lx_[i] = t.lx_[i + 1] + 0.5 * t.dx_[i];
    t.mx_[i] = t.dx_[i] / t.Lx_[i];
  }
  const OpenInterval open = close_open_interval(t.lx_[n - 1], terminal_m);
  t.dx_[n - 1] = t.lx_[n - 1];
  t.Lx_[n - 1] = open.L;
  t.mx_[n - 1] = terminal_m;

  double tail = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    tail += t.Lx_[i];
    t.ex_[i] = tail / t.lx_[i];
  }
  return t;
}

OpenInterval close_open_interval(double l_open, double m_inf) {
  if (!(l_open > 0.0)) {
    throw InputError("survivors at the open age must be positive");
  }
  if (!(m_inf > 0.0) || !std::isfinite(m_inf)) {
    throw InputError("terminal m must be a positive finite rate");
  }
  OpenInterval o;
  o.e = 1.0 / m_inf;
  o.L = o.e * l_open;
  return o;
}

double life_expectancy(const LifeTable& table, int age) {
  return table.ex_at(age);
}

}  // namespace ssf
