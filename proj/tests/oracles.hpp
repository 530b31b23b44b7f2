// Independent test-side oracles. These deliberately re-derive results by
// brute force (spreadsheet-style column arithmetic, dense-grid
// integration, bisection) and must stay decoupled from the library code
// paths they check.
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ssf/ggm.hpp"

namespace oracle {

// Plain column-by-column recompute of every life-table quantity from an
// lx vector and a terminal rate.
struct TableColumns {
  std::vector<double> d, L, m, T, e;
};

inline TableColumns lifetable_by_hand(const std::vector<double>& lx,
                                      double terminal_m) {
  const std::size_t n = lx.size();
  TableColumns c;
  c.d.resize(n);
  c.L.resize(n);
  c.m.resize(n);
  c.T.resize(n);
  c.e.resize(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    c.d[i] = lx[i] - lx[i + 1];
    c.L[i] = lx[i + 1] + 0.5 * c.d[i];
    c.m[i] = c.d[i] / c.L[i];
  }
  c.d[n - 1] = lx[n - 1];
  c.e[n - 1] = 1.0 / terminal_m;
  c.L[n - 1] = c.e[n - 1] * lx[n - 1];
  c.m[n - 1] = terminal_m;
  double acc = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    acc += c.L[i];
    c.T[i] = acc;
    c.e[i] = acc / lx[i];
  }
  return c;
}

// Dense-grid trapezoid integration of S(x+t)/S(x) with the same
// truncation convention as the implementation (ratio < 1e-12, cap 150).
inline double life_expectancy_trapezoid(const ssf::GgmParams& p, double x,
                                        double h = 0.01) {
  const double ls0 = ssf::log_survival(p, x);
  double upper = 150.0;
  for (double t = 5.0; t <= 150.0; t += 5.0) {
    if (ssf::log_survival(p, x + t) - ls0 < std::log(1e-12)) {
      upper = t;
      break;
    }
  }
  const auto f = [&](double t) {
    return std::exp(ssf::log_survival(p, x + t) - ls0);
  };
  const long n = std::lround(upper / h);
  double sum = 0.5 * (f(0.0) + f(upper));
  for (long i = 1; i < n; ++i) sum += f(static_cast<double>(i) * h);
  return sum * h;
}

// Bisection of ssf(x, CT, e, A) - 1 over CT in (0, 100].
inline double ct1_bisection(double x, double e, double A, double tol = 1e-12) {
  const auto f = [&](double ct) {
    const double u = ct * A;
    return (u / e) * (1.0 + (x + u) / 100.0) - 1.0;
  };
  double lo = 1e-9, hi = 100.0;
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Appendix-layout fragment: corner header, age columns, CT/ECT rows,
// blank cells allowed.
struct Fragment {
  std::vector<int> ages;
  std::map<int, std::map<int, std::string>> cells;  // row -> age -> "0.476"
};

inline Fragment load_fragment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fragment " + path);
  Fragment f;
  std::string line;
  std::getline(in, line);
  {
    std::istringstream hs(line);
    std::string field;
    std::getline(hs, field, ',');  // corner
    while (std::getline(hs, field, ',')) f.ages.push_back(std::stoi(field));
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream rs(line);
    std::string field;
    std::getline(rs, field, ',');
    const int row = std::stoi(field);
    std::size_t k = 0;
    while (std::getline(rs, field, ',')) {
      if (!field.empty()) f.cells[row][f.ages.at(k)] = field;
      ++k;
    }
    if (f.cells.find(row) == f.cells.end()) f.cells[row] = {};
  }
  return f;
}

inline std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace oracle
