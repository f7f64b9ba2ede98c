#pragma once

// Independent reference formulas shared by the unit tests.

#include <algorithm>
#include <cmath>

namespace oracle {

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// <n|D(a)|l> exp(a^2/2) as an explicit polynomial in a.
inline double c_polynomial(int l, int n, double a) {
  double s = 0.0;
  for (int j = std::max(0, l - n); j <= l; ++j) {
    const double binom = factorial(l) / (factorial(j) * factorial(l - j));
    s += binom * ((j % 2) ? -1.0 : 1.0) * std::pow(a, n - l + 2 * j) * factorial(n) /
         factorial(n - l + j);
  }
  return s / std::sqrt(factorial(l) * factorial(n));
}

inline double F2(double a) { return std::exp(-a * a); }

// P_T by direct summation of F^4 c_ln^2 c_kn^2.
inline double direct_probability(int l, int k, double a, int cut = 60) {
  double s = 0.0;
  for (int n = 0; n < cut; ++n) {
    const double x = c_polynomial(l, n, a) * c_polynomial(k, n, a);
    s += x * x;
  }
  return F2(a) * F2(a) * s;
}

}  // namespace oracle
