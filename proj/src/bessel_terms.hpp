#pragma once

#include <array>
#include <vector>

#include "blab/space.hpp"

// Derivatives of D(v) = |x - y|^2 + 2 x_{n+1} y_{n+1} v with respect to the
// 2(n+1) variables z = (x, y). Each derivative is linear in v.
namespace blab::detail {

using Poly = std::array<double, 4>;  // coefficients of 1, v, v^2, v^3

inline Poly lin(double p, double q) { return {p, q, 0.0, 0.0}; }

inline Poly mul(const Poly& a, const Poly& b) {
  Poly c{0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; i + j < 4; ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline Poly add(const Poly& a, const Poly& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }

inline Poly scale(const Poly& a, double s) { return {a[0] * s, a[1] * s, a[2] * s, a[3] * s}; }

// Index i in [0, 2d): i < d is x_i, otherwise y_{i-d}.
inline Poly d_first(int i, int d, Coords x, Coords y) {
  const bool is_x = i < d;
  const int j = is_x ? i : i - d;
  const double diff = x[j] - y[j];
  if (j < d - 1) return lin(is_x ? 2.0 * diff : -2.0 * diff, 0.0);
  return is_x ? lin(2.0 * diff, 2.0 * y[d - 1]) : lin(-2.0 * diff, 2.0 * x[d - 1]);
}

inline Poly d_second(int i, int k, int d) {
  const bool xi = i < d, xk = k < d;
  const int ji = xi ? i : i - d;
  const int jk = xk ? k : k - d;
  if (ji != jk) return lin(0.0, 0.0);
  if (ji < d - 1) return lin(xi == xk ? 2.0 : -2.0, 0.0);
  return xi == xk ? lin(2.0, 0.0) : lin(-2.0, 2.0);
}

inline double integrate(const Poly& c, const double* moments) {
  return c[0] * moments[0] + c[1] * moments[1] + c[2] * moments[2] + c[3] * moments[3];
}

// Expands a multi-index over z into a list of variable indices with repetition.
inline std::vector<int> expand(const std::vector<int>& alpha) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (int r = 0; r < alpha[i]; ++r) idx.push_back(static_cast<int>(i));
  return idx;
}

}  // namespace blab::detail
