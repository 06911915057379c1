#include <cmath>

#include "simd_impl.hpp"

namespace blab::simd {

namespace {

Moments pow_moments_scalar(Span v, Span w, double a, double b, double e, int kmax) {
  Moments out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double t = w[i] * std::pow(a + b * v[i], -e);
    out.m[0] += t;
    for (int k = 1; k <= kmax; ++k) {
      t *= v[i];
      out.m[k] += t;
    }
  }
  return out;
}

Moments exp_moments_scalar(Span v, Span w, double beta, int kmax) {
  Moments out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double t = w[i] * std::exp(-beta * v[i]);
    out.m[0] += t;
    for (int k = 1; k <= kmax; ++k) {
      t *= v[i];
      out.m[k] += t;
    }
  }
  return out;
}

void commutator_row_scalar(double bi, double si, Span b, Span s, Span k, std::span<double> out) {
  for (std::size_t j = 0; j < b.size(); ++j) out[j] = si * s[j] * (bi - b[j]) * k[j];
}

double abs_pow_sum_scalar(double bi, Span b, Span g, double p) {
  double acc = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double d = std::abs(bi - b[j]);
    if (d > 0.0) acc += g[j] * std::pow(d, p);
  }
  return acc;
}

void exp_array_scalar(Span x, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::exp(x[i]);
}

void log_array_scalar(Span x, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::log(x[i]);
}

}  // namespace

const Table& scalar_table() {
  static const Table t{pow_moments_scalar, exp_moments_scalar, commutator_row_scalar,
                       abs_pow_sum_scalar, exp_array_scalar,   log_array_scalar};
  return t;
}

}  // namespace blab::simd
