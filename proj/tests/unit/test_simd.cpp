#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "blab/simd.hpp"
#include "doctest.h"

using namespace blab;

namespace {

std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// sizes around the vector width and its tail handling
const std::size_t sizes[] = {0, 1, 3, 4, 5, 7, 8, 17, 64, 1001};

}  // namespace

TEST_CASE("dispatch honours the environment override") {
  const char* env = std::getenv("BLAB_ISA");
  if (env && std::string(env) == "scalar") CHECK(simd::active() == simd::Isa::scalar);
  CHECK(simd::available(simd::Isa::scalar));
  CHECK(simd::available(simd::best_available()));
  {
    simd::ScopedIsa s(simd::Isa::scalar);
    CHECK(simd::active() == simd::Isa::scalar);
  }
}

TEST_CASE("scalar reference against plain loops") {
  simd::ScopedIsa s(simd::Isa::scalar);
  std::mt19937_64 rng(1);
  const auto v = uniform(rng, 100, 0.0, 2.0), w = uniform(rng, 100, 0.1, 1.0);
  const auto m = simd::pow_moments(v, w, 0.3, 1.7, 2.5, 3);
  for (int k = 0; k <= 3; ++k) {
    double ref = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) ref += w[i] * std::pow(v[i], k) * std::pow(0.3 + 1.7 * v[i], -2.5);
    CHECK(rel(m[k], ref) <= 1e-13);
  }
  const auto e = simd::exp_moments(v, w, 3.1, 2);
  for (int k = 0; k <= 2; ++k) {
    double ref = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) ref += w[i] * std::pow(v[i], k) * std::exp(-3.1 * v[i]);
    CHECK(rel(e[k], ref) <= 1e-13);
  }
  double ref = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) ref += w[i] * std::pow(std::abs(0.9 - v[i]), 2.7);
  CHECK(rel(simd::abs_pow_sum(0.9, v, w, 2.7), ref) <= 1e-13);
}

TEST_CASE("AVX2 variants agree with the scalar reference") {
  if (!simd::available(simd::Isa::avx2)) {
    MESSAGE("AVX2 not available on this CPU; nothing to compare");
    return;
  }
  std::mt19937_64 rng(7);
  for (std::size_t n : sizes) {
    const auto v = uniform(rng, n, 0.0, 2.0), w = uniform(rng, n, 0.01, 1.0), b = uniform(rng, n, -3.0, 3.0),
               sgn = uniform(rng, n, -1.0, 1.0), k = uniform(rng, n, -5.0, 5.0);
    for (double e : {0.5, 1.0, 2.25, 7.5})
      for (int kmax : {0, 1, 3}) {
        simd::Moments a, c;
        {
          simd::ScopedIsa s(simd::Isa::scalar);
          a = simd::pow_moments(v, w, 0.05, 1.3, e, kmax);
        }
        {
          simd::ScopedIsa s(simd::Isa::avx2);
          c = simd::pow_moments(v, w, 0.05, 1.3, e, kmax);
        }
        for (int j = 0; j <= kmax; ++j) CHECK(rel(c[j], a[j]) <= 1e-12);
      }
    for (double beta : {0.0, 0.7, 40.0}) {
      simd::Moments a, c;
      {
        simd::ScopedIsa s(simd::Isa::scalar);
        a = simd::exp_moments(v, w, beta, 3);
      }
      {
        simd::ScopedIsa s(simd::Isa::avx2);
        c = simd::exp_moments(v, w, beta, 3);
      }
      for (int j = 0; j <= 3; ++j) CHECK(std::abs(c[j] - a[j]) <= 1e-12 * std::max(1e-300, std::abs(a[j])) + 1e-300);
    }
    std::vector<double> r1(n), r2(n);
    {
      simd::ScopedIsa s(simd::Isa::scalar);
      simd::commutator_row(0.4, -1.0, b, sgn, k, r1);
    }
    {
      simd::ScopedIsa s(simd::Isa::avx2);
      simd::commutator_row(0.4, -1.0, b, sgn, k, r2);
    }
    // a product of three factors: no rounding differences are allowed beyond the fused form
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(r1[i] - r2[i]) <= 1e-15 * std::abs(r1[i]) + 1e-300);
    for (double p : {1.0, 2.0, 2.5, 4.0}) {
      double a, c;
      {
        simd::ScopedIsa s(simd::Isa::scalar);
        a = simd::abs_pow_sum(0.1, b, w, p);
      }
      {
        simd::ScopedIsa s(simd::Isa::avx2);
        c = simd::abs_pow_sum(0.1, b, w, p);
      }
      CHECK(std::abs(c - a) <= 1e-12 * std::abs(a));
    }
  }
}

TEST_CASE("vector exp and log accuracy") {
  std::mt19937_64 rng(3);
  const auto x = uniform(rng, 4001, -700.0, 700.0);
  const auto y = uniform(rng, 4001, 1e-300, 1e300);
  auto z = uniform(rng, 4001, -30.0, 0.0);
  for (auto& t : z) t = std::exp(t * std::log(10.0));
  for (simd::Isa isa : {simd::Isa::scalar, simd::Isa::avx2}) {
    if (!simd::available(isa)) continue;
    simd::ScopedIsa s(isa);
    std::vector<double> out(x.size());
    simd::exp_array(x, out);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, rel(out[i], std::exp(x[i])));
    CHECK(worst <= 1e-14);
    const std::vector<double>* inputs[] = {&y, &z};
    for (const auto* in : inputs) {
      simd::log_array(*in, out);
      worst = 0.0;
      for (std::size_t i = 0; i < in->size(); ++i)
        worst = std::max(worst, std::abs(out[i] - std::log((*in)[i])) / std::max(1.0, std::abs(std::log((*in)[i]))));
      CHECK(worst <= 1e-15 * 4);
    }
  }
}
