#pragma once

#include <span>
#include <string_view>

// Data-parallel inner loops of the kernel quadratures and matrix assembly.
// Every routine has a scalar reference and an AVX2 variant; the active one is
// picked at startup from the CPU features and can be overridden with
// BLAB_ISA=scalar|avx2 or set_active().
namespace blab::simd {

enum class Isa { scalar, avx2 };

std::string_view name(Isa isa);
bool available(Isa isa);
Isa best_available();
Isa active();
void set_active(Isa isa);

class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) : saved_(active()) { set_active(isa); }
  ~ScopedIsa() { set_active(saved_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa saved_;
};

struct Moments {
  double m[4] = {0.0, 0.0, 0.0, 0.0};
  double operator[](int k) const { return m[k]; }
};

using Span = std::span<const double>;

// sum_i w_i v_i^k (a + b v_i)^(-e), k = 0..kmax (kmax <= 3). Requires a + b v_i > 0.
Moments pow_moments(Span v, Span w, double a, double b, double e, int kmax);

// sum_i w_i v_i^k exp(-beta v_i), k = 0..kmax.
Moments exp_moments(Span v, Span w, double beta, int kmax);

// out_j = si * s_j * (bi - b_j) * k_j
void commutator_row(double bi, double si, Span b, Span s, Span k, std::span<double> out);

// sum_j g_j |bi - b_j|^p
double abs_pow_sum(double bi, Span b, Span g, double p);

// Elementwise exp/log with the active ISA; exposed for accuracy tests.
void exp_array(Span x, std::span<double> out);
void log_array(Span x, std::span<double> out);

}  // namespace blab::simd
