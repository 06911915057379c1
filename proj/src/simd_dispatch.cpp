#include <atomic>
#include <cstdlib>
#include <string_view>

#include "blab/error.hpp"
#include "simd_impl.hpp"

namespace blab::simd {

namespace {

Isa initial_isa() {
  Isa isa = best_available();
  if (const char* env = std::getenv("BLAB_ISA")) {
    const std::string_view v(env);
    if (v == "scalar") isa = Isa::scalar;
    else if (v == "avx2" && available(Isa::avx2)) isa = Isa::avx2;
  }
  return isa;
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

const Table& table() {
#if defined(BLAB_HAVE_AVX2)
  if (active_slot().load(std::memory_order_relaxed) == Isa::avx2) return avx2_table();
#endif
  return scalar_table();
}

}  // namespace

std::string_view name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool available(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(BLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa best_available() { return available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active() { return active_slot().load(std::memory_order_relaxed); }

void set_active(Isa isa) {
  require(available(isa), ErrorKind::invalid_input, "requested instruction set is not available on this CPU");
  active_slot().store(isa, std::memory_order_relaxed);
}

Moments pow_moments(Span v, Span w, double a, double b, double e, int kmax) {
  return table().pow_moments(v, w, a, b, e, kmax);
}

Moments exp_moments(Span v, Span w, double beta, int kmax) { return table().exp_moments(v, w, beta, kmax); }

void commutator_row(double bi, double si, Span b, Span s, Span k, std::span<double> out) {
  table().commutator_row(bi, si, b, s, k, out);
}

double abs_pow_sum(double bi, Span b, Span g, double p) { return table().abs_pow_sum(bi, b, g, p); }

void exp_array(Span x, std::span<double> out) { table().exp_array(x, out); }
void log_array(Span x, std::span<double> out) { table().log_array(x, out); }

}  // namespace blab::simd
