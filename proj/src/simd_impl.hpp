#pragma once

#include <span>

#include "blab/simd.hpp"

namespace blab::simd {

struct Table {
  Moments (*pow_moments)(Span, Span, double, double, double, int);
  Moments (*exp_moments)(Span, Span, double, int);
  void (*commutator_row)(double, double, Span, Span, Span, std::span<double>);
  double (*abs_pow_sum)(double, Span, Span, double);
  void (*exp_array)(Span, std::span<double>);
  void (*log_array)(Span, std::span<double>);
};

const Table& scalar_table();
#if defined(BLAB_HAVE_AVX2)
const Table& avx2_table();
#endif

}  // namespace blab::simd
