#include <immintrin.h>

#include <cmath>
#include <limits>

#include "simd_impl.hpp"

namespace blab::simd {

namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kLog2e = 1.44269504088896338700e+00;

inline __m256d exp_pd(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.39);
  const __m256d hi = _mm256_set1_pd(709.7);
  const __m256d under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  const __m256d over = _mm256_cmp_pd(x, hi, _CMP_GT_OQ);
  x = _mm256_max_pd(_mm256_min_pd(x, hi), lo);

  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kLog2e)), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kLn2Hi), x);
  r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kLn2Lo), r);

  // Taylor polynomial through r^13 on |r| <= ln2/2.
  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  // 2^k through the exponent field; k stays within the normal range after clamping.
  const __m128i k32 = _mm256_cvtpd_epi32(k);
  __m256i k64 = _mm256_cvtepi32_epi64(k32);
  k64 = _mm256_slli_epi64(_mm256_add_epi64(k64, _mm256_set1_epi64x(1023)), 52);
  __m256d res = _mm256_mul_pd(p, _mm256_castsi256_pd(k64));

  res = _mm256_andnot_pd(under, res);
  res = _mm256_blendv_pd(res, _mm256_set1_pd(std::numeric_limits<double>::infinity()), over);
  return res;
}

// Natural log for positive normal inputs.
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i exp_bits = _mm256_srli_epi64(bits, 52);
  // Gather the low 32 bits of each lane to convert the exponent to double.
  const __m256i packed = _mm256_permutevar8x32_epi32(exp_bits, _mm256_setr_epi32(0, 2, 4, 6, 0, 2, 4, 6));
  __m256d e = _mm256_sub_pd(_mm256_cvtepi32_pd(_mm256_castsi256_si128(packed)), _mm256_set1_pd(1023.0));

  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d f = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s = _mm256_mul_pd(f, f);
  __m256d p = _mm256_set1_pd(1.0 / 21.0);
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 19.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 17.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 15.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 13.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 11.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 9.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 7.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 5.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 3.0));
  // log m = 2f + 2f s P(s)
  const __m256d two_f = _mm256_add_pd(f, f);
  const __m256d tail = _mm256_mul_pd(_mm256_mul_pd(two_f, s), p);
  __m256d res = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), tail);
  res = _mm256_add_pd(res, two_f);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi), res);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

Moments pow_moments_avx2(Span v, Span w, double a, double b, double e, int kmax) {
  __m256d acc[4] = {_mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd()};
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  const __m256d ne = _mm256_set1_pd(-e);
  const std::size_t n = v.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vv = _mm256_loadu_pd(v.data() + i);
    const __m256d d = _mm256_fmadd_pd(vb, vv, va);
    __m256d t = _mm256_mul_pd(_mm256_loadu_pd(w.data() + i), exp_pd(_mm256_mul_pd(ne, log_pd(d))));
    acc[0] = _mm256_add_pd(acc[0], t);
    for (int k = 1; k <= kmax; ++k) {
      t = _mm256_mul_pd(t, vv);
      acc[k] = _mm256_add_pd(acc[k], t);
    }
  }
  Moments out;
  for (int k = 0; k <= kmax; ++k) out.m[k] = hsum(acc[k]);
  for (; i < n; ++i) {
    double t = w[i] * std::pow(a + b * v[i], -e);
    out.m[0] += t;
    for (int k = 1; k <= kmax; ++k) {
      t *= v[i];
      out.m[k] += t;
    }
  }
  return out;
}

Moments exp_moments_avx2(Span v, Span w, double beta, int kmax) {
  __m256d acc[4] = {_mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd()};
  const __m256d nb = _mm256_set1_pd(-beta);
  const std::size_t n = v.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vv = _mm256_loadu_pd(v.data() + i);
    __m256d t = _mm256_mul_pd(_mm256_loadu_pd(w.data() + i), exp_pd(_mm256_mul_pd(nb, vv)));
    acc[0] = _mm256_add_pd(acc[0], t);
    for (int k = 1; k <= kmax; ++k) {
      t = _mm256_mul_pd(t, vv);
      acc[k] = _mm256_add_pd(acc[k], t);
    }
  }
  Moments out;
  for (int k = 0; k <= kmax; ++k) out.m[k] = hsum(acc[k]);
  for (; i < n; ++i) {
    double t = w[i] * std::exp(-beta * v[i]);
    out.m[0] += t;
    for (int k = 1; k <= kmax; ++k) {
      t *= v[i];
      out.m[k] += t;
    }
  }
  return out;
}

void commutator_row_avx2(double bi, double si, Span b, Span s, Span k, std::span<double> out) {
  const __m256d vbi = _mm256_set1_pd(bi);
  const __m256d vsi = _mm256_set1_pd(si);
  const std::size_t n = b.size();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d diff = _mm256_sub_pd(vbi, _mm256_loadu_pd(b.data() + j));
    const __m256d sc = _mm256_mul_pd(vsi, _mm256_loadu_pd(s.data() + j));
    _mm256_storeu_pd(out.data() + j, _mm256_mul_pd(_mm256_mul_pd(sc, diff), _mm256_loadu_pd(k.data() + j)));
  }
  for (; j < n; ++j) out[j] = si * s[j] * (bi - b[j]) * k[j];
}

double abs_pow_sum_avx2(double bi, Span b, Span g, double p) {
  const __m256d vbi = _mm256_set1_pd(bi);
  const __m256d vp = _mm256_set1_pd(p);
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = zero;
  const std::size_t n = b.size();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d d = _mm256_andnot_pd(sign, _mm256_sub_pd(vbi, _mm256_loadu_pd(b.data() + j)));
    const __m256d nz = _mm256_cmp_pd(d, zero, _CMP_GT_OQ);
    const __m256d safe = _mm256_blendv_pd(_mm256_set1_pd(1.0), d, nz);
    const __m256d pw = _mm256_and_pd(nz, exp_pd(_mm256_mul_pd(vp, log_pd(safe))));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(g.data() + j), pw, acc);
  }
  double total = hsum(acc);
  for (; j < n; ++j) {
    const double d = std::abs(bi - b[j]);
    if (d > 0.0) total += g[j] * std::pow(d, p);
  }
  return total;
}

void exp_array_avx2(Span x, std::span<double> out) {
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) _mm256_storeu_pd(out.data() + i, exp_pd(_mm256_loadu_pd(x.data() + i)));
  for (; i < x.size(); ++i) out[i] = std::exp(x[i]);
}

void log_array_avx2(Span x, std::span<double> out) {
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) _mm256_storeu_pd(out.data() + i, log_pd(_mm256_loadu_pd(x.data() + i)));
  for (; i < x.size(); ++i) out[i] = std::log(x[i]);
}

}  // namespace

const Table& avx2_table() {
  static const Table t{pow_moments_avx2, exp_moments_avx2, commutator_row_avx2,
                       abs_pow_sum_avx2, exp_array_avx2,   log_array_avx2};
  return t;
}

}  // namespace blab::simd
