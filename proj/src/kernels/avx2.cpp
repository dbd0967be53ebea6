// Compiled with -mavx2; only entered after a runtime CPU check.
#include <immintrin.h>

#include <bit>
#include <cmath>

#include "lagtomo/kernels.hpp"

namespace lagtomo::kernels {
namespace {

void combine_avx2(double a, const double* x, double b, const double* y, const double* z,
                  double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ax = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    const __m256d by = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_add_pd(ax, by), _mm256_loadu_pd(z + i)));
  }
  for (; i < n; ++i) {
    out[i] = a * x[i] + b * y[i] - z[i];
  }
}

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

long classify_avx2(const double* g, const double* dg, std::size_t n, ScanBounds bounds,
                   int* flagged, std::size_t* n_flagged) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d value_slack = _mm256_set1_pd(bounds.value_slack);
  const __m256d slope_slack = _mm256_set1_pd(bounds.slope_slack);
  const __m256d jac_tol = _mm256_set1_pd(bounds.jacobian_tol);
  long roots = 0;
  std::size_t nf = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ga = _mm256_loadu_pd(g + i);
    const __m256d gb = _mm256_loadu_pd(g + i + 1);
    const __m256d da = _mm256_loadu_pd(dg + i);
    const __m256d db = _mm256_loadu_pd(dg + i + 1);
    const __m256d sign_change =
        _mm256_xor_pd(_mm256_cmp_pd(ga, zero, _CMP_GE_OQ), _mm256_cmp_pd(gb, zero, _CMP_GE_OQ));
    const __m256d vsum = _mm256_add_pd(abs_pd(ga), abs_pd(gb));
    const __m256d dsum = _mm256_add_pd(abs_pd(da), abs_pd(db));
    const __m256d both_pos =
        _mm256_and_pd(_mm256_cmp_pd(da, zero, _CMP_GT_OQ), _mm256_cmp_pd(db, zero, _CMP_GT_OQ));
    const __m256d both_neg =
        _mm256_and_pd(_mm256_cmp_pd(da, zero, _CMP_LT_OQ), _mm256_cmp_pd(db, zero, _CMP_LT_OQ));
    const __m256d monotone = _mm256_and_pd(_mm256_or_pd(both_pos, both_neg),
                                           _mm256_cmp_pd(dsum, slope_slack, _CMP_GT_OQ));
    const __m256d no_root = _mm256_cmp_pd(vsum, value_slack, _CMP_GT_OQ);
    const __m256d transverse =
        _mm256_cmp_pd(_mm256_mul_pd(_mm256_sub_pd(dsum, slope_slack), half), jac_tol, _CMP_GE_OQ);
    const __m256d one = _mm256_and_pd(_mm256_and_pd(monotone, sign_change), transverse);
    const __m256d none = _mm256_andnot_pd(sign_change, _mm256_or_pd(no_root, monotone));
    const int one_bits = _mm256_movemask_pd(one);
    const int flag_bits = ~(one_bits | _mm256_movemask_pd(none)) & 0xF;
    roots += std::popcount(static_cast<unsigned>(one_bits));
    for (unsigned bits = static_cast<unsigned>(flag_bits); bits != 0; bits &= bits - 1) {
      flagged[nf++] = static_cast<int>(i) + std::countr_zero(bits);
    }
  }
  if (i < n) {
    std::size_t tail_flagged = 0;
    roots += scalar_table().classify(g + i, dg + i, n - i, bounds, flagged + nf, &tail_flagged);
    for (std::size_t t = 0; t < tail_flagged; ++t) {
      flagged[nf + t] += static_cast<int>(i);
    }
    nf += tail_flagged;
  }
  *n_flagged = nf;
  return roots;
}

double weighted_sum_avx2(const double* v, const double* w, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(v + i), _mm256_loadu_pd(w + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(v + i + 4), _mm256_loadu_pd(w + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(v + i), _mm256_loadu_pd(w + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    s += v[i] * w[i];
  }
  return s;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{Backend::Avx2, &combine_avx2, &classify_avx2, &weighted_sum_avx2};
  return t;
}

}  // namespace lagtomo::kernels
