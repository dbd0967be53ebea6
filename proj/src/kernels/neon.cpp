// AArch64 variant; NEON is baseline there so no runtime check is needed.
#include <arm_neon.h>

#include <cmath>

#include "lagtomo/kernels.hpp"

namespace lagtomo::kernels {
namespace {

void combine_neon(double a, const double* x, double b, const double* y, const double* z,
                  double* out, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  const float64x2_t vb = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t ax = vmulq_f64(va, vld1q_f64(x + i));
    const float64x2_t by = vmulq_f64(vb, vld1q_f64(y + i));
    vst1q_f64(out + i, vsubq_f64(vaddq_f64(ax, by), vld1q_f64(z + i)));
  }
  for (; i < n; ++i) {
    out[i] = a * x[i] + b * y[i] - z[i];
  }
}

long classify_neon(const double* g, const double* dg, std::size_t n, ScanBounds bounds,
                   int* flagged, std::size_t* n_flagged) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t half = vdupq_n_f64(0.5);
  const float64x2_t value_slack = vdupq_n_f64(bounds.value_slack);
  const float64x2_t slope_slack = vdupq_n_f64(bounds.slope_slack);
  const float64x2_t jac_tol = vdupq_n_f64(bounds.jacobian_tol);
  long roots = 0;
  std::size_t nf = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t ga = vld1q_f64(g + i);
    const float64x2_t gb = vld1q_f64(g + i + 1);
    const float64x2_t da = vld1q_f64(dg + i);
    const float64x2_t db = vld1q_f64(dg + i + 1);
    const uint64x2_t sign_change = veorq_u64(vcgeq_f64(ga, zero), vcgeq_f64(gb, zero));
    const float64x2_t vsum = vaddq_f64(vabsq_f64(ga), vabsq_f64(gb));
    const float64x2_t dsum = vaddq_f64(vabsq_f64(da), vabsq_f64(db));
    const uint64x2_t both_pos = vandq_u64(vcgtq_f64(da, zero), vcgtq_f64(db, zero));
    const uint64x2_t both_neg = vandq_u64(vcltq_f64(da, zero), vcltq_f64(db, zero));
    const uint64x2_t monotone =
        vandq_u64(vorrq_u64(both_pos, both_neg), vcgtq_f64(dsum, slope_slack));
    const uint64x2_t no_root = vcgtq_f64(vsum, value_slack);
    const uint64x2_t transverse =
        vcgeq_f64(vmulq_f64(vsubq_f64(dsum, slope_slack), half), jac_tol);
    const uint64x2_t one = vandq_u64(vandq_u64(monotone, sign_change), transverse);
    const uint64x2_t none = vbicq_u64(vorrq_u64(no_root, monotone), sign_change);
    for (int lane = 0; lane < 2; ++lane) {
      const bool is_one = (lane == 0 ? vgetq_lane_u64(one, 0) : vgetq_lane_u64(one, 1)) != 0;
      const bool is_none = (lane == 0 ? vgetq_lane_u64(none, 0) : vgetq_lane_u64(none, 1)) != 0;
      if (is_one) {
        ++roots;
      } else if (!is_none) {
        flagged[nf++] = static_cast<int>(i) + lane;
      }
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

double weighted_sum_neon(const double* v, const double* w, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(v + i), vld1q_f64(w + i)));
  }
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) {
    s += v[i] * w[i];
  }
  return s;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable t{Backend::Neon, &combine_neon, &classify_neon, &weighted_sum_neon};
  return t;
}

}  // namespace lagtomo::kernels
