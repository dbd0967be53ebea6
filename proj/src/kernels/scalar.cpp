#include <cmath>

#include "lagtomo/kernels.hpp"

namespace lagtomo::kernels {
namespace {

void combine_scalar(double a, const double* x, double b, const double* y, const double* z,
                    double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a * x[i] + b * y[i] - z[i];
  }
}

long classify_scalar(const double* g, const double* dg, std::size_t n, ScanBounds bounds,
                     int* flagged, std::size_t* n_flagged) {
  long roots = 0;
  std::size_t nf = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ga = g[i];
    const double gb = g[i + 1];
    const double da = dg[i];
    const double db = dg[i + 1];
    const bool sign_change = (ga >= 0.0) != (gb >= 0.0);
    const double vsum = std::fabs(ga) + std::fabs(gb);
    const double dsum = std::fabs(da) + std::fabs(db);
    const bool same_slope = (da > 0.0 && db > 0.0) || (da < 0.0 && db < 0.0);
    const bool monotone = same_slope && dsum > bounds.slope_slack;
    const bool no_root = vsum > bounds.value_slack;
    const bool transverse = (dsum - bounds.slope_slack) * 0.5 >= bounds.jacobian_tol;
    const bool one = monotone && sign_change && transverse;
    const bool zero = !sign_change && (no_root || monotone);
    if (one) {
      ++roots;
    } else if (!zero) {
      flagged[nf++] = static_cast<int>(i);
    }
  }
  *n_flagged = nf;
  return roots;
}

double weighted_sum_scalar(const double* v, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += v[i] * w[i];
  }
  return s;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{Backend::Scalar, &combine_scalar, &classify_scalar,
                             &weighted_sum_scalar};
  return t;
}

}  // namespace lagtomo::kernels
