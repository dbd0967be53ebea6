// Certified zero counting for periodic functions on T^1 and T^2.
//
// In 1D the circle is cut into grid intervals; each interval is either
// certified (exactly one transverse root, or none) from Lipschitz bounds on g
// and g', or bisected until it is. Intervals that cannot be certified down to
// `min_width` mark the count as tangent.
#pragma once

#include <vector>

#include "lagtomo/torus.hpp"

namespace lagtomo {

struct RootScanOptions {
  double jacobian_tol = 1e-8;
  double min_width = 1e-13;
};

struct RootCount {
  long count = 0;
  bool tangent = false;
};

/// Zeros of a 1D field on [0, 2pi). `grid` = 0 picks a resolution from the frequencies.
RootCount count_zeros_1d(const PeriodicScalarField& g, int grid = 0,
                         const RootScanOptions& opts = {});

/// Zeros of rho sin(k x + phi) - b(x) for many (rho, phi) against a fixed b.
class SineFactorCounter {
public:
  SineFactorCounter(const PeriodicScalarField& b, int k, int grid = 0);

  RootCount count(double rho, double phi, const RootScanOptions& opts = {}) const;

  int frequency() const { return k_; }
  int grid() const { return grid_; }

private:
  PeriodicScalarField b_;
  PeriodicScalarField db_;
  int k_;
  double sin_coef_ = 0.0;  // frequency-k part of b: sin_coef sin(kx) + cos_coef cos(kx)
  double cos_coef_ = 0.0;
  int grid_;
  double h_;
  double b1_;  // sup |b'|
  double b2_;  // sup |b''|
  // Length grid + 1; the last entry repeats the first.
  std::vector<double> sin_kx_, cos_kx_, b_grid_, db_grid_;
};

/// Common zeros of (g1, g2) on T^2. Candidate cells are found from corner signs
/// and gradient bounds, seeded from the bilinear interpolant and polished by
/// Newton's method on the exact fields. Roots with |det J| below the tolerance
/// mark the result tangent.
RootCount count_zeros_2d(const PeriodicScalarField& g1, const PeriodicScalarField& g2,
                         int grid = 512, const RootScanOptions& opts = {},
                         std::vector<Coords>* roots = nullptr);

/// Critical points of f: zeros of f' (n = 1) or of grad f (n = 2).
RootCount count_critical_points(const PeriodicScalarField& f, int grid = 0,
                                const RootScanOptions& opts = {});

/// Default 1D scan resolution for a field with the given top frequency.
int default_scan_grid(int max_frequency);

}  // namespace lagtomo
