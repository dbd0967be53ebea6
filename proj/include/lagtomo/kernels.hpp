// Data-parallel inner loops. Every kernel has a scalar reference and, where the
// target supports it, an AVX2 or NEON variant; the variant is picked once at
// startup from the CPU features (override with LAGTOMO_SIMD=scalar|avx2|neon).
//
// The combine and classify kernels are bit-identical across backends. The
// weighted sum is not: SIMD lanes reassociate the reduction.
#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace lagtomo::kernels {

enum class Backend { Scalar, Avx2, Neon };

/// Scaled Lipschitz bounds for an interval scan over a grid with spacing h.
struct ScanBounds {
  double value_slack = 0.0;   // h * sup|g'|
  double slope_slack = 0.0;   // h * sup|g''|
  double jacobian_tol = 0.0;  // roots with |g'| below this are not certified
};

struct KernelTable {
  Backend backend;
  // out[i] = a*x[i] + b*y[i] - z[i]
  void (*combine)(double a, const double* x, double b, const double* y, const double* z,
                  double* out, std::size_t n);
  // Scans intervals [i, i+1] for i < n; g and dg hold n+1 samples. Returns the
  // number of certified simple roots; uncertified interval indices go to flagged.
  long (*classify)(const double* g, const double* dg, std::size_t n, ScanBounds bounds,
                   int* flagged, std::size_t* n_flagged);
  double (*weighted_sum)(const double* v, const double* w, std::size_t n);
};

const KernelTable& scalar_table();
bool backend_available(Backend b);
const KernelTable& table(Backend b);
std::string_view backend_name(Backend b);

Backend active_backend();
/// Process-wide switch, used by the equivalence tests and the CLI.
void set_active_backend(Backend b);

void combine(double a, std::span<const double> x, double b, std::span<const double> y,
             std::span<const double> z, std::span<double> out);
long classify_intervals(std::span<const double> g, std::span<const double> dg, ScanBounds bounds,
                        std::vector<int>& flagged);
double weighted_sum(std::span<const double> v, std::span<const double> w);

}  // namespace lagtomo::kernels
