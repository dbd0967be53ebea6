#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "lagtomo/kernels.hpp"

namespace lagtomo::kernels {

#if defined(LAGTOMO_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(LAGTOMO_HAVE_NEON)
const KernelTable& neon_table();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(LAGTOMO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend detect() {
  if (const char* env = std::getenv("LAGTOMO_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Backend::Scalar;
    if (want == "avx2" && backend_available(Backend::Avx2)) return Backend::Avx2;
    if (want == "neon" && backend_available(Backend::Neon)) return Backend::Neon;
  }
  if (backend_available(Backend::Avx2)) return Backend::Avx2;
  if (backend_available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{&table(detect())};
  return slot;
}

}  // namespace

bool backend_available(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return cpu_has_avx2();
    case Backend::Neon:
#if defined(LAGTOMO_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Backend b) {
  if (!backend_available(b)) {
    throw std::invalid_argument("SIMD backend not available: " + std::string(backend_name(b)));
  }
  switch (b) {
#if defined(LAGTOMO_HAVE_AVX2)
    case Backend::Avx2:
      return avx2_table();
#endif
#if defined(LAGTOMO_HAVE_NEON)
    case Backend::Neon:
      return neon_table();
#endif
    default:
      return scalar_table();
  }
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

Backend active_backend() { return active_slot().load()->backend; }

void set_active_backend(Backend b) { active_slot().store(&table(b)); }

void combine(double a, std::span<const double> x, double b, std::span<const double> y,
             std::span<const double> z, std::span<double> out) {
  if (x.size() != out.size() || y.size() != out.size() || z.size() != out.size()) {
    throw std::invalid_argument("combine: length mismatch");
  }
  active_slot().load()->combine(a, x.data(), b, y.data(), z.data(), out.data(), out.size());
}

long classify_intervals(std::span<const double> g, std::span<const double> dg, ScanBounds bounds,
                        std::vector<int>& flagged) {
  if (g.size() != dg.size() || g.size() < 2) {
    throw std::invalid_argument("classify_intervals: need matching arrays of >= 2 samples");
  }
  const std::size_t n = g.size() - 1;
  flagged.resize(n);
  std::size_t nf = 0;
  const long roots = active_slot().load()->classify(g.data(), dg.data(), n, bounds,
                                                    flagged.data(), &nf);
  flagged.resize(nf);
  return roots;
}

double weighted_sum(std::span<const double> v, std::span<const double> w) {
  if (v.size() != w.size()) {
    throw std::invalid_argument("weighted_sum: length mismatch");
  }
  return active_slot().load()->weighted_sum(v.data(), w.data(), v.size());
}

}  // namespace lagtomo::kernels
