#include <cstring>
#include <random>

#include "doctest.h"
#include "lagtomo/kernels.hpp"
#include "lagtomo/tomograph.hpp"

using namespace lagtomo;
using namespace lagtomo::kernels;

namespace {

std::vector<Backend> available() {
  std::vector<Backend> out;
  for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
    if (backend_available(b)) out.push_back(b);
  }
  return out;
}

struct Restore {
  Backend saved = active_backend();
  ~Restore() { set_active_backend(saved); }
};

}  // namespace

TEST_CASE("scalar backend is always available") {
  CHECK(backend_available(Backend::Scalar));
  CHECK(backend_name(Backend::Scalar) == "scalar");
  CHECK(scalar_table().backend == Backend::Scalar);
}

TEST_CASE("combine is bit-identical across backends") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (std::size_t n : {0UL, 1UL, 3UL, 4UL, 7UL, 64UL, 1001UL}) {
    std::vector<double> x(n), y(n), z(n), ref(n), out(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
      z[i] = u(rng);
    }
    scalar_table().combine(0.7, x.data(), -1.3, y.data(), z.data(), ref.data(), n);
    for (Backend b : available()) {
      table(b).combine(0.7, x.data(), -1.3, y.data(), z.data(), out.data(), n);
      CHECK(std::memcmp(out.data(), ref.data(), n * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("interval classification is identical across backends") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {1UL, 5UL, 8UL, 33UL, 4096UL}) {
    std::vector<double> g(n + 1), dg(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      g[i] = u(rng);
      dg[i] = 4.0 * u(rng);
    }
    const ScanBounds bounds{0.3, 0.5, 1e-8};
    std::vector<int> ref_flag(n), flag(n);
    std::size_t ref_nf = 0, nf = 0;
    const long ref = scalar_table().classify(g.data(), dg.data(), n, bounds, ref_flag.data(), &ref_nf);
    for (Backend b : available()) {
      const long got = table(b).classify(g.data(), dg.data(), n, bounds, flag.data(), &nf);
      CHECK(got == ref);
      REQUIRE(nf == ref_nf);
      CHECK(std::equal(flag.begin(), flag.begin() + static_cast<long>(nf), ref_flag.begin()));
    }
  }
}

TEST_CASE("weighted sums agree across backends to rounding") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(1003), w(1003);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = u(rng);
    w[i] = u(rng);
  }
  const double ref = scalar_table().weighted_sum(v.data(), w.data(), v.size());
  for (Backend b : available()) {
    CHECK(table(b).weighted_sum(v.data(), w.data(), v.size()) == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("Crofton integrals agree across backends") {
  Restore restore;
  const Tomograph t(1, RadialMeasure::uniform(0.5, 1.0, 1.0), 1, 1.0);
  const GraphLagrangian l(OneForm::exact(PeriodicScalarField(1, {TrigTerm{0.6, {2, 0}, 0.4}})));
  CroftonOptions o;
  o.radial = 50;
  o.angular = 32;
  set_active_backend(Backend::Scalar);
  const double ref = crofton_integral(t, l, o).value;
  for (Backend b : available()) {
    set_active_backend(b);
    CHECK(active_backend() == b);
    CHECK(crofton_integral(t, l, o).value == doctest::Approx(ref).epsilon(1e-13));
  }
}
