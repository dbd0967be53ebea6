#include "doctest.h"
#include "lagtomo/quadrature.hpp"

using namespace lagtomo;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n - 1 exactly") {
  const auto q = gauss_legendre(5, -1.0, 2.0);
  double s = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    const double x = q.nodes[static_cast<std::size_t>(i)];
    s += q.weights[static_cast<std::size_t>(i)] * std::pow(x, 9);
  }
  CHECK(s == doctest::Approx((std::pow(2.0, 10) - 1.0) / 10.0).epsilon(1e-13));
  CHECK(q.weight_sum() == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("composite Gauss-Legendre respects the breaks") {
  const auto q = composite_gauss_legendre({0.0, 0.5, 2.0}, 4);
  CHECK(q.size() == 8);
  CHECK(q.weight_sum() == doctest::Approx(2.0).epsilon(1e-15));
  // piecewise linear with a kink at 0.5: exact
  double s = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    const double x = q.nodes[static_cast<std::size_t>(i)];
    s += q.weights[static_cast<std::size_t>(i)] * std::fabs(x - 0.5);
  }
  CHECK(s == doctest::Approx(0.125 + 1.125).epsilon(1e-14));
}

TEST_CASE("periodic trapezoid is exact on trigonometric polynomials") {
  const auto q = periodic_trapezoid(16, 0.3);
  double s = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    const double x = q.nodes[static_cast<std::size_t>(i)];
    s += q.weights[static_cast<std::size_t>(i)] * (std::cos(3 * x) * std::cos(3 * x) + std::sin(5 * x));
  }
  CHECK(s == doctest::Approx(std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("tensor rule integrates products") {
  const QuadratureRule q({gauss_legendre(6, 0.0, 1.0), periodic_trapezoid(32)});
  CHECK(q.size() == 6 * 32);
  const double v = q.integrate([](const Coords& x) { return x[0] * x[0] * (1.0 + std::cos(x[1])); });
  CHECK(v == doctest::Approx(kTwoPi / 3.0).epsilon(1e-14));
  double w = 0.0;
  q.for_each([&](const Coords&, double wt) { w += wt; });
  CHECK(w == doctest::Approx(kTwoPi).epsilon(1e-14));
}
