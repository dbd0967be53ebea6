#include <random>

#include "doctest.h"
#include "lagtomo/experiments.hpp"
#include "lagtomo/quadrature.hpp"
#include "oracles.hpp"

using namespace lagtomo;

namespace {

PeriodicScalarField cos1(double a = 1.0, int m = 1) { return PeriodicScalarField(1, {TrigTerm{a, {m, 0}, 0.0}}); }

}  // namespace

TEST_CASE("one-form evaluation on simple forms") {
  CHECK(eval_one_form(OneForm::zero(1), TorusPoint(1.3))(0) == 0.0);
  CHECK(OneForm::zero(2).eval(TorusPoint(0.1, 2.0)).norm() == 0.0);

  // sin x = cos(x - pi/2)
  const OneForm s{std::vector<PeriodicScalarField>{PeriodicScalarField(1, {TrigTerm{1.0, {1, 0}, -std::numbers::pi / 2}})}};
  CHECK(eval_one_form(s, TorusPoint(std::numbers::pi / 2))(0) == doctest::Approx(1.0).epsilon(1e-15));

  const OneForm dcos = OneForm::exact(cos1());
  CHECK(eval_one_form(dcos, TorusPoint(std::numbers::pi / 2))(0) == doctest::Approx(-1.0).epsilon(1e-15));

  CHECK_THROWS_AS(eval_one_form(dcos, TorusPoint(0.1, 0.2)), std::invalid_argument);
}

TEST_CASE("torus points wrap into [0, 2pi)") {
  const TorusPoint p(-0.5, 7.0);
  CHECK(p[0] == doctest::Approx(kTwoPi - 0.5));
  CHECK(p[1] == doctest::Approx(7.0 - kTwoPi));
  CHECK(wrap_angle(kTwoPi) == 0.0);
}

TEST_CASE("exact forms match the derivatives of their potential") {
  std::mt19937_64 rng(11);
  for (int dim : {1, 2}) {
    for (int i = 0; i < 10; ++i) {
      const auto f = random_trig_field(dim, rng, 5, 4);
      const OneForm beta = OneForm::exact(f);
      CHECK(beta.potential_discrepancy(256) <= 1e-12);
      // independent finite-difference check of one component
      const Coords x{0.7, 1.9};
      const double h = 1e-6;
      Coords xp = x, xm = x;
      xp[0] += h;
      xm[0] -= h;
      CHECK(beta.eval(x)(0) == doctest::Approx((f.value(xp) - f.value(xm)) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("separability follows the wave vectors") {
  const PeriodicScalarField f(2, {TrigTerm{1.0, {2, 0}, 0.3}, TrigTerm{0.5, {0, 3}, 0.1}});
  CHECK(OneForm::exact(f).is_separable());
  const PeriodicScalarField g(2, {TrigTerm{1.0, {1, 1}, 0.0}});
  CHECK_FALSE(OneForm::exact(g).is_separable());
}

TEST_CASE("oscillation of simple fields") {
  CHECK(oscillation(PeriodicScalarField::zero(1), 64) == 0.0);
  CHECK(oscillation(cos1(), 64) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("oscillation against a dense brute-force scan") {
  const PeriodicScalarField f(1, {TrigTerm{1.0, {1, 0}, 0.0}, TrigTerm{0.5, {2, 0}, 0.0}});
  double lo = 1e300, hi = -1e300;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double v = f.value(Coords{kTwoPi * i / n, 0.0});
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(oscillation(f, 256) == doctest::Approx(hi - lo).epsilon(1e-9));

  std::mt19937_64 rng(5);
  for (int i = 0; i < 5; ++i) {
    const auto g = random_trig_field(1, rng, 4, 6);
    double glo = 1e300, ghi = -1e300;
    for (int j = 0; j < 200000; ++j) {
      const double v = g.value(Coords{kTwoPi * j / 200000, 0.0});
      glo = std::min(glo, v);
      ghi = std::max(ghi, v);
    }
    // the refined value can only exceed a sampled lower bound, and not by much
    CHECK(oscillation(g, 512) >= ghi - glo - 1e-12);
    CHECK(oscillation(g, 512) <= ghi - glo + 1e-6);
  }
}

TEST_CASE("graph volume of simple forms") {
  const QuadratureRule q1 = QuadratureRule::torus(1, 4096);
  CHECK(graph_volume(OneForm::zero(1), q1) == doctest::Approx(kTwoPi).epsilon(1e-14));
  Vector y(1);
  y(0) = 0.7;
  CHECK(graph_volume(OneForm::constant(y), q1) == doctest::Approx(kTwoPi).epsilon(1e-14));
  CHECK(graph_volume(OneForm::zero(2), QuadratureRule::torus(2, 64)) ==
        doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-14));
}

TEST_CASE("graph volume of d(cos x) against adaptive quadrature") {
  const double ref = oracle::simpson_pieces([](double x) { return std::sqrt(1.0 + std::cos(x) * std::cos(x)); },
                                            0.0, kTwoPi, 64, 1e-13);
  CHECK(ref == doctest::Approx(7.640395578).epsilon(1e-9));
  const double v = graph_volume(OneForm::exact(cos1()), QuadratureRule::torus(1, 4096));
  CHECK(v == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("graph volume is minimal on the zero section and shift invariant") {
  std::mt19937_64 rng(3);
  for (int dim : {1, 2}) {
    const QuadratureRule q = QuadratureRule::torus(dim, dim == 1 ? 2048 : 128);
    const double flat = std::pow(kTwoPi, dim);
    for (int i = 0; i < 20; ++i) {
      const auto f = random_trig_field(dim, rng, 3, 3).scaled(0.3);
      const OneForm beta = OneForm::exact(f);
      const double v = graph_volume(beta, q);
      CHECK(v >= flat);
      const double s = graph_volume(beta.shifted(Coords{0.37, 1.21}), q);
      CHECK(std::fabs(s - v) <= 1e-9 * v);
    }
  }
}

TEST_CASE("tube restriction measures only the part inside the tube") {
  const QuadratureRule q = QuadratureRule::torus(1, 1 << 16);
  const OneForm beta = OneForm::exact(cos1());  // beta = -sin x
  CHECK(graph_volume(beta, q, 2.0) == doctest::Approx(graph_volume(beta, q)));
  // |sin x| < 0.5 on a third of the circle; arc length there by quadrature
  const double ref = 2.0 * oracle::simpson([](double x) { return std::sqrt(1.0 + std::cos(x) * std::cos(x)); },
                                           -std::numbers::pi / 6, std::numbers::pi / 6, 1e-12);
  CHECK(graph_volume(beta, q, 0.5) == doctest::Approx(ref).epsilon(1e-4));
}

TEST_CASE("field algebra and bounds") {
  const auto f = cos1(2.0, 3);
  CHECK(f.max_frequency() == 3);
  CHECK(f.amplitude_bound() == 2.0);
  CHECK(f.first_derivative_bound() == 6.0);
  CHECK(f.second_derivative_bound() == 18.0);
  const auto g = f - f;
  CHECK(g.value(Coords{0.4, 0.0}) == 0.0);
  const auto d = f.derivative(0);
  CHECK(d.value(Coords{0.2, 0.0}) == doctest::Approx(-6.0 * std::sin(0.6)));
  CHECK_THROWS(PeriodicScalarField(3, {}));
}
