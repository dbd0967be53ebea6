#include <random>

#include "doctest.h"
#include "lagtomo/experiments.hpp"
#include "lagtomo/roots.hpp"

using namespace lagtomo;

namespace {

// Sign changes on a uniform grid; exact when roots are simple and further apart
// than the spacing.
long sign_changes(const PeriodicScalarField& g, int n) {
  long c = 0;
  double prev = g.value(Coords{0.0, 0.0});
  const double first = prev;
  for (int i = 1; i <= n; ++i) {
    const double v = i == n ? first : g.value(Coords{kTwoPi * i / n, 0.0});
    if ((v >= 0.0) != (prev >= 0.0)) ++c;
    prev = v;
  }
  return c;
}

}  // namespace

TEST_CASE("1D zero counts on simple fields") {
  const PeriodicScalarField s3(1, {TrigTerm{1.0, {3, 0}, 0.3}});
  const RootCount rc = count_zeros_1d(s3);
  CHECK(rc.count == 6);
  CHECK_FALSE(rc.tangent);
  CHECK(count_zeros_1d(PeriodicScalarField::constant(1, 0.5)).count == 0);
}

TEST_CASE("1D zero counts match a dense sign-change scan") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 30; ++i) {
    const auto g = random_trig_field(1, rng, 5, 6) + PeriodicScalarField::constant(1, 0.1);
    const RootCount rc = count_zeros_1d(g);
    if (rc.tangent) continue;
    CHECK(rc.count == sign_changes(g, 1000000));
  }
}

TEST_CASE("double roots and vanishing fields are flagged tangent") {
  // 1 - cos x touches zero at x = 0
  const PeriodicScalarField g(1, {TrigTerm{1.0, {0, 0}, 0.0}, TrigTerm{-1.0, {1, 0}, 0.0}});
  CHECK(count_zeros_1d(g).tangent);
  CHECK(count_zeros_1d(PeriodicScalarField::zero(1)).tangent);
}

TEST_CASE("sine-factor counter agrees with direct counting") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> rho(0.0, 2.0), phi(0.0, kTwoPi);
  for (int i = 0; i < 10; ++i) {
    const auto b = random_trig_field(1, rng, 3, 4).scaled(0.5);
    for (int k : {1, 2, 5}) {
      const SineFactorCounter counter(b, k);
      for (int j = 0; j < 20; ++j) {
        const double r = rho(rng);
        const double p = phi(rng);
        const PeriodicScalarField g =
            PeriodicScalarField(1, {TrigTerm{r, {k, 0}, p - std::numbers::pi / 2}}) - b;
        const RootCount direct = count_zeros_1d(g);
        const RootCount fast = counter.count(r, p);
        if (direct.tangent || fast.tangent) continue;
        CHECK(fast.count == direct.count);
      }
    }
  }
}

TEST_CASE("sine-factor counter resolves near-cancellation with b") {
  // b = -0.6 sin x against rho sin(x + pi): the difference is (0.6 - rho) sin x.
  const PeriodicScalarField b(1, {TrigTerm{0.6, {1, 0}, std::numbers::pi / 2}});
  const SineFactorCounter counter(b, 1);
  const RootCount near = counter.count(0.6 + 1e-7, std::numbers::pi);
  CHECK_FALSE(near.tangent);
  CHECK(near.count == 2);
  CHECK(counter.count(0.6, std::numbers::pi).tangent);
}

TEST_CASE("2D zero counts") {
  const PeriodicScalarField sx(2, {TrigTerm{1.0, {1, 0}, -std::numbers::pi / 2}});
  const PeriodicScalarField sy(2, {TrigTerm{1.0, {0, 1}, -std::numbers::pi / 2}});
  std::vector<Coords> roots;
  const RootCount rc = count_zeros_2d(sx, sy, 64, {}, &roots);
  CHECK(rc.count == 4);
  CHECK(roots.size() == 4);

  // cos x cos y has 8 critical points: 4 extrema and 4 saddles
  const PeriodicScalarField f(2, {TrigTerm{0.5, {1, 1}, 0.0}, TrigTerm{0.5, {1, -1}, 0.0}});
  const RootCount crit = count_critical_points(f, 128);
  CHECK(crit.count == 8);
  CHECK_FALSE(crit.tangent);
}

TEST_CASE("critical points of cos(mx) in 1D") {
  for (int m = 1; m <= 6; ++m) {
    CHECK(count_critical_points(PeriodicScalarField(1, {TrigTerm{1.0, {m, 0}, 0.2}})).count == 2 * m);
  }
}
