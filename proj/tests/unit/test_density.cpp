#include <random>

#include "doctest.h"
#include "lagtomo/density.hpp"
#include "lagtomo/io.hpp"
#include "oracles.hpp"

using namespace lagtomo;

namespace {

Frame frame1(double w, double u, double y = 0.0) {
  Vector yy(1);
  yy(0) = y;
  Matrix W(1, 1), U(1, 1);
  W(0, 0) = w;
  U(0, 0) = u;
  return Frame{TorusPoint(0.4), yy, W, U};
}

// sqrt(det Gram) of the tangent vectors (w_i, u_i), written out by hand.
double gram_volume(const Frame& fr) {
  const int n = fr.dim();
  if (n == 1) return std::hypot(fr.w(0, 0), fr.u(0, 0));
  double g[2][2];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      g[i][j] = fr.w(i, 0) * fr.w(j, 0) + fr.w(i, 1) * fr.w(j, 1) + fr.u(i, 0) * fr.u(j, 0) +
                fr.u(i, 1) * fr.u(j, 1);
    }
  }
  return std::sqrt(std::max(0.0, g[0][0] * g[1][1] - g[0][1] * g[1][0]));
}

Matrix random_matrix(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  return a;
}

const Profile kTent = Profile::piecewise_linear({0.0, 1.0}, {1.0, 0.0});

}  // namespace

TEST_CASE("metric density on simple frames") {
  CHECK(metric_density_eval(frame1(1, 0)) == 1.0);
  CHECK(metric_density_eval(frame1(1, 1)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(metric_density_eval(frame1(2, 0)) == 2.0);
}

TEST_CASE("metric density matches the Gram determinant") {
  std::mt19937_64 rng(1);
  for (int n : {1, 2}) {
    for (int i = 0; i < 200; ++i) {
      const Frame fr = random_frame(n, rng);
      CHECK(metric_density_eval(fr) == doctest::Approx(gram_volume(fr)).epsilon(1e-12));
    }
  }
}

TEST_CASE("invariant densities on simple frames") {
  CHECK(invariant_density_eval(Profile::constant(1.0), frame1(1, 0)) == 1.0);
  CHECK(invariant_density_eval(kTent, frame1(0, 1, 0.3)) == 0.0);
  CHECK(invariant_density_eval(kTent, frame1(2, 0.5, 0.25)) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(kTent.factor(3.0) == 0.0);
}

TEST_CASE("vertical pull-back of the metric density") {
  const Density m = Density::metric();
  const Frame fr = frame1(1, 1);
  CHECK(vertical_pullback(m, VerticalScale::finite(2))(fr) == doctest::Approx(std::sqrt(5.0) / 2).epsilon(1e-15));
  CHECK(vertical_pullback(m, VerticalScale::infinity())(fr) == doctest::Approx(1.0).epsilon(1e-15));
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const Frame r = random_frame(2, rng);
    CHECK(vertical_pullback(m, VerticalScale::finite(1))(r) == m(r));
  }
}

TEST_CASE("homogeneity under reparametrization for every density") {
  std::mt19937_64 rng(7);
  for (int n : {1, 2}) {
    const Profile p = n == 1 ? kTent : Profile::piecewise_linear({0.0, 0.5, 1.5}, {2.0, 1.0, 0.0});
    const std::vector<Density> ds{
        Density::metric(),
        Density::invariant(p),
        vertical_pullback(Density::metric(), VerticalScale::finite(3)),
        vertical_pullback(Density::metric(), VerticalScale::infinity()),
        covering_pullback(Density::invariant(p), 2),
        covering_pushforward(Density::invariant(p), 3),
    };
    for (const auto& d : ds) {
      double worst = 0.0;
      for (int i = 0; i < 1000; ++i) {
        const Frame fr = random_frame(n, rng);
        const Matrix a = random_matrix(n, rng);
        worst = std::max(worst, check_homogeneity(d, fr, a) / (1.0 + std::fabs(d(fr)) * std::fabs(a.determinant())));
      }
      CHECK(worst <= 1e-10);
    }
  }
  const Density m = Density::metric();
  const Frame fr = frame1(1, 0);
  CHECK(check_homogeneity(m, fr, Matrix::Identity(1, 1)) == 0.0);
  CHECK(check_homogeneity(m, fr, 2.0 * Matrix::Identity(1, 1)) == 0.0);
}

TEST_CASE("covering identities for invariant profiles") {
  for (int n : {1, 2}) {
    const Profile p = Profile::piecewise_linear({0.0, 0.4, 1.0}, {1.0, 0.7, 0.0});
    for (int k : {1, 2, 3, 5}) {
      const auto r = scaling_lemma_check(p, n, k, 200, 42 + k);
      CHECK(r.worst() <= 1e-10);
      if (k == 1) CHECK(r.worst() == 0.0);
    }
  }
  CHECK(scaling_lemma_check(Profile::constant(1.0), 1, 3, 100, 9).worst() <= 1e-10);
}

TEST_CASE("pushforward requires translation invariance") {
  const Density d = Density::pulled_back([](const Frame& fr) { return fr.x[0] * std::fabs(fr.w.determinant()); }, false);
  CHECK_THROWS_AS(covering_pushforward(d, 2), std::invalid_argument);
}

TEST_CASE("metric density dominates the horizontal determinant") {
  std::mt19937_64 rng(13);
  for (int n : {1, 2}) {
    for (int i = 0; i < 1000; ++i) {
      Frame fr = random_frame(n, rng);
      const double det = std::fabs(fr.w.determinant());
      CHECK(metric_density_eval(fr) > det);
      fr.u.setZero();
      CHECK(metric_density_eval(fr) == doctest::Approx(det).epsilon(1e-12));
    }
  }
}

TEST_CASE("densities integrated over graphs") {
  // the integrand has kinks where beta crosses 0, so the rule needs many nodes
  const QuadratureRule q = QuadratureRule::torus(1, 1 << 16);
  const Profile p = Profile::piecewise_linear({0.0, 1.0}, {1.0, 0.0});
  const Density inv = Density::invariant(p);
  CHECK(integrate_density_over_graph(inv, OneForm::zero(1), q) == doctest::Approx(kTwoPi).epsilon(1e-12));

  const OneForm beta = OneForm::exact(PeriodicScalarField(1, {TrigTerm{0.6, {1, 0}, 0.0}}));
  const double ref = oracle::simpson_pieces([](double x) { return 1.0 - 0.6 * std::fabs(std::sin(x)); }, 0.0,
                                            kTwoPi, 4, 1e-13);
  CHECK(integrate_density_over_graph(inv, beta, q) == doctest::Approx(ref).epsilon(1e-8));

  const OneForm dcos = OneForm::exact(PeriodicScalarField(1, {TrigTerm{1.0, {1, 0}, 0.0}}));
  CHECK(integrate_density_over_graph(Density::metric(), dcos, q) ==
        doctest::Approx(graph_volume(dcos, q)).epsilon(1e-13));
}

TEST_CASE("frames round-trip through arrays and JSON") {
  std::mt19937_64 rng(4);
  const Frame fr = random_frame(2, rng);
  const auto arr = fr.to_array();
  const Frame back = Frame::from_array(2, arr);
  CHECK(back.to_array() == arr);
  const Frame viaj = frame_from_json(Json::parse(to_json(fr).dump()));
  CHECK(viaj.to_array() == arr);
  const Profile p = profile_from_json(to_json(kTent));
  CHECK(p.factor(0.3) == kTent.factor(0.3));
}
