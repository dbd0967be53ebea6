#include <random>

#include "doctest.h"
#include "lagtomo/experiments.hpp"

using namespace lagtomo;

namespace {

std::vector<std::size_t> rows_where(const Report& r, const std::string& column, const std::string& value) {
  std::vector<std::size_t> out;
  const std::size_t c = r.column(column);
  for (std::size_t i = 0; i < r.rows().size(); ++i) {
    const auto* s = std::get_if<std::string>(&r.rows()[i][c]);
    if (s && *s == value) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST_CASE("random trig fields respect their limits") {
  std::mt19937_64 rng(4);
  for (int dim : {1, 2}) {
    const auto f = random_trig_field(dim, rng, 6, 3);
    CHECK(f.terms().size() == 6);
    CHECK(f.max_frequency() <= 3);
    for (const auto& t : f.terms()) {
      CHECK(std::fabs(t.amplitude) <= 1.0);
      CHECK((t.wave[0] != 0 || t.wave[1] != 0));
    }
  }
  std::mt19937_64 a(9), b(9);
  CHECK(random_trig_field(1, a, 3, 2).terms()[2].phase == random_trig_field(1, b, 3, 2).terms()[2].phase);
}

TEST_CASE("homogenization of flat sections has no gap") {
  ExperimentConfig cfg;
  cfg.homogenize.form = OneForm::zero(1);
  cfg.homogenize.k_schedule = {1, 2, 4};
  const Report r = run_homogenization(cfg);
  CHECK(r.pass());
  for (std::size_t i = 0; i < r.rows().size(); ++i) CHECK(r.number(i, "relative_gap") <= 1e-9);

  Vector y(1);
  y(0) = 0.62;
  cfg.homogenize.form = OneForm::constant(y);
  const Report c = run_homogenization(cfg);
  CHECK(c.pass());
  for (std::size_t i = 0; i < c.rows().size(); ++i) CHECK(c.number(i, "relative_gap") <= 1e-6);
}

TEST_CASE("crofton suite rows outside the support vanish on both sides") {
  ExperimentConfig cfg;
  cfg.crofton.y_max = 1.5;
  cfg.crofton.y_points = 7;
  cfg.crofton.max_at_zero_pairs = 200;
  const Report r = run_crofton_suite(cfg);
  CHECK(r.pass());
  const auto flat = rows_where(r, "case", "flat_crofton");
  REQUIRE(flat.size() == 7);
  CHECK(r.number(flat.back(), "lhs") == 0.0);
  CHECK(r.number(flat.back(), "rhs") == 0.0);
}

TEST_CASE("proof trace on the zero section") {
  ExperimentConfig cfg;
  cfg.proof_trace.radial = 10;
  cfg.proof_trace.angular = 16;
  cfg.proof_trace.perturbations = 3;
  const ProofTraceOutcome o = run_theorem_proof_trace_detailed(cfg);
  CHECK(o.report.pass());
  CHECK(o.samples == 160);
  CHECK(o.b_prime == 160);
  CHECK(o.degenerate == 0);
  CHECK(std::isinf(o.shortest_bar));
  CHECK(o.shortest_bar_stable);
  CHECK(o.identity_failures == 0);
  CHECK(o.chain_passes == 3);
  CHECK(o.epsilon + o.delta < o.shortest_bar);
}

TEST_CASE("proof trace chain on a non-trivial base") {
  ExperimentConfig cfg;
  cfg.proof_trace.base = PeriodicScalarField(1, {TrigTerm{0.2, {2, 0}, 0.0}, TrigTerm{0.1, {3, 0}, 1.0}});
  cfg.proof_trace.radial = 10;
  cfg.proof_trace.angular = 16;
  cfg.proof_trace.perturbations = 3;
  const ProofTraceOutcome o = run_theorem_proof_trace_detailed(cfg);
  CHECK(o.shortest_bar > 0.0);
  CHECK(std::isfinite(o.shortest_bar));
  CHECK(o.epsilon + o.delta < o.shortest_bar);
  CHECK(o.identity_failures == 0);
  CHECK(o.chain_passes == o.chain_runs);
}

TEST_CASE("semicontinuity on a short schedule") {
  ExperimentConfig cfg;
  cfg.semicontinuity.t_schedule = {0.3, 0.15};
  cfg.semicontinuity.volume_growth = 2.0;
  cfg.semicontinuity.final_fraction = 0.01;
  const Report r = run_semicontinuity(cfg);
  CHECK(r.pass());
  const auto t = rows_where(r, "case", "tentacle");
  REQUIRE(t.size() == 2);
  CHECK(r.number(t[0], "N") == 12);
  CHECK(r.number(t[1], "N") == 45);
  CHECK(r.number(t[1], "volume") > r.number(t[0], "volume"));
  CHECK(r.number(t[1], "deficit") <= r.number(t[0], "deficit"));
  CHECK(rows_where(r, "case", "control").size() == 1);
}

TEST_CASE("volume bound excludes graphs leaving V") {
  ExperimentConfig cfg;
  cfg.volume_bound.forms = 2;
  cfg.volume_bound.k_max = 8;
  const Report r = run_volume_bound(cfg);
  CHECK(r.pass());
  CHECK(rows_where(r, "status", "OUT_OF_V").size() == 1);
  CHECK(rows_where(r, "case", "threshold").size() == 3);
  for (std::size_t i : rows_where(r, "case", "zero_section")) {
    CHECK(r.number(i, "lhs") == doctest::Approx(kTwoPi).epsilon(1e-3));
  }
}

TEST_CASE("volume bound reports failure when k_max is too small") {
  ExperimentConfig cfg;
  cfg.volume_bound.forms = 0;
  cfg.volume_bound.k_max = 1;
  // a steep form whose k = 1 Crofton value exceeds its volume bound
  cfg.volume_bound.extra_forms = {OneForm::exact(PeriodicScalarField(1, {TrigTerm{0.06, {3, 0}, 0.0}}))};
  const Report r = run_volume_bound(cfg);
  const auto th = rows_where(r, "case", "threshold");
  REQUIRE(th.size() == 2);
  CHECK_FALSE(r.pass());
  CHECK(r.number(th.back(), "k") == -1);
  CHECK(rows_where(r, "status", "NO_K").size() == 1);
}
