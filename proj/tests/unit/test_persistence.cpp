#include <algorithm>
#include <map>
#include <random>
#include <tuple>

#include "doctest.h"
#include "lagtomo/experiments.hpp"
#include "lagtomo/persistence.hpp"

using namespace lagtomo;

namespace {

// Textbook persistence: full boundary matrix of the periodic cubical grid,
// columns sorted by (value, dimension, index), standard left-to-right reduction.
std::vector<Bar> reduction_oracle(int dim, int n, const std::vector<double>& v) {
  struct Cell {
    double value;
    int d;
    long id;
    std::vector<long> faces;  // ids into the same cell list
  };
  std::vector<Cell> cells;
  const auto vid = [n](int i, int j) { return static_cast<long>(((i % n) + n) % n) * n + ((j % n) + n) % n; };
  if (dim == 1) {
    for (int i = 0; i < n; ++i) cells.push_back({v[static_cast<std::size_t>(i)], 0, i, {}});
    for (int i = 0; i < n; ++i) {
      const long a = i, b = (i + 1) % n;
      cells.push_back({std::max(v[static_cast<std::size_t>(a)], v[static_cast<std::size_t>(b)]), 1, n + i, {a, b}});
    }
  } else {
    const long nv = static_cast<long>(n) * n;
    for (long i = 0; i < nv; ++i) cells.push_back({v[static_cast<std::size_t>(i)], 0, i, {}});
    const auto val = [&](long id) { return cells[static_cast<std::size_t>(id)].value; };
    // horizontal edges h(i,j) = nv + vid, vertical edges nv + nv + vid
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const long a = vid(i, j), b = vid(i, j + 1);
        cells.push_back({std::max(val(a), val(b)), 1, nv + vid(i, j), {a, b}});
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const long a = vid(i, j), b = vid(i + 1, j);
        cells.push_back({std::max(val(a), val(b)), 1, 2 * nv + vid(i, j), {a, b}});
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::vector<long> f{nv + vid(i, j), nv + vid(i + 1, j), 2 * nv + vid(i, j), 2 * nv + vid(i, j + 1)};
        double m = -1e300;
        for (long e : f) m = std::max(m, val(e));
        cells.push_back({m, 2, 3 * nv + vid(i, j), f});
      }
  }
  std::vector<long> order(cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<long>(i);
  std::sort(order.begin(), order.end(), [&](long a, long b) {
    const Cell& x = cells[static_cast<std::size_t>(a)];
    const Cell& y = cells[static_cast<std::size_t>(b)];
    return std::tie(x.value, x.d, x.id) < std::tie(y.value, y.d, y.id);
  });
  std::vector<long> pos(cells.size());
  for (std::size_t p = 0; p < order.size(); ++p) pos[static_cast<std::size_t>(order[p])] = static_cast<long>(p);

  std::vector<std::vector<long>> cols(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) {
    for (long f : cells[static_cast<std::size_t>(order[p])].faces) cols[p].push_back(pos[static_cast<std::size_t>(f)]);
    std::sort(cols[p].begin(), cols[p].end());
  }
  std::map<long, long> low_owner;
  std::vector<char> paired(order.size(), 0);
  std::vector<Bar> bars;
  for (std::size_t p = 0; p < cols.size(); ++p) {
    auto& c = cols[p];
    while (!c.empty() && low_owner.count(c.back())) {
      const auto& other = cols[static_cast<std::size_t>(low_owner[c.back()])];
      std::vector<long> sum;
      std::set_symmetric_difference(c.begin(), c.end(), other.begin(), other.end(), std::back_inserter(sum));
      c.swap(sum);
    }
    if (c.empty()) continue;
    low_owner[c.back()] = static_cast<long>(p);
    paired[static_cast<std::size_t>(c.back())] = 1;
    paired[p] = 1;
    const Cell& birth = cells[static_cast<std::size_t>(order[static_cast<std::size_t>(c.back())])];
    const Cell& death = cells[static_cast<std::size_t>(order[p])];
    if (death.value > birth.value) bars.push_back({birth.value, death.value, birth.d});
  }
  for (std::size_t p = 0; p < cols.size(); ++p) {
    if (!paired[p]) {
      const Cell& c = cells[static_cast<std::size_t>(order[p])];
      bars.push_back({c.value, std::numeric_limits<double>::infinity(), c.d});
    }
  }
  return bars;
}

std::vector<std::tuple<int, double, double>> normalized(const std::vector<Bar>& bars) {
  std::vector<std::tuple<int, double, double>> out;
  for (const auto& b : bars) out.emplace_back(b.degree, b.birth, b.death);
  std::sort(out.begin(), out.end());
  return out;
}

PeriodicScalarField cosm(int m, double a = 1.0) { return PeriodicScalarField(1, {TrigTerm{a, {m, 0}, 0.0}}); }

}  // namespace

TEST_CASE("barcodes of cos x and cos 2x") {
  const BarcodeResult a = barcode(cosm(1), 2048);
  CHECK_FALSE(a.degenerate());
  CHECK(a.barcode.total() == 2);
  CHECK(a.barcode.infinite_count() == 2);
  CHECK(std::isinf(a.barcode.shortest()));

  const BarcodeResult b = barcode(cosm(2), 2048);
  CHECK(b.barcode.total() == 3);
  CHECK(b.barcode.infinite_count() == 2);
  CHECK(b.barcode.shortest() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.barcode.longest_finite() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("constant fields are degenerate") {
  CHECK(barcode(PeriodicScalarField::constant(1, 3.0), 256).degenerate());
  CHECK(barcode(PeriodicScalarField::zero(2), 64).degenerate());
  CHECK_THROWS(barcode(cosm(1), 32));
}

TEST_CASE("bar counts") {
  CHECK(bar_count(barcode(cosm(1), 512).barcode, 0.1) == 2);
  const Barcode b = barcode(cosm(2), 512).barcode;
  CHECK(bar_count(b, 3.0) == 2);
  CHECK(bar_count(b, 1.0) == 3);
  std::mt19937_64 rng(1);
  const auto f = random_trig_field(2, rng, 4, 3);
  const Barcode c = barcode(f, 128).barcode;
  CHECK(bar_count(c, c.longest_finite() + 1.0) == 4);
}

TEST_CASE("cubical persistence matches textbook matrix reduction") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int dim : {1, 2}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int n = dim == 1 ? 40 + trial : 6 + trial % 7;
      std::vector<double> v(static_cast<std::size_t>(dim == 1 ? n : n * n));
      for (auto& x : v) x = u(rng);
      if (trial % 4 == 0) {
        for (auto& x : v) x = std::round(4.0 * x) / 4.0;  // heavy ties
      }
      const FilteredTorusComplex cx(dim, n, v);
      CHECK(cx.filtration_monotone());
      const Barcode got = cx.persistence();
      const auto expect = normalized(reduction_oracle(dim, n, v));
      CHECK(normalized(got.bars()) == expect);
      CHECK(got.infinite_count() == (dim == 1 ? 2 : 4));
    }
  }
}

TEST_CASE("cubical complex structure") {
  const FilteredTorusComplex c(2, 8, std::vector<double>(64, 0.0));
  CHECK(c.cell_count(0) == 64);
  CHECK(c.cell_count(1) == 128);
  CHECK(c.cell_count(2) == 64);
  CHECK(c.faces(1, 5).size() == 2);
  CHECK(c.faces(2, 5).size() == 4);
}

TEST_CASE("critical point count equals 2b - h") {
  CHECK(verify_bar_identity(cosm(1), 2048).crit_independent == 2);
  const BarIdentityReport r2 = verify_bar_identity(cosm(2), 2048);
  CHECK(r2.crit_independent == 4);
  CHECK(r2.two_b_minus_h == 4);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 10; ++i) {
    const auto f = random_trig_field(1, rng, 5, 5);
    const BarIdentityReport r = verify_bar_identity(f, 2048, 50);
    CHECK(r.status == BarcodeStatus::Ok);
    CHECK(r.identity_holds);
    CHECK(r.inequality_holds);
  }
  const auto f2 = random_trig_field(2, rng, 4, 2);
  const BarIdentityReport r = verify_bar_identity(f2, 128, 50);
  CHECK(r.identity_holds);
  CHECK(r.inequality_holds);
}

TEST_CASE("bar counts are stable under small perturbations") {
  const auto f = cosm(2);
  const PeriodicScalarField g = f + PeriodicScalarField(1, {TrigTerm{0.05, {3, 0}, -std::numbers::pi / 2}});
  const StabilityReport s = stability_count_check(f, g, 0.5, 0.2, 2048);
  CHECK(s.precondition_met);
  CHECK(s.pass);
  CHECK(s.lhs >= s.rhs);
  for (double eps : {0.01, 0.5, 3.0}) CHECK(stability_count_check(f, f, eps, 0.1, 512).pass);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> size(0.01, 0.3), eps(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const auto base = random_trig_field(1, rng, 4, 4);
    auto pert = random_trig_field(1, rng, 3, 6);
    pert = pert.scaled(size(rng) / sup_norm(pert, 4096));
    const double delta = 2.5 * sup_norm(pert, 4096);
    const StabilityReport r = stability_count_check(base, base + pert, eps(rng), delta, 1024);
    CHECK(r.precondition_met);
    CHECK(r.pass);
  }
}

TEST_CASE("barcode CSV") {
  const std::string csv = barcode_csv(barcode(cosm(2), 256).barcode);
  CHECK(csv.rfind("length,is_infinite\n", 0) == 0);
  CHECK(csv.find("inf,1\n") != std::string::npos);
  CHECK(csv.find(",0\n") != std::string::npos);
}
