#include "lagtomo/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lagtomo/roots.hpp"

namespace lagtomo {

Barcode::Barcode(int dim, std::vector<Bar> bars) : dim_(dim), bars_(std::move(bars)) {}

long Barcode::infinite_count() const {
  return std::count_if(bars_.begin(), bars_.end(), [](const Bar& b) { return b.infinite(); });
}

std::vector<double> Barcode::lengths() const {
  std::vector<double> out;
  out.reserve(bars_.size());
  for (const auto& b : bars_) out.push_back(b.length());
  std::sort(out.begin(), out.end());
  return out;
}

double Barcode::shortest() const {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& b : bars_) s = std::min(s, b.length());
  return s;
}

double Barcode::longest_finite() const {
  double s = 0.0;
  for (const auto& b : bars_) {
    if (!b.infinite()) s = std::max(s, b.length());
  }
  return s;
}

long bar_count(const Barcode& b, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("bar_count: eps must be positive");
  return std::count_if(b.bars().begin(), b.bars().end(),
                       [eps](const Bar& bar) { return bar.length() > eps; });
}

// ---------------------------------------------------------------------------

namespace {

class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  long find(long x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  void attach(long child, long root) { parent_[static_cast<std::size_t>(child)] = root; }

private:
  std::vector<long> parent_;
};

// Indices sorted by (value, index).
std::vector<long> filtration_order(const std::vector<double>& values) {
  std::vector<long> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](long a, long b) {
    const double va = values[static_cast<std::size_t>(a)];
    const double vb = values[static_cast<std::size_t>(b)];
    return va < vb || (va == vb && a < b);
  });
  return order;
}

// Elder rule H0 over vertices `v` and edges given by endpoint pairs. Returns
// per-edge flag: true if the edge merged two components. Finite H0 bars go to `bars`.
std::vector<char> zeroth_persistence(const std::vector<double>& v, const std::vector<double>& edge_value,
                                     const std::vector<long>& edge_order,
                                     const std::vector<std::pair<long, long>>& ends,
                                     std::vector<Bar>& bars) {
  UnionFind uf(v.size());
  const auto older = [&](long a, long b) {
    const double va = v[static_cast<std::size_t>(a)];
    const double vb = v[static_cast<std::size_t>(b)];
    return va < vb || (va == vb && a < b);
  };
  std::vector<char> negative(edge_value.size(), 0);
  for (long e : edge_order) {
    const auto [a, b] = ends[static_cast<std::size_t>(e)];
    long ra = uf.find(a);
    long rb = uf.find(b);
    if (ra == rb) continue;
    negative[static_cast<std::size_t>(e)] = 1;
    // Roots are the oldest vertex of their component.
    if (older(rb, ra)) std::swap(ra, rb);
    const double birth = v[static_cast<std::size_t>(rb)];
    const double death = edge_value[static_cast<std::size_t>(e)];
    if (death > birth) bars.push_back(Bar{birth, death, 0});
    uf.attach(rb, ra);
  }
  return negative;
}

}  // namespace

FilteredTorusComplex::FilteredTorusComplex(const PeriodicScalarField& f, int resolution, double offset)
    : dim_(f.dim()), n_(resolution), v_(f.sample_grid(resolution, offset)) {
  if (resolution < 4) throw std::invalid_argument("complex resolution must be >= 4");
}

FilteredTorusComplex::FilteredTorusComplex(int dim, int resolution, std::vector<double> vertex_values)
    : dim_(dim), n_(resolution), v_(std::move(vertex_values)) {
  require_dim(dim);
  if (resolution < 4) throw std::invalid_argument("complex resolution must be >= 4");
  const auto expected = static_cast<std::size_t>(dim == 1 ? resolution : resolution * resolution);
  if (v_.size() != expected) throw std::invalid_argument("vertex value count does not match the grid");
}

long FilteredTorusComplex::cell_count(int d) const {
  const long n = n_;
  if (dim_ == 1) return d == 0 || d == 1 ? n : 0;
  if (d == 0 || d == 2) return n * n;
  if (d == 1) return 2 * n * n;
  return 0;
}

std::vector<long> FilteredTorusComplex::faces(int d, long index) const {
  const long n = n_;
  if (d == 0) return {};
  if (dim_ == 1) return {index, (index + 1) % n};
  if (d == 1) {
    const long vtx = index / 2;
    const long i = vtx / n;
    const long j = vtx % n;
    if (index % 2 == 0) return {vtx, ((i + 1) % n) * n + j};
    return {vtx, i * n + (j + 1) % n};
  }
  const long i = index / n;
  const long j = index % n;
  const long ip = (i + 1) % n;
  const long jp = (j + 1) % n;
  return {2 * (i * n + j), 2 * (i * n + jp), 2 * (i * n + j) + 1, 2 * (ip * n + j) + 1};
}

double FilteredTorusComplex::value(int d, long index) const {
  if (d == 0) return v_[static_cast<std::size_t>(index)];
  double m = -std::numeric_limits<double>::infinity();
  for (long face : faces(d, index)) m = std::max(m, value(d - 1, face));
  return m;
}

bool FilteredTorusComplex::filtration_monotone() const {
  for (int d = 1; d <= dim_; ++d) {
    for (long c = 0; c < cell_count(d); ++c) {
      const double vc = value(d, c);
      for (long face : faces(d, c)) {
        if (value(d - 1, face) > vc) return false;
      }
    }
  }
  return true;
}

Barcode FilteredTorusComplex::persistence() const {
  return dim_ == 1 ? persistence_1d() : persistence_2d();
}

namespace {

long oldest_vertex(const std::vector<double>& v) {
  long best = 0;
  for (long i = 1; i < static_cast<long>(v.size()); ++i) {
    if (v[static_cast<std::size_t>(i)] < v[static_cast<std::size_t>(best)]) best = i;
  }
  return best;
}

}  // namespace

Barcode FilteredTorusComplex::persistence_1d() const {
  const long n = n_;
  std::vector<double> ev(static_cast<std::size_t>(n));
  std::vector<std::pair<long, long>> ends(static_cast<std::size_t>(n));
  for (long e = 0; e < n; ++e) {
    ends[static_cast<std::size_t>(e)] = {e, (e + 1) % n};
    ev[static_cast<std::size_t>(e)] = std::max(v_[static_cast<std::size_t>(e)], v_[static_cast<std::size_t>((e + 1) % n)]);
  }
  const auto order = filtration_order(ev);
  std::vector<Bar> bars;
  const auto negative = zeroth_persistence(v_, ev, order, ends, bars);
  bars.push_back(Bar{v_[static_cast<std::size_t>(oldest_vertex(v_))], Bar{}.death, 0});
  for (long e : order) {
    if (!negative[static_cast<std::size_t>(e)]) {
      bars.push_back(Bar{ev[static_cast<std::size_t>(e)], Bar{}.death, 1});
    }
  }
  return Barcode(1, std::move(bars));
}

Barcode FilteredTorusComplex::persistence_2d() const {
  const long n = n_;
  const long nv = n * n;
  const long ne = 2 * nv;
  std::vector<double> ev(static_cast<std::size_t>(ne));
  std::vector<std::pair<long, long>> ends(static_cast<std::size_t>(ne));
  for (long e = 0; e < ne; ++e) {
    const auto f = faces(1, e);
    ends[static_cast<std::size_t>(e)] = {f[0], f[1]};
    ev[static_cast<std::size_t>(e)] = std::max(v_[static_cast<std::size_t>(f[0])], v_[static_cast<std::size_t>(f[1])]);
  }
  const auto edge_order = filtration_order(ev);
  std::vector<long> edge_rank(static_cast<std::size_t>(ne));
  for (long r = 0; r < ne; ++r) edge_rank[static_cast<std::size_t>(edge_order[static_cast<std::size_t>(r)])] = r;

  std::vector<Bar> bars;
  const auto negative = zeroth_persistence(v_, ev, edge_order, ends, bars);
  bars.push_back(Bar{v_[static_cast<std::size_t>(oldest_vertex(v_))], Bar{}.death, 0});

  std::vector<double> sv(static_cast<std::size_t>(nv));
  for (long s = 0; s < nv; ++s) {
    double m = -std::numeric_limits<double>::infinity();
    for (long e : faces(2, s)) m = std::max(m, ev[static_cast<std::size_t>(e)]);
    sv[static_cast<std::size_t>(s)] = m;
  }
  const auto square_order = filtration_order(sv);

  // Column reduction of the square boundaries. Rows of edges that killed an H0
  // class can never be pivots and are dropped up front.
  std::vector<long> pivot_owner(static_cast<std::size_t>(ne), -1);
  std::vector<std::vector<long>> reduced(static_cast<std::size_t>(nv));
  std::vector<long> scratch;
  long positive_squares = 0;
  for (long s : square_order) {
    std::vector<long> col;
    for (long e : faces(2, s)) {
      if (!negative[static_cast<std::size_t>(e)]) col.push_back(edge_rank[static_cast<std::size_t>(e)]);
    }
    std::sort(col.begin(), col.end());
    while (!col.empty()) {
      const long low = col.back();
      const long owner = pivot_owner[static_cast<std::size_t>(low)];
      if (owner < 0) break;
      const auto& other = reduced[static_cast<std::size_t>(owner)];
      scratch.clear();
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                    std::back_inserter(scratch));
      col.swap(scratch);
    }
    if (col.empty()) {
      ++positive_squares;
      bars.push_back(Bar{sv[static_cast<std::size_t>(s)], Bar{}.death, 2});
      continue;
    }
    const long low = col.back();
    pivot_owner[static_cast<std::size_t>(low)] = s;
    const double birth = ev[static_cast<std::size_t>(edge_order[static_cast<std::size_t>(low)])];
    const double death = sv[static_cast<std::size_t>(s)];
    if (death > birth) bars.push_back(Bar{birth, death, 1});
    reduced[static_cast<std::size_t>(s)] = std::move(col);
  }
  for (long r = 0; r < ne; ++r) {
    const long e = edge_order[static_cast<std::size_t>(r)];
    if (!negative[static_cast<std::size_t>(e)] && pivot_owner[static_cast<std::size_t>(r)] < 0) {
      bars.push_back(Bar{ev[static_cast<std::size_t>(e)], Bar{}.death, 1});
    }
  }
  return Barcode(2, std::move(bars));
}

// ---------------------------------------------------------------------------

BarcodeResult barcode(const PeriodicScalarField& f, int resolution, double offset) {
  if (resolution < 64) throw std::invalid_argument("barcode: resolution must be >= 64");
  const FilteredTorusComplex cx(f, resolution, offset);
  const Barcode raw = cx.persistence();
  BarcodeResult r;
  const double h = kTwoPi / resolution;
  r.noise_floor = f.interpolation_error_bound(h);
  r.tolerance = 2.0 * r.noise_floor;
  std::vector<Bar> kept;
  std::ostringstream why;
  for (const auto& bar : raw.bars()) {
    if (!bar.infinite() && bar.length() <= r.noise_floor) {
      ++r.removed;
      continue;
    }
    if (!bar.infinite() && bar.length() <= r.tolerance && r.status == BarcodeStatus::Ok) {
      r.status = BarcodeStatus::Degenerate;
      why << "bar of length " << bar.length() << " within tolerance " << r.tolerance;
    }
    kept.push_back(bar);
  }
  r.barcode = Barcode(raw.dim(), std::move(kept));
  const auto grid = f.sample_grid(resolution, offset);
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  if (*hi - *lo <= r.tolerance) {
    r.status = BarcodeStatus::Degenerate;
    why.str("");
    why << "grid oscillation " << (*hi - *lo) << " within tolerance " << r.tolerance;
  }
  r.reason = why.str();
  return r;
}

BarIdentityReport verify_bar_identity(const PeriodicScalarField& f, int resolution, int sweep,
                                      int crit_grid) {
  BarIdentityReport rep;
  const BarcodeResult br = barcode(f, resolution);
  rep.status = br.status;
  const Barcode& b = br.barcode;
  const long h = 1L << f.dim();
  rep.bars = b.total();
  rep.infinite_bars = b.infinite_count();
  rep.crit_from_barcode = 2 * b.finite_count() + b.infinite_count();
  rep.two_b_minus_h = 2 * rep.bars - h;
  const RootCount crit = count_critical_points(f, crit_grid);
  rep.crit_independent = crit.count;
  rep.independent_tangent = crit.tangent;
  rep.identity_holds = !crit.tangent && rep.crit_independent == rep.two_b_minus_h &&
                       rep.crit_from_barcode == rep.two_b_minus_h;
  // Sweep eps geometrically from well below the shortest bar to past the longest.
  const double shortest = b.shortest();
  const double lo = std::isfinite(shortest) ? shortest / 10.0 : 1e-3;
  const double hi = std::max(2.0 * b.longest_finite(), 10.0 * lo);
  rep.inequality_holds = true;
  rep.sweep_points = sweep;
  for (int i = 0; i < sweep; ++i) {
    const double t = sweep > 1 ? static_cast<double>(i) / (sweep - 1) : 0.0;
    const double eps = lo * std::pow(hi / lo, t);
    if (rep.crit_independent < 2 * bar_count(b, eps) - h) rep.inequality_holds = false;
  }
  return rep;
}

StabilityReport stability_count_check(const PeriodicScalarField& f, const PeriodicScalarField& g,
                                      double eps, double delta, int resolution) {
  StabilityReport rep;
  rep.sup_distance = sup_norm(g - f, std::max(resolution, 64));
  rep.precondition_met = rep.sup_distance < delta / 2.0;
  // Raw grid barcodes: stability holds for them exactly, with no noise threshold involved.
  rep.lhs = bar_count(FilteredTorusComplex(g, resolution).persistence(), eps);
  rep.rhs = bar_count(FilteredTorusComplex(f, resolution).persistence(), eps + delta);
  rep.pass = rep.precondition_met && rep.lhs >= rep.rhs;
  return rep;
}

std::string barcode_csv(const Barcode& b) {
  std::string out = "length,is_infinite\n";
  char buf[64];
  for (double len : b.lengths()) {
    if (std::isinf(len)) {
      out += "inf,1\n";
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,0\n", len);
      out += buf;
    }
  }
  return out;
}

}  // namespace lagtomo
