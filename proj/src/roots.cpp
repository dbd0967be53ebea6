#include "lagtomo/roots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lagtomo/kernels.hpp"

namespace lagtomo {

namespace {

struct Interval {
  double a, b, ga, gb, da, db;
};

// Bisects an uncertified interval until every piece is certified. `eval`
// returns (g, g') at a point.
template <class Eval>
void refine_interval(const Eval& eval, const Interval& start, double l1, double l2,
                     const RootScanOptions& opts, RootCount& rc) {
  // Degenerate input (g identically zero, or a nest of near-tangencies) would
  // otherwise split without bound.
  constexpr int kBudget = 20000;
  int splits = 0;
  std::vector<Interval> stack{start};
  while (!stack.empty()) {
    const Interval it = stack.back();
    stack.pop_back();
    const double w = it.b - it.a;
    const bool sign_change = (it.ga >= 0.0) != (it.gb >= 0.0);
    const double vsum = std::fabs(it.ga) + std::fabs(it.gb);
    const double dsum = std::fabs(it.da) + std::fabs(it.db);
    const bool same_slope = (it.da > 0.0 && it.db > 0.0) || (it.da < 0.0 && it.db < 0.0);
    const bool monotone = same_slope && dsum > l2 * w;
    const bool no_root = vsum > l1 * w;
    const bool transverse = (dsum - l2 * w) * 0.5 >= opts.jacobian_tol;
    if (monotone && sign_change && transverse) {
      ++rc.count;
      continue;
    }
    if (!sign_change && (no_root || monotone)) continue;
    if (w < opts.min_width) {
      rc.tangent = true;
      if (sign_change) ++rc.count;
      continue;
    }
    if (++splits > kBudget) {
      rc.tangent = true;
      return;
    }
    const double m = 0.5 * (it.a + it.b);
    const auto [gm, dm] = eval(m);
    stack.push_back({m, it.b, gm, it.gb, dm, it.db});
    stack.push_back({it.a, m, it.ga, gm, it.da, dm});
  }
}

struct ScanBuffers {
  std::vector<double> g, dg;
  std::vector<int> flagged;
};

ScanBuffers& scratch() {
  thread_local ScanBuffers buf;
  return buf;
}

int round_up(int v, int multiple) { return (v + multiple - 1) / multiple * multiple; }

}  // namespace

int default_scan_grid(int max_frequency) {
  return round_up(std::max(64, 16 * std::max(1, max_frequency)), 8);
}

RootCount count_zeros_1d(const PeriodicScalarField& g, int grid, const RootScanOptions& opts) {
  if (g.dim() != 1) throw std::invalid_argument("count_zeros_1d: field must be 1D");
  if (grid <= 0) grid = default_scan_grid(g.max_frequency());
  const PeriodicScalarField dg = g.derivative(0);
  const double h = kTwoPi / grid;
  auto values = g.sample_grid(grid);
  auto slopes = dg.sample_grid(grid);
  values.push_back(values.front());
  slopes.push_back(slopes.front());
  const double l1 = g.first_derivative_bound();
  const double l2 = g.second_derivative_bound();
  std::vector<int> flagged;
  RootCount rc;
  rc.count = kernels::classify_intervals(values, slopes, {h * l1, h * l2, opts.jacobian_tol},
                                         flagged);
  const auto eval = [&](double x) {
    const Coords c{x, 0.0};
    return std::pair{g.value(c), dg.value(c)};
  };
  for (int i : flagged) {
    const auto j = static_cast<std::size_t>(i);
    refine_interval(eval, {i * h, (i + 1) * h, values[j], values[j + 1], slopes[j], slopes[j + 1]},
                    l1, l2, opts, rc);
  }
  return rc;
}

// ---------------------------------------------------------------------------

SineFactorCounter::SineFactorCounter(const PeriodicScalarField& b, int k, int grid) : k_(k) {
  if (b.dim() != 1) throw std::invalid_argument("SineFactorCounter: b must be a 1D field");
  if (k < 1) throw std::invalid_argument("SineFactorCounter: frequency must be >= 1");
  // Terms of b at frequency k merge with the sine: near rho sin(kx + phi) = b
  // the difference is tiny and the Lipschitz bounds must see that.
  std::vector<TrigTerm> rest;
  for (const auto& t : b.terms()) {
    if (std::abs(t.wave[0]) == k) {
      const double sign = t.wave[0] > 0 ? 1.0 : -1.0;
      sin_coef_ -= sign * t.amplitude * std::sin(t.phase);
      cos_coef_ += t.amplitude * std::cos(t.phase);
    } else {
      rest.push_back(t);
    }
  }
  b_ = PeriodicScalarField(1, std::move(rest));
  db_ = b_.derivative(0);
  grid_ = grid > 0 ? grid : default_scan_grid(k + b.max_frequency());
  h_ = kTwoPi / grid_;
  b1_ = b_.first_derivative_bound();
  b2_ = b_.second_derivative_bound();
  const auto n = static_cast<std::size_t>(grid_);
  sin_kx_.resize(n + 1);
  cos_kx_.resize(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) * h_;
    sin_kx_[j] = std::sin(k * x);
    cos_kx_[j] = std::cos(k * x);
  }
  b_grid_ = b_.sample_grid(grid_);
  db_grid_ = db_.sample_grid(grid_);
  sin_kx_[n] = sin_kx_[0];
  cos_kx_[n] = cos_kx_[0];
  b_grid_.push_back(b_grid_.front());
  db_grid_.push_back(db_grid_.front());
}

RootCount SineFactorCounter::count(double rho, double phi, const RootScanOptions& opts) const {
  auto& buf = scratch();
  const std::size_t n = sin_kx_.size();
  buf.g.resize(n);
  buf.dg.resize(n);
  // g = a sin(kx) + c cos(kx) - b_rest(x)
  const double a = rho * std::cos(phi) - sin_coef_;
  const double c = rho * std::sin(phi) - cos_coef_;
  kernels::combine(a, sin_kx_, c, cos_kx_, b_grid_, buf.g);
  kernels::combine(k_ * a, cos_kx_, -k_ * c, sin_kx_, db_grid_, buf.dg);
  const double amp = std::hypot(a, c);
  const double l1 = amp * k_ + b1_;
  const double l2 = amp * k_ * k_ + b2_;
  RootCount rc;
  rc.count = kernels::classify_intervals(buf.g, buf.dg, {h_ * l1, h_ * l2, opts.jacobian_tol},
                                         buf.flagged);
  if (buf.flagged.empty()) return rc;
  const auto eval = [&](double x) {
    const double sk = std::sin(k_ * x);
    const double ck = std::cos(k_ * x);
    const Coords cx{x, 0.0};
    return std::pair{a * sk + c * ck - b_.value(cx), k_ * (a * ck - c * sk) - db_.value(cx)};
  };
  // Copy: refine_interval may not touch buf, but keep the flagged list stable.
  const std::vector<int> flagged = buf.flagged;
  for (int i : flagged) {
    const auto j = static_cast<std::size_t>(i);
    refine_interval(eval,
                    {i * h_, (i + 1) * h_, buf.g[j], buf.g[j + 1], buf.dg[j], buf.dg[j + 1]}, l1,
                    l2, opts, rc);
  }
  return rc;
}

// ---------------------------------------------------------------------------

namespace {

double gradient_norm_bound(const PeriodicScalarField& f) {
  double s = 0.0;
  for (const auto& t : f.terms()) {
    s += std::fabs(t.amplitude) * std::hypot(t.wave[0], t.wave[1]);
  }
  return s;
}

double periodic_gap(double a, double b) {
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

void bilinear_seeds(const double g[4], const double f[4], std::vector<std::pair<double, double>>& out) {
  // Corners ordered (0,0), (1,0), (0,1), (1,1) in local (s, t).
  const double a0 = g[0], a1 = g[1] - g[0], a2 = g[2] - g[0], a3 = g[3] - g[1] - g[2] + g[0];
  const double b0 = f[0], b1 = f[1] - f[0], b2 = f[2] - f[0], b3 = f[3] - f[1] - f[2] + f[0];
  const double c2 = b2 * a3 - b3 * a2;
  const double c1 = b0 * a3 + b2 * a1 - b1 * a2 - b3 * a0;
  const double c0 = b0 * a1 - b1 * a0;
  double ts[2];
  int nt = 0;
  const double scale = std::max({std::fabs(c2), std::fabs(c1), std::fabs(c0)});
  if (scale == 0.0) return;
  if (std::fabs(c2) < 1e-12 * scale) {
    if (std::fabs(c1) > 0.0) ts[nt++] = -c0 / c1;
  } else {
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double q = -0.5 * (c1 + std::copysign(sq, c1));
      ts[nt++] = q / c2;
      if (q != 0.0) ts[nt++] = c0 / q;
    }
  }
  constexpr double margin = 0.25;
  for (int i = 0; i < nt; ++i) {
    const double t = ts[i];
    if (!(t >= -margin && t <= 1.0 + margin)) continue;
    const double den = a1 + a3 * t;
    const double den2 = b1 + b3 * t;
    double s;
    if (std::fabs(den) >= std::fabs(den2)) {
      if (den == 0.0) continue;
      s = -(a0 + a2 * t) / den;
    } else {
      s = -(b0 + b2 * t) / den2;
    }
    if (s >= -margin && s <= 1.0 + margin) out.emplace_back(s, t);
  }
}

}  // namespace

RootCount count_zeros_2d(const PeriodicScalarField& g1, const PeriodicScalarField& g2, int grid,
                         const RootScanOptions& opts, std::vector<Coords>* roots) {
  if (g1.dim() != 2 || g2.dim() != 2) throw std::invalid_argument("count_zeros_2d: fields must be 2D");
  if (grid < 8) throw std::invalid_argument("count_zeros_2d: grid too coarse");
  const auto n = static_cast<std::size_t>(grid);
  const double h = kTwoPi / grid;
  const auto v1 = g1.sample_grid(grid);
  const auto v2 = g2.sample_grid(grid);
  const double slack1 = gradient_norm_bound(g1) * h * std::numbers::sqrt2 / 2.0;
  const double slack2 = gradient_norm_bound(g2) * h * std::numbers::sqrt2 / 2.0;
  const double tol = 1e-12 * (1.0 + g1.amplitude_bound() + g2.amplitude_bound());

  const auto maybe_zero = [](const double c[4], double slack) {
    const bool pos = c[0] >= 0.0;
    double lo = std::fabs(c[0]);
    for (int q = 1; q < 4; ++q) {
      if ((c[q] >= 0.0) != pos) return true;
      lo = std::min(lo, std::fabs(c[q]));
    }
    return lo <= slack;
  };

  std::vector<Coords> found;
  RootCount rc;
  std::vector<std::pair<double, double>> seeds;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = (i + 1) % n;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t jp = (j + 1) % n;
      const double c1[4] = {v1[i * n + j], v1[ip * n + j], v1[i * n + jp], v1[ip * n + jp]};
      if (!maybe_zero(c1, slack1)) continue;
      const double c2[4] = {v2[i * n + j], v2[ip * n + j], v2[i * n + jp], v2[ip * n + jp]};
      if (!maybe_zero(c2, slack2)) continue;
      seeds.clear();
      bilinear_seeds(c1, c2, seeds);
      if (seeds.empty()) seeds.emplace_back(0.5, 0.5);
      for (const auto& [s, t] : seeds) {
        Coords x{(static_cast<double>(i) + s) * h, (static_cast<double>(j) + t) * h};
        bool converged = false;
        for (int iter = 0; iter < 40; ++iter) {
          Vector r(2);
          r << g1.value(x), g2.value(x);
          Matrix jac(2, 2);
          jac.row(0) = g1.gradient(x).transpose();
          jac.row(1) = g2.gradient(x).transpose();
          const double det = jac.determinant();
          if (r.cwiseAbs().maxCoeff() <= tol) {
            converged = true;
            break;
          }
          if (det == 0.0) break;
          const Vector step = jac.partialPivLu().solve(r);
          x[0] -= step(0);
          x[1] -= step(1);
          if (step.cwiseAbs().maxCoeff() > 4.0 * h) break;  // left the neighbourhood
        }
        if (!converged) continue;
        const Coords w{wrap_angle(x[0]), wrap_angle(x[1])};
        const bool dup = std::any_of(found.begin(), found.end(), [&](const Coords& y) {
          return periodic_gap(w[0], y[0]) < 1e-7 && periodic_gap(w[1], y[1]) < 1e-7;
        });
        if (dup) continue;
        found.push_back(w);
        Matrix jac(2, 2);
        jac.row(0) = g1.gradient(w).transpose();
        jac.row(1) = g2.gradient(w).transpose();
        if (std::fabs(jac.determinant()) < opts.jacobian_tol) rc.tangent = true;
      }
    }
  }
  rc.count = static_cast<long>(found.size());
  if (roots) *roots = std::move(found);
  return rc;
}

RootCount count_critical_points(const PeriodicScalarField& f, int grid, const RootScanOptions& opts) {
  if (f.dim() == 1) return count_zeros_1d(f.derivative(0), grid, opts);
  return count_zeros_2d(f.derivative(0), f.derivative(1), grid > 0 ? grid : 512, opts);
}

}  // namespace lagtomo
