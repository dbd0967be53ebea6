#include "lagtomo/tomograph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lagtomo/parallel.hpp"

namespace lagtomo {

// ---------------------------------------------------------------------------
// RadialMeasure

RadialMeasure::RadialMeasure(double outer_radius, std::vector<double> breakpoints,
                             std::vector<double> values)
    : outer_radius_(outer_radius), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() < 2 || breakpoints_.size() != values_.size()) {
    throw std::invalid_argument("radial measure needs >= 2 breakpoints with matching values");
  }
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i + 1] > breakpoints_[i])) {
      throw std::invalid_argument("radial breakpoints must be strictly increasing");
    }
  }
  if (!(breakpoints_.front() > 0.0)) throw std::invalid_argument("radial support must start at r0 > 0");
  // r1 = R is accepted: the measure still vanishes on the open boundary layer above R.
  if (breakpoints_.back() > outer_radius_) {
    throw std::invalid_argument("radial support must lie inside [0, R]");
  }
  for (double v : values_) {
    if (v < 0.0 || !std::isfinite(v)) throw std::invalid_argument("radial density must be non-negative");
  }
  cumulative_.assign(breakpoints_.size(), 0.0);
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] +
                     0.5 * (values_[i - 1] + values_[i]) * (breakpoints_[i] - breakpoints_[i - 1]);
  }
  if (!(total_mass() > 0.0)) throw std::invalid_argument("radial measure has zero mass");
}

RadialMeasure RadialMeasure::uniform(double r0, double r1, double outer_radius, double value) {
  return RadialMeasure(outer_radius, {r0, r1}, {value, value});
}

double RadialMeasure::density(double rho) const {
  if (rho < breakpoints_.front() || rho > breakpoints_.back()) return 0.0;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), rho);
  if (it == breakpoints_.end()) return values_.back();
  const auto hi = static_cast<std::size_t>(it - breakpoints_.begin());
  const std::size_t lo = hi - 1;
  const double s = (rho - breakpoints_[lo]) / (breakpoints_[hi] - breakpoints_[lo]);
  return values_[lo] + s * (values_[hi] - values_[lo]);
}

double RadialMeasure::primitive(double t) const {
  if (t <= breakpoints_.front()) return 0.0;
  if (t >= breakpoints_.back()) return cumulative_.back();
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const auto hi = static_cast<std::size_t>(it - breakpoints_.begin());
  const std::size_t lo = hi - 1;
  const double d = t - breakpoints_[lo];
  const double slope = (values_[hi] - values_[lo]) / (breakpoints_[hi] - breakpoints_[lo]);
  return cumulative_[lo] + values_[lo] * d + 0.5 * slope * d * d;
}

double RadialMeasure::tail_mass(double t) const { return total_mass() - primitive(t); }

double RadialMeasure::mass(double a, double b) const { return primitive(b) - primitive(a); }

// ---------------------------------------------------------------------------
// Tomograph

Tomograph::Tomograph(int dim, RadialMeasure measure, int frequency, double normalization)
    : dim_(dim), measure_(std::move(measure)), k_(frequency), normalization_(normalization) {
  require_dim(dim);
  if (frequency < 1) throw std::invalid_argument("tomograph frequency must be >= 1");
  if (!(normalization > 0.0)) throw std::invalid_argument("normalization must be positive");
}

double Tomograph::measure_scale() const {
  return 1.0 / (normalization_ * std::pow(static_cast<double>(k_), dim_));
}

PeriodicScalarField Tomograph::potential_at(const SParam& s) const {
  if (s.dim != dim_) throw std::invalid_argument("parameter dimension mismatch");
  std::vector<TrigTerm> terms;
  for (int i = 0; i < dim_; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    if (s.rho[ii] < 0.0) throw std::invalid_argument("rho must be non-negative");
    TrigTerm t{-s.rho[ii] / k_, {0, 0}, s.phi[ii]};
    t.wave[ii] = k_;
    terms.push_back(t);
  }
  return PeriodicScalarField(dim_, std::move(terms));
}

GraphLagrangian Tomograph::lagrangian_at(const SParam& s) const {
  const PeriodicScalarField pot = potential_at(s);
  std::vector<PeriodicScalarField> comps;
  for (int i = 0; i < dim_; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    comps.push_back(PeriodicScalarField::sine(dim_, i, s.rho[ii], k_, s.phi[ii]));
  }
  return GraphLagrangian(OneForm(std::move(comps), pot));
}

Tomograph Tomograph::homogenized(int k) const {
  if (k < 1) throw std::invalid_argument("homogenization frequency must be >= 1");
  return Tomograph(dim_, measure_, k_ * k, normalization_);
}

Tomograph Tomograph::normalized() const {
  return Tomograph(dim_, measure_, k_, normalization_constant(*this));
}

// ---------------------------------------------------------------------------
// Counting

namespace {

PeriodicScalarField factor_height(const OneForm& beta, int axis) {
  return beta.components()[static_cast<std::size_t>(axis)].restrict_to_axis(axis);
}

}  // namespace

RootCount intersection_count(const Tomograph& t, const SParam& s, const GraphLagrangian& l,
                             double jacobian_tol, int coupled_grid) {
  const int n = t.dim();
  if (l.dim() != n || s.dim != n) throw std::invalid_argument("intersection_count: dimension mismatch");
  const OneForm& beta = l.form();
  const RootScanOptions opts{jacobian_tol, 1e-13};
  if (beta.is_separable()) {
    RootCount total{1, false};
    for (int i = 0; i < n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const SineFactorCounter counter(factor_height(beta, i), t.frequency());
      const RootCount rc = counter.count(s.rho[ii], s.phi[ii], opts);
      total.count *= rc.count;
      total.tangent = total.tangent || rc.tangent;
    }
    return total;
  }
  const PeriodicScalarField g1 =
      PeriodicScalarField::sine(2, 0, s.rho[0], t.frequency(), s.phi[0]) - beta.components()[0];
  const PeriodicScalarField g2 =
      PeriodicScalarField::sine(2, 1, s.rho[1], t.frequency(), s.phi[1]) - beta.components()[1];
  return count_zeros_2d(g1, g2, coupled_grid, opts);
}

namespace {

struct SampleCount {
  long count = 0;
  bool tangent = false;
  bool failed = false;
};

// Integrates one separable factor: int_0^{2pi} int m(rho) N(rho, phi) d rho d phi.
class FactorIntegrator {
public:
  FactorIntegrator(const RadialMeasure& m, const PeriodicScalarField& height, int k,
                   const CroftonOptions& opts, int factor)
      : m_(m), counter_(height, k, opts.scan_grid), opts_(opts), factor_(factor),
        scan_{opts.jacobian_tol, 1e-13} {}

  struct Slot {
    double value = 0.0;
    long samples = 0;
    long tangent = 0;
    long failed = 0;
    std::vector<CroftonTraceRecord> trace;
  };

  Slot run(double phi, double phi_weight) const {
    Slot slot;
    const int cells = opts_.radial;
    const double a = m_.r0();
    const double b = m_.r1();
    const double h = (b - a) / cells;
    std::vector<long> counts(static_cast<std::size_t>(cells) + 1);
    for (int j = 0; j <= cells; ++j) {
      const double rho = j == cells ? b : a + j * h;
      const SampleCount c = count(rho, phi);
      counts[static_cast<std::size_t>(j)] = c.count;
      ++slot.samples;
      if (c.tangent) ++slot.tangent;
      if (c.failed) ++slot.failed;
    }
    for (int j = 0; j < cells; ++j) {
      const double lo = a + j * h;
      const double hi = j + 1 == cells ? b : a + (j + 1) * h;
      const long clo = counts[static_cast<std::size_t>(j)];
      const long chi = counts[static_cast<std::size_t>(j) + 1];
      if (clo == chi) {
        piece(slot, lo, hi, clo, phi, phi_weight);
      } else {
        locate(slot, lo, hi, clo, chi, phi, phi_weight);
      }
    }
    return slot;
  }

private:
  SampleCount count(double rho, double phi) const {
    const RootCount rc = counter_.count(rho, phi, scan_);
    if (!rc.tangent) return {rc.count, false, false};
    double moved = rho + opts_.perturbation;
    if (moved > m_.r1()) moved = rho - opts_.perturbation;
    const RootCount again = counter_.count(moved, phi, scan_);
    return {again.count, true, again.tangent};
  }

  void piece(Slot& slot, double lo, double hi, long c, double phi, double phi_weight) const {
    const double w = phi_weight * m_.mass(lo, hi);
    slot.value += static_cast<double>(c) * w;
    if (opts_.trace) {
      CroftonTraceRecord r;
      r.factor = factor_;
      r.s.dim = 1;
      r.s.rho[0] = lo;
      r.s.phi[0] = phi;
      r.rho_hi = hi;
      r.count = c;
      r.weight = w;
      slot.trace.push_back(r);
    }
  }

  // The count changes inside [lo, hi]; bisect until each jump is pinned to jump_tol.
  void locate(Slot& slot, double lo, double hi, long clo, long chi, double phi,
              double phi_weight) const {
    if (hi - lo <= opts_.jump_tol) {
      const double mid = 0.5 * (lo + hi);
      piece(slot, lo, mid, clo, phi, phi_weight);
      piece(slot, mid, hi, chi, phi, phi_weight);
      return;
    }
    const double mid = 0.5 * (lo + hi);
    const long cm = count(mid, phi).count;
    if (cm == clo) {
      piece(slot, lo, mid, clo, phi, phi_weight);
    } else {
      locate(slot, lo, mid, clo, cm, phi, phi_weight);
    }
    if (cm == chi) {
      piece(slot, mid, hi, chi, phi, phi_weight);
    } else {
      locate(slot, mid, hi, cm, chi, phi, phi_weight);
    }
  }

  const RadialMeasure& m_;
  SineFactorCounter counter_;
  const CroftonOptions& opts_;
  int factor_;
  RootScanOptions scan_;
};

void finish(CroftonResult& r, const CroftonOptions& opts) {
  r.tangent_fraction = r.samples > 0 ? static_cast<double>(r.tangent) / r.samples : 0.0;
  std::ostringstream msg;
  if (r.tangent_fraction > opts.max_tangent_fraction) {
    r.ok = false;
    msg << "tangent fraction " << r.tangent_fraction << " exceeds " << opts.max_tangent_fraction;
  }
  if (r.failed > 0) {
    r.ok = false;
    if (!msg.str().empty()) msg << "; ";
    msg << r.failed << " samples stayed tangent after perturbation";
  }
  r.message = msg.str();
}

CroftonResult crofton_separable(const Tomograph& t, const OneForm& beta, const CroftonOptions& opts) {
  CroftonResult result;
  const QuadratureAxis phis = periodic_trapezoid(opts.angular);
  double product = 1.0;
  for (int i = 0; i < t.dim(); ++i) {
    const FactorIntegrator integrator(t.measure(), factor_height(beta, i), t.frequency(), opts, i);
    std::vector<FactorIntegrator::Slot> slots(static_cast<std::size_t>(opts.angular));
    parallel_for(opts.angular, opts.threads, [&](long j) {
      const auto jj = static_cast<std::size_t>(j);
      slots[jj] = integrator.run(phis.nodes[jj], phis.weights[jj]);
    });
    double factor = 0.0;
    for (auto& slot : slots) {
      factor += slot.value;
      result.samples += slot.samples;
      result.tangent += slot.tangent;
      result.failed += slot.failed;
      if (opts.trace) {
        result.trace.insert(result.trace.end(), slot.trace.begin(), slot.trace.end());
      }
    }
    product *= factor;
  }
  result.value = product * t.measure_scale();
  finish(result, opts);
  return result;
}

CroftonResult crofton_coupled(const Tomograph& t, const OneForm& beta, const CroftonOptions& opts) {
  CroftonResult result;
  const auto samples = sample_parameter_space(t, opts.coupled_radial, opts.coupled_angular);
  std::vector<SampleCount> counts(samples.size());
  const GraphLagrangian l(beta);
  parallel_for(static_cast<long>(samples.size()), opts.threads, [&](long idx) {
    const auto ii = static_cast<std::size_t>(idx);
    SParam s = samples[ii].s;
    RootCount rc = intersection_count(t, s, l, opts.jacobian_tol, opts.coupled_grid);
    SampleCount c{rc.count, rc.tangent, false};
    if (rc.tangent) {
      s.rho[0] += opts.perturbation;
      rc = intersection_count(t, s, l, opts.jacobian_tol, opts.coupled_grid);
      c.count = rc.count;
      c.failed = rc.tangent;
    }
    counts[ii] = c;
  });
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& c = counts[i];
    result.value += static_cast<double>(c.count) * samples[i].weight;
    ++result.samples;
    if (c.tangent) ++result.tangent;
    if (c.failed) ++result.failed;
    if (opts.trace) {
      result.trace.push_back(CroftonTraceRecord{-1, samples[i].s, 0.0, c.count, samples[i].weight});
    }
  }
  finish(result, opts);
  return result;
}

}  // namespace

CroftonResult crofton_integral(const Tomograph& t, const GraphLagrangian& l, const CroftonOptions& opts) {
  if (l.dim() != t.dim()) throw std::invalid_argument("crofton_integral: dimension mismatch");
  if (opts.radial < 1 || opts.angular < 1) throw std::invalid_argument("crofton_integral: empty quadrature");
  if (l.form().is_separable()) return crofton_separable(t, l.form(), opts);
  return crofton_coupled(t, l.form(), opts);
}

// ---------------------------------------------------------------------------
// Closed forms

double sigma(const Tomograph& t, const Vector& y) {
  if (y.size() != t.dim()) throw std::invalid_argument("sigma: dimension mismatch");
  double v = 1.0;
  for (int i = 0; i < t.dim(); ++i) v *= 2.0 * t.measure().tail_mass(std::fabs(y(i)));
  return v / t.normalization();
}

double normalization_constant(const Tomograph& t) {
  // Same product order as sigma(), so sigma(0) / c is exactly 1.
  double v = 1.0;
  for (int i = 0; i < t.dim(); ++i) v *= 2.0 * t.measure().tail_mass(0.0);
  return v;
}

double flat_crofton_closed_form(const Tomograph& t, const Vector& y) {
  return std::pow(kTwoPi, t.dim()) * sigma(t, y);
}

double homogenized_limit(const Tomograph& t, const OneForm& beta, const QuadratureRule& quad) {
  if (beta.dim() != t.dim() || quad.dim() != t.dim()) {
    throw std::invalid_argument("homogenized_limit: dimension mismatch");
  }
  return quad.integrate([&](const Coords& x) { return sigma(t, beta.eval(x)); });
}

std::vector<WeightedSample> sample_parameter_space(const Tomograph& t, int radial, int angular) {
  const auto& m = t.measure();
  const int panels = static_cast<int>(m.breakpoints().size()) - 1;
  const QuadratureAxis rho = composite_gauss_legendre(m.breakpoints(), std::max(1, radial / panels));
  const QuadratureAxis phi = periodic_trapezoid(angular);
  std::vector<std::pair<double, double>> rp;  // (rho, phi) per factor
  std::vector<double> w;
  for (int i = 0; i < rho.size(); ++i) {
    const auto ii = static_cast<std::size_t>(i);
    for (int j = 0; j < phi.size(); ++j) {
      const auto jj = static_cast<std::size_t>(j);
      rp.emplace_back(rho.nodes[ii], phi.nodes[jj]);
      w.push_back(m.density(rho.nodes[ii]) * rho.weights[ii] * phi.weights[jj]);
    }
  }
  std::vector<WeightedSample> out;
  const double scale = t.measure_scale();
  if (t.dim() == 1) {
    for (std::size_t a = 0; a < rp.size(); ++a) {
      WeightedSample ws;
      ws.s.dim = 1;
      ws.s.rho[0] = rp[a].first;
      ws.s.phi[0] = rp[a].second;
      ws.weight = w[a] * scale;
      out.push_back(ws);
    }
    return out;
  }
  out.reserve(rp.size() * rp.size());
  for (std::size_t a = 0; a < rp.size(); ++a) {
    for (std::size_t b = 0; b < rp.size(); ++b) {
      WeightedSample ws;
      ws.s.dim = 2;
      ws.s.rho = {rp[a].first, rp[b].first};
      ws.s.phi = {rp[a].second, rp[b].second};
      ws.weight = w[a] * w[b] * scale;
      out.push_back(ws);
    }
  }
  return out;
}

}  // namespace lagtomo
