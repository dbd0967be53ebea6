#include "lagtomo/torus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lagtomo/quadrature.hpp"

namespace lagtomo {

void require_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw std::invalid_argument("dimension must be 1 or 2, got " + std::to_string(dim));
  }
}

double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

TorusPoint::TorusPoint(int dim, Coords coords) : dim_(dim), coords_{} {
  require_dim(dim);
  for (int i = 0; i < dim; ++i) {
    coords_[static_cast<std::size_t>(i)] = wrap_angle(coords[static_cast<std::size_t>(i)]);
  }
}

TorusPoint::TorusPoint(double x1) : TorusPoint(1, Coords{x1, 0.0}) {}
TorusPoint::TorusPoint(double x1, double x2) : TorusPoint(2, Coords{x1, x2}) {}

// ---------------------------------------------------------------------------

namespace {

double phase_of(const TrigTerm& t, const Coords& x, int dim) {
  double arg = t.phase;
  for (int i = 0; i < dim; ++i) {
    arg += t.wave[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  }
  return arg;
}

int sup_wave(const TrigTerm& t) {
  return std::max(std::abs(t.wave[0]), std::abs(t.wave[1]));
}

}  // namespace

PeriodicScalarField::PeriodicScalarField(int dim, std::vector<TrigTerm> terms)
    : dim_(dim), terms_(std::move(terms)) {
  require_dim(dim);
  for (auto& t : terms_) {
    for (int i = dim; i < kMaxDim; ++i) {
      if (t.wave[static_cast<std::size_t>(i)] != 0) {
        throw std::invalid_argument("wave vector has components beyond the field dimension");
      }
    }
  }
}

PeriodicScalarField PeriodicScalarField::zero(int dim) { return PeriodicScalarField(dim, {}); }

PeriodicScalarField PeriodicScalarField::constant(int dim, double c) {
  if (c == 0.0) return zero(dim);
  return PeriodicScalarField(dim, {TrigTerm{c, {0, 0}, 0.0}});
}

PeriodicScalarField PeriodicScalarField::sine(int dim, int axis, double rho, int k, double phi) {
  require_dim(dim);
  if (axis < 0 || axis >= dim) throw std::invalid_argument("sine: axis out of range");
  TrigTerm t{rho, {0, 0}, phi - std::numbers::pi / 2.0};
  t.wave[static_cast<std::size_t>(axis)] = k;
  return PeriodicScalarField(dim, {t});
}

double PeriodicScalarField::value(const Coords& x) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    s += t.amplitude * std::cos(phase_of(t, x, dim_));
  }
  return s;
}

double PeriodicScalarField::partial(const Coords& x, int axis) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    const int m = t.wave[static_cast<std::size_t>(axis)];
    if (m != 0) s -= t.amplitude * m * std::sin(phase_of(t, x, dim_));
  }
  return s;
}

Vector PeriodicScalarField::gradient(const Coords& x) const {
  Vector g = Vector::Zero(dim_);
  for (const auto& t : terms_) {
    const double sn = std::sin(phase_of(t, x, dim_));
    for (int i = 0; i < dim_; ++i) {
      g(i) -= t.amplitude * t.wave[static_cast<std::size_t>(i)] * sn;
    }
  }
  return g;
}

Matrix PeriodicScalarField::hessian(const Coords& x) const {
  Matrix h = Matrix::Zero(dim_, dim_);
  for (const auto& t : terms_) {
    const double cs = std::cos(phase_of(t, x, dim_));
    for (int i = 0; i < dim_; ++i) {
      for (int j = 0; j < dim_; ++j) {
        h(i, j) -= t.amplitude * t.wave[static_cast<std::size_t>(i)] *
                   t.wave[static_cast<std::size_t>(j)] * cs;
      }
    }
  }
  return h;
}

PeriodicScalarField PeriodicScalarField::derivative(int axis) const {
  if (axis < 0 || axis >= dim_) throw std::invalid_argument("derivative: axis out of range");
  std::vector<TrigTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    const int m = t.wave[static_cast<std::size_t>(axis)];
    if (m == 0) continue;
    // d/dx a cos(u) = -a m sin(u) = a m cos(u + pi/2)
    out.push_back(TrigTerm{t.amplitude * m, t.wave, t.phase + std::numbers::pi / 2.0});
  }
  return PeriodicScalarField(dim_, std::move(out));
}

PeriodicScalarField PeriodicScalarField::scaled(double s) const {
  auto out = terms_;
  for (auto& t : out) t.amplitude *= s;
  return PeriodicScalarField(dim_, std::move(out));
}

PeriodicScalarField PeriodicScalarField::shifted(const Coords& theta) const {
  auto out = terms_;
  for (auto& t : out) {
    for (int i = 0; i < dim_; ++i) {
      t.phase += t.wave[static_cast<std::size_t>(i)] * theta[static_cast<std::size_t>(i)];
    }
  }
  return PeriodicScalarField(dim_, std::move(out));
}

PeriodicScalarField PeriodicScalarField::operator+(const PeriodicScalarField& other) const {
  if (other.dim_ != dim_) throw std::invalid_argument("field dimension mismatch");
  auto out = terms_;
  out.insert(out.end(), other.terms_.begin(), other.terms_.end());
  return PeriodicScalarField(dim_, std::move(out));
}

PeriodicScalarField PeriodicScalarField::operator-(const PeriodicScalarField& other) const {
  return *this + other.scaled(-1.0);
}

bool PeriodicScalarField::depends_only_on(int axis) const {
  for (const auto& t : terms_) {
    for (int i = 0; i < dim_; ++i) {
      if (i != axis && t.wave[static_cast<std::size_t>(i)] != 0) return false;
    }
  }
  return true;
}

PeriodicScalarField PeriodicScalarField::restrict_to_axis(int axis) const {
  if (!depends_only_on(axis)) {
    throw std::invalid_argument("restrict_to_axis: field depends on other coordinates");
  }
  std::vector<TrigTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    out.push_back(TrigTerm{t.amplitude, {t.wave[static_cast<std::size_t>(axis)], 0}, t.phase});
  }
  return PeriodicScalarField(1, std::move(out));
}

int PeriodicScalarField::max_frequency() const {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, sup_wave(t));
  return m;
}

double PeriodicScalarField::amplitude_bound() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::fabs(t.amplitude);
  return s;
}

double PeriodicScalarField::first_derivative_bound() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::fabs(t.amplitude) * sup_wave(t);
  return s;
}

double PeriodicScalarField::second_derivative_bound() const {
  double s = 0.0;
  for (const auto& t : terms_) {
    const double m = sup_wave(t);
    s += std::fabs(t.amplitude) * m * m;
  }
  return s;
}

double PeriodicScalarField::interpolation_error_bound(double h) const {
  // Multilinear interpolation: |f - I f| <= h^2/8 * sum_i sup|d_ii f|.
  double s = 0.0;
  for (const auto& t : terms_) {
    double m2 = 0.0;
    for (int i = 0; i < dim_; ++i) {
      const double m = t.wave[static_cast<std::size_t>(i)];
      m2 += m * m;
    }
    s += std::fabs(t.amplitude) * m2;
  }
  return h * h / 8.0 * s;
}

std::vector<double> PeriodicScalarField::sample_grid(int resolution, double offset) const {
  if (resolution < 1) throw std::invalid_argument("sample_grid: resolution must be positive");
  const auto n = static_cast<std::size_t>(resolution);
  const double h = kTwoPi / resolution;
  if (dim_ == 1) {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = value(Coords{(static_cast<double>(j) + offset) * h, 0.0});
    }
    return out;
  }
  // Separate each term into per-axis cos/sin tables: cos(a+b) = ca cb - sa sb.
  std::vector<double> out(n * n, 0.0);
  std::vector<double> ca(n), sa(n), cb(n), sb(n);
  for (const auto& t : terms_) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = (static_cast<double>(j) + offset) * h;
      const double a = t.wave[0] * x + t.phase;
      const double b = t.wave[1] * x;
      ca[j] = std::cos(a);
      sa[j] = std::sin(a);
      cb[j] = std::cos(b);
      sb[j] = std::sin(b);
    }
    for (std::size_t i = 0; i < n; ++i) {
      double* row = out.data() + i * n;
      const double c0 = t.amplitude * ca[i];
      const double s0 = t.amplitude * sa[i];
      for (std::size_t j = 0; j < n; ++j) {
        row[j] += c0 * cb[j] - s0 * sb[j];
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

OneForm::OneForm(std::vector<PeriodicScalarField> components,
                 std::optional<PeriodicScalarField> potential)
    : components_(std::move(components)), potential_(std::move(potential)) {
  const int n = static_cast<int>(components_.size());
  require_dim(n);
  for (const auto& c : components_) {
    if (c.dim() != n) throw std::invalid_argument("one-form component has wrong dimension");
  }
  if (potential_ && potential_->dim() != n) {
    throw std::invalid_argument("potential has wrong dimension");
  }
}

OneForm OneForm::zero(int dim) {
  require_dim(dim);
  return OneForm(std::vector<PeriodicScalarField>(static_cast<std::size_t>(dim),
                                                  PeriodicScalarField::zero(dim)),
                 PeriodicScalarField::zero(dim));
}

OneForm OneForm::exact(const PeriodicScalarField& potential) {
  std::vector<PeriodicScalarField> comps;
  for (int i = 0; i < potential.dim(); ++i) comps.push_back(potential.derivative(i));
  return OneForm(std::move(comps), potential);
}

OneForm OneForm::constant(const Vector& y) {
  const int n = static_cast<int>(y.size());
  require_dim(n);
  std::vector<PeriodicScalarField> comps;
  for (int i = 0; i < n; ++i) comps.push_back(PeriodicScalarField::constant(n, y(i)));
  // y dx is closed but not exact unless y = 0.
  std::optional<PeriodicScalarField> pot;
  if (y.isZero(0.0)) pot = PeriodicScalarField::zero(n);
  return OneForm(std::move(comps), pot);
}

Vector OneForm::eval(const Coords& x) const {
  Vector v(dim());
  for (int i = 0; i < dim(); ++i) v(i) = components_[static_cast<std::size_t>(i)].value(x);
  return v;
}

Vector OneForm::eval(const TorusPoint& x) const {
  if (x.dim() != dim()) throw std::invalid_argument("one-form evaluated at a point of wrong dimension");
  return eval(x.coords());
}

Matrix OneForm::jacobian(const Coords& x) const {
  Matrix j(dim(), dim());
  for (int i = 0; i < dim(); ++i) {
    j.row(i) = components_[static_cast<std::size_t>(i)].gradient(x).transpose();
  }
  return j;
}

bool OneForm::is_separable() const {
  for (int i = 0; i < dim(); ++i) {
    if (!components_[static_cast<std::size_t>(i)].depends_only_on(i)) return false;
  }
  return true;
}

OneForm OneForm::shifted(const Coords& theta) const {
  std::vector<PeriodicScalarField> comps;
  for (const auto& c : components_) comps.push_back(c.shifted(theta));
  std::optional<PeriodicScalarField> pot;
  if (potential_) pot = potential_->shifted(theta);
  return OneForm(std::move(comps), pot);
}

OneForm OneForm::scaled(double s) const {
  std::vector<PeriodicScalarField> comps;
  for (const auto& c : components_) comps.push_back(c.scaled(s));
  std::optional<PeriodicScalarField> pot;
  if (potential_) pot = potential_->scaled(s);
  return OneForm(std::move(comps), pot);
}

double OneForm::potential_discrepancy(int resolution) const {
  if (!potential_) return 0.0;
  double worst = 0.0;
  const auto quad = QuadratureRule::torus(dim(), resolution);
  quad.for_each([&](const Coords& x, double) {
    const Vector grad = potential_->gradient(x);
    const Vector b = eval(x);
    worst = std::max(worst, (grad - b).cwiseAbs().maxCoeff());
  });
  return worst;
}

Vector eval_one_form(const OneForm& beta, const TorusPoint& x) { return beta.eval(x); }

// ---------------------------------------------------------------------------

double graph_volume(const OneForm& beta, const QuadratureRule& quad, std::optional<double> tube) {
  if (quad.dim() != beta.dim()) throw std::invalid_argument("graph_volume: dimension mismatch");
  const int n = beta.dim();
  return quad.integrate([&](const Coords& x) {
    if (tube) {
      const Vector y = beta.eval(x);
      if (y.cwiseAbs().maxCoeff() >= *tube) return 0.0;
    }
    const Matrix j = beta.jacobian(x);
    const Matrix gram = Matrix::Identity(n, n) + j.transpose() * j;
    return std::sqrt(gram.determinant());
  });
}

namespace {

// One Newton step on the gradient; kept only if it improves the value in the
// requested direction and stays within a grid cell.
// Newton on the gradient from a grid node, each step at most h, kept while it improves.
void refine_extremum(const PeriodicScalarField& f, Coords& x, double& value, bool maximize,
                     double h) {
  const int n = f.dim();
  for (int iter = 0; iter < 8; ++iter) {
    const Vector g = f.gradient(x);
    const Matrix hess = f.hessian(x);
    if (std::fabs(hess.determinant()) < 1e-300) return;
    const Vector step = hess.partialPivLu().solve(g);
    if (!step.allFinite() || step.cwiseAbs().maxCoeff() > h) return;
    Coords y = x;
    for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] -= step(i);
    const double v = f.value(y);
    if (!((maximize && v > value) || (!maximize && v < value))) return;
    value = v;
    x = y;
  }
}

// Nodes that might sit next to the true extremum: within h^2 sup|f''| / 8 per
// axis of the best sample. At most `cap` of them, best first.
std::vector<std::ptrdiff_t> extremum_candidates(const std::vector<double>& grid, double slack, bool maximize,
                                                std::size_t cap) {
  const double best = maximize ? *std::max_element(grid.begin(), grid.end())
                               : *std::min_element(grid.begin(), grid.end());
  std::vector<std::ptrdiff_t> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (maximize ? grid[i] >= best - slack : grid[i] <= best + slack) out.push_back(static_cast<std::ptrdiff_t>(i));
  }
  const auto better = [&](std::ptrdiff_t a, std::ptrdiff_t b) {
    return maximize ? grid[static_cast<std::size_t>(a)] > grid[static_cast<std::size_t>(b)]
                    : grid[static_cast<std::size_t>(a)] < grid[static_cast<std::size_t>(b)];
  };
  if (out.size() > cap) {
    std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(cap), out.end(), better);
    out.resize(cap);
  }
  return out;
}

}  // namespace

Extrema extrema(const PeriodicScalarField& f, int resolution) {
  if (resolution < 64) throw std::invalid_argument("oscillation: resolution must be >= 64");
  const auto grid = f.sample_grid(resolution);
  const double h = kTwoPi / resolution;
  const auto node = [&](std::ptrdiff_t idx) {
    if (f.dim() == 1) return Coords{static_cast<double>(idx) * h, 0.0};
    return Coords{static_cast<double>(idx / resolution) * h,
                  static_cast<double>(idx % resolution) * h};
  };
  const double slack = f.dim() * h * h * f.second_derivative_bound() / 8.0;
  Extrema e;
  e.min = std::numeric_limits<double>::infinity();
  e.max = -std::numeric_limits<double>::infinity();
  for (bool maximize : {false, true}) {
    for (std::ptrdiff_t idx : extremum_candidates(grid, slack, maximize, 64)) {
      Coords x = node(idx);
      double v = grid[static_cast<std::size_t>(idx)];
      refine_extremum(f, x, v, maximize, h);
      if (maximize && v > e.max) {
        e.max = v;
        e.argmax = x;
      } else if (!maximize && v < e.min) {
        e.min = v;
        e.argmin = x;
      }
    }
  }
  return e;
}

double oscillation(const PeriodicScalarField& f, int resolution) {
  const auto e = extrema(f, resolution);
  return e.max - e.min;
}

double sup_norm(const PeriodicScalarField& f, int resolution) {
  const auto e = extrema(f, resolution);
  return std::max(std::fabs(e.min), std::fabs(e.max));
}

}  // namespace lagtomo
