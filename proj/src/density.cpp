#include "lagtomo/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lagtomo {

namespace {

double det_lu(const Matrix& m) {
  if (m.rows() == 1) return m(0, 0);
  return m.partialPivLu().determinant();
}

int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Frame

Frame Frame::on_graph(const OneForm& beta, const Coords& x) {
  const int n = beta.dim();
  // Tangent vector i is (e_i, d beta / d x_i); u_i is column i of the Jacobian.
  return Frame{TorusPoint(n, x), beta.eval(x), Matrix::Identity(n, n),
               beta.jacobian(x).transpose()};
}

Frame Frame::horizontal(const TorusPoint& x, const Vector& y) {
  const int n = x.dim();
  if (y.size() != n) throw std::invalid_argument("Frame::horizontal: dimension mismatch");
  return Frame{x, y, Matrix::Identity(n, n), Matrix::Zero(n, n)};
}

Frame Frame::reparametrized(const Matrix& a) const {
  const int n = dim();
  if (a.rows() != n || a.cols() != n) {
    throw std::invalid_argument("reparametrization matrix has wrong shape");
  }
  return Frame{x, y, a.transpose() * w, a.transpose() * u};
}

std::vector<double> Frame::to_array() const {
  const int n = dim();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * n + 2 * n * n));
  for (int i = 0; i < n; ++i) out.push_back(x[i]);
  for (int i = 0; i < n; ++i) out.push_back(y(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back(w(i, j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back(u(i, j));
  return out;
}

Frame Frame::from_array(int dim, std::span<const double> data) {
  require_dim(dim);
  const auto n = static_cast<std::size_t>(dim);
  if (data.size() != 2 * n + 2 * n * n) {
    throw std::invalid_argument("Frame::from_array: wrong number of entries");
  }
  Coords c{};
  Vector y(dim);
  Matrix w(dim, dim);
  Matrix u(dim, dim);
  std::size_t p = 0;
  for (std::size_t i = 0; i < n; ++i) c[i] = data[p++];
  for (int i = 0; i < dim; ++i) y(i) = data[p++];
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) w(i, j) = data[p++];
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) u(i, j) = data[p++];
  return Frame{TorusPoint(dim, c), y, w, u};
}

Frame random_frame(int dim, std::mt19937_64& rng, double scale, double height) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  Coords c{};
  for (int i = 0; i < dim; ++i) c[static_cast<std::size_t>(i)] = angle(rng);
  Vector y(dim);
  Matrix w(dim, dim);
  Matrix u(dim, dim);
  for (int i = 0; i < dim; ++i) y(i) = height * unit(rng);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) w(i, j) = scale * unit(rng);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) u(i, j) = scale * unit(rng);
  return Frame{TorusPoint(dim, c), y, w, u};
}

// ---------------------------------------------------------------------------
// Profile

Profile Profile::constant(double c) {
  if (c < 0.0) throw std::invalid_argument("profile must be non-negative");
  Profile p;
  p.kind_ = Kind::Constant;
  p.tag_ = "constant";
  p.scale_ = c;
  return p;
}

Profile Profile::piecewise_linear(std::vector<double> breakpoints, std::vector<double> values) {
  if (breakpoints.empty() || breakpoints.size() != values.size()) {
    throw std::invalid_argument("piecewise-linear profile needs matching breakpoints and values");
  }
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end()) ||
      std::adjacent_find(breakpoints.begin(), breakpoints.end()) != breakpoints.end()) {
    throw std::invalid_argument("profile breakpoints must be strictly increasing");
  }
  if (breakpoints.front() < 0.0) throw std::invalid_argument("profile breakpoints are in |y| >= 0");
  for (double v : values) {
    if (v < 0.0) throw std::invalid_argument("profile must be non-negative");
  }
  Profile p;
  p.kind_ = Kind::PiecewiseLinear;
  p.tag_ = "piecewise_linear";
  p.breakpoints_ = std::move(breakpoints);
  p.values_ = std::move(values);
  return p;
}

Profile Profile::custom(std::string tag, std::function<double(double)> factor, double scale) {
  Profile p;
  p.kind_ = Kind::Custom;
  p.tag_ = std::move(tag);
  p.custom_ = std::move(factor);
  p.scale_ = scale;
  return p;
}

double Profile::factor(double t) const {
  t = std::fabs(t);
  switch (kind_) {
    case Kind::Constant:
      return 1.0;
    case Kind::PiecewiseLinear: {
      if (t <= breakpoints_.front()) return values_.front();
      if (t >= breakpoints_.back()) return values_.back();
      const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
      const auto hi = static_cast<std::size_t>(it - breakpoints_.begin());
      const std::size_t lo = hi - 1;
      const double s = (t - breakpoints_[lo]) / (breakpoints_[hi] - breakpoints_[lo]);
      return values_[lo] + s * (values_[hi] - values_[lo]);
    }
    case Kind::Custom:
      return custom_(t);
  }
  return 0.0;
}

double Profile::operator()(const Vector& y) const {
  double v = scale_;
  for (int i = 0; i < y.size(); ++i) v *= factor(y(i));
  return v;
}

Profile Profile::scaled(double s) const {
  Profile p = *this;
  p.scale_ *= s;
  return p;
}

// ---------------------------------------------------------------------------
// Density

Density::Density(DensityKind kind, Evaluator eval, bool invariant, std::optional<Profile> profile)
    : kind_(kind), eval_(std::move(eval)), invariant_(invariant), profile_(std::move(profile)) {}

Density Density::metric() {
  return Density(DensityKind::Metric, &metric_density_eval, true, std::nullopt);
}

Density Density::invariant(Profile sigma) {
  auto eval = [sigma](const Frame& fr) { return invariant_density_eval(sigma, fr); };
  return Density(DensityKind::InvariantProfile, eval, true, std::move(sigma));
}

Density Density::pulled_back(Evaluator eval, bool translation_invariant) {
  return Density(DensityKind::PulledBack, std::move(eval), translation_invariant, std::nullopt);
}

double metric_density_eval(const Frame& fr) {
  const Matrix gram = fr.w * fr.w.transpose() + fr.u * fr.u.transpose();
  return std::sqrt(std::max(0.0, det_lu(gram)));
}

double invariant_density_eval(const Profile& sigma, const Frame& fr) {
  return sigma(fr.y) * std::fabs(det_lu(fr.w));
}

VerticalScale VerticalScale::finite(int k) {
  if (k < 1) throw std::invalid_argument("vertical scale needs k >= 1");
  return VerticalScale{k, false};
}

Density vertical_pullback(const Density& d, VerticalScale scale) {
  if (scale.infinite) {
    if (d.kind() == DensityKind::Metric) return Density::invariant(Profile::constant(1.0));
    if (d.kind() == DensityKind::InvariantProfile) return d;
    auto eval = [d](const Frame& fr) {
      Frame p = fr;
      p.u.setZero();
      return d(p);
    };
    return Density::pulled_back(eval, d.translation_invariant());
  }
  if (scale.k == 1) return d;
  const double inv = 1.0 / scale.k;
  auto eval = [d, inv](const Frame& fr) {
    Frame p = fr;
    p.u *= inv;
    return d(p);
  };
  return Density::pulled_back(eval, d.translation_invariant());
}

Density covering_pullback(const Density& d, int k) {
  if (k < 1) throw std::invalid_argument("covering degree must be >= 1");
  auto eval = [d, k](const Frame& fr) {
    const int n = fr.dim();
    Coords c{};
    for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = k * fr.x[i];
    Frame p{TorusPoint(n, c), fr.y, fr.w * static_cast<double>(k), fr.u};
    return d(p);
  };
  return Density::pulled_back(eval, d.translation_invariant());
}

Density covering_pushforward(const Density& d, int k) {
  if (k < 1) throw std::invalid_argument("covering degree must be >= 1");
  if (!d.translation_invariant()) {
    throw std::invalid_argument("push-forward along the covering needs a translation-invariant density");
  }
  auto eval = [d, k](const Frame& fr) {
    const int n = fr.dim();
    const int preimages = ipow(k, n);
    const double inv = 1.0 / k;
    double sum = 0.0;
    for (int idx = 0; idx < preimages; ++idx) {
      Coords c{};
      int rem = idx;
      for (int i = 0; i < n; ++i) {
        const int j = rem % k;
        rem /= k;
        c[static_cast<std::size_t>(i)] = (fr.x[i] + kTwoPi * j) * inv;
      }
      Frame p{TorusPoint(n, c), fr.y, fr.w * inv, fr.u};
      sum += d(p);
    }
    return sum;
  };
  return Density::pulled_back(eval, true);
}

double check_homogeneity(const Density& d, const Frame& fr, const Matrix& a) {
  return std::fabs(d(fr.reparametrized(a)) - std::fabs(det_lu(a)) * d(fr));
}

double ScalingLemmaResidual::worst() const { return std::max({pull_push, push_pull, vertical}); }

ScalingLemmaResidual scaling_lemma_check(const Profile& sigma, int dim, int k, int samples,
                                         std::uint64_t seed) {
  require_dim(dim);
  const Density d = Density::invariant(sigma);
  const Density pull_push = covering_pullback(covering_pushforward(d, k), k);
  const Density push_pull = covering_pushforward(covering_pullback(d, k), k);
  const Density vertical = vertical_pullback(d, VerticalScale::finite(k));
  const Density pulled = covering_pullback(d, k);
  const double kn = ipow(k, dim);
  std::mt19937_64 rng(seed);
  ScalingLemmaResidual r;
  for (int s = 0; s < samples; ++s) {
    const Frame fr = random_frame(dim, rng);
    const double base = d(fr);
    r.pull_push = std::max(r.pull_push, std::fabs(pull_push(fr) - kn * base));
    r.push_pull = std::max(r.push_pull, std::fabs(push_pull(fr) - kn * base));
    r.vertical = std::max(r.vertical, std::fabs(pulled(fr) / kn - vertical(fr)));
  }
  return r;
}

double integrate_density_over_graph(const Density& d, const OneForm& beta,
                                    const QuadratureRule& quad) {
  if (quad.dim() != beta.dim()) {
    throw std::invalid_argument("integrate_density_over_graph: dimension mismatch");
  }
  return quad.integrate([&](const Coords& x) { return d(Frame::on_graph(beta, x)); });
}

}  // namespace lagtomo
