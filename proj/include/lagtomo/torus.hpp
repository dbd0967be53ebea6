// Periodic scalar fields, one-forms and graph Lagrangians on T^n x R^n.
#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lagtomo {

inline constexpr int kMaxDim = 2;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Coords = std::array<double, kMaxDim>;
using WaveVector = std::array<int, kMaxDim>;

// Stack-only small vectors/matrices; n <= 2 keeps everything off the heap.
using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

void require_dim(int dim);

/// A point of T^n with every angle reduced into [0, 2pi).
class TorusPoint {
public:
  TorusPoint(int dim, Coords coords);
  explicit TorusPoint(double x1);
  TorusPoint(double x1, double x2);

  int dim() const { return dim_; }
  double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  const Coords& coords() const { return coords_; }

private:
  int dim_;
  Coords coords_;
};

double wrap_angle(double x);

/// One term a * cos(<m, x> + theta).
struct TrigTerm {
  double amplitude = 0.0;
  WaveVector wave{};
  double phase = 0.0;
};

/// f(x) = sum_j a_j cos(<m_j, x> + theta_j), exactly 2pi-periodic. All
/// derivatives are taken term by term.
class PeriodicScalarField {
public:
  PeriodicScalarField() = default;
  PeriodicScalarField(int dim, std::vector<TrigTerm> terms);

  static PeriodicScalarField zero(int dim);
  static PeriodicScalarField constant(int dim, double c);
  /// rho * sin(k x_axis + phi)
  static PeriodicScalarField sine(int dim, int axis, double rho, int k, double phi);

  int dim() const { return dim_; }
  const std::vector<TrigTerm>& terms() const { return terms_; }

  double value(const Coords& x) const;
  double value(const TorusPoint& x) const { return value(x.coords()); }
  double partial(const Coords& x, int axis) const;
  Vector gradient(const Coords& x) const;
  Matrix hessian(const Coords& x) const;

  /// Exact partial derivative as a new field.
  PeriodicScalarField derivative(int axis) const;
  PeriodicScalarField scaled(double s) const;
  PeriodicScalarField shifted(const Coords& theta) const;  // x -> f(x + theta)
  PeriodicScalarField operator+(const PeriodicScalarField& other) const;
  PeriodicScalarField operator-(const PeriodicScalarField& other) const;

  /// True when every term's wave vector is supported on `axis` only.
  bool depends_only_on(int axis) const;
  /// Restriction of an axis-only field to a 1D field in that coordinate.
  PeriodicScalarField restrict_to_axis(int axis) const;

  int max_frequency() const;
  /// sum |a|, sum |a||m|_inf, sum |a||m|_inf^2: sup bounds of |f|, |df|, |d2f| along any axis.
  double amplitude_bound() const;
  double first_derivative_bound() const;
  double second_derivative_bound() const;
  /// Bound on the error of multilinear grid interpolation with spacing h.
  double interpolation_error_bound(double h) const;

  /// Values on the uniform grid x_j = (j + offset) * 2pi / resolution, row-major in n=2.
  std::vector<double> sample_grid(int resolution, double offset = 0.0) const;

private:
  int dim_ = 1;
  std::vector<TrigTerm> terms_;
};

/// beta = sum_i beta_i dx_i with each component a periodic field; an exact form
/// also carries its potential.
class OneForm {
public:
  explicit OneForm(std::vector<PeriodicScalarField> components,
                   std::optional<PeriodicScalarField> potential = std::nullopt);

  static OneForm zero(int dim);
  static OneForm exact(const PeriodicScalarField& potential);
  static OneForm constant(const Vector& y);

  int dim() const { return static_cast<int>(components_.size()); }
  const std::vector<PeriodicScalarField>& components() const { return components_; }
  const std::optional<PeriodicScalarField>& potential() const { return potential_; }

  Vector eval(const Coords& x) const;
  Vector eval(const TorusPoint& x) const;
  /// J(i, j) = d beta_i / d x_j
  Matrix jacobian(const Coords& x) const;

  /// Component i depends on x_i only.
  bool is_separable() const;
  OneForm shifted(const Coords& theta) const;
  OneForm scaled(double s) const;

  /// max |beta_i - d_i potential| over a resolution^n grid; 0 when no potential.
  double potential_discrepancy(int resolution) const;

private:
  std::vector<PeriodicScalarField> components_;
  std::optional<PeriodicScalarField> potential_;
};

/// Vector-valued evaluation; throws std::invalid_argument on dimension mismatch.
Vector eval_one_form(const OneForm& beta, const TorusPoint& x);

/// {(x, beta(x))} in T^n x R^n.
class GraphLagrangian {
public:
  explicit GraphLagrangian(OneForm beta) : beta_(std::move(beta)) {}

  /// The constant section T^n x {y}.
  static GraphLagrangian flat(const Vector& y) { return GraphLagrangian(OneForm::constant(y)); }

  int dim() const { return beta_.dim(); }
  const OneForm& form() const { return beta_; }
  Vector height(const Coords& x) const { return beta_.eval(x); }
  /// Vertical parts of the tangent frame (e_i, d beta / d x_i): column i is d beta / d x_i.
  Matrix vertical_frame(const Coords& x) const { return beta_.jacobian(x); }

private:
  OneForm beta_;
};

class QuadratureRule;

/// Surface area of graph(beta) in the flat metric. With `tube`, only the part
/// inside {|y_i| < tube} is measured.
double graph_volume(const OneForm& beta, const QuadratureRule& quad,
                    std::optional<double> tube = std::nullopt);

/// max f - min f, from a resolution^n grid with one Newton step at the extremal nodes.
double oscillation(const PeriodicScalarField& f, int resolution);

struct Extrema {
  double min = 0.0;
  double max = 0.0;
  Coords argmin{};
  Coords argmax{};
};
Extrema extrema(const PeriodicScalarField& f, int resolution);

/// sup |f| via extrema().
double sup_norm(const PeriodicScalarField& f, int resolution);

}  // namespace lagtomo
