// The sine-graph tomograph on T^n x R^n and its homogenizations T_k.
//
// Parameter space B is a polydisk; s = ((rho_1, phi_1), ..., (rho_n, phi_n))
// and L_s is the graph of beta_s(x)_i = rho_i sin(k x_i + phi_i). The measure
// is ds = prod_i m(rho_i) d rho_i d phi_i / (c k^n), with c the normalization.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "lagtomo/quadrature.hpp"
#include "lagtomo/roots.hpp"
#include "lagtomo/torus.hpp"

namespace lagtomo {

/// m on [0, R]: piecewise linear through (breakpoints, values) on [r0, r1] =
/// [breakpoints.front(), breakpoints.back()], zero outside.
class RadialMeasure {
public:
  RadialMeasure(double outer_radius, std::vector<double> breakpoints, std::vector<double> values);
  /// m = value on [r0, r1].
  static RadialMeasure uniform(double r0, double r1, double outer_radius, double value = 1.0);

  double density(double rho) const;
  /// M(t) = int_t^R m
  double tail_mass(double t) const;
  /// int_a^b m
  double mass(double a, double b) const;
  double total_mass() const { return cumulative_.back(); }

  double outer_radius() const { return outer_radius_; }
  double r0() const { return breakpoints_.front(); }
  double r1() const { return breakpoints_.back(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }

private:
  double primitive(double t) const;  // int_0^t m

  double outer_radius_;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::vector<double> cumulative_;  // primitive at each breakpoint
};

struct SParam {
  int dim = 1;
  std::array<double, kMaxDim> rho{};
  std::array<double, kMaxDim> phi{};
};

class Tomograph {
public:
  Tomograph(int dim, RadialMeasure measure, int frequency = 1, double normalization = 1.0);

  int dim() const { return dim_; }
  const RadialMeasure& measure() const { return measure_; }
  int frequency() const { return k_; }
  double normalization() const { return normalization_; }
  /// 1 / (c k^n): the factor multiplying prod_i m(rho_i).
  double measure_scale() const;

  /// -(1/k) sum_i rho_i cos(k x_i + phi_i)
  PeriodicScalarField potential_at(const SParam& s) const;
  GraphLagrangian lagrangian_at(const SParam& s) const;

  /// Same measure, frequency multiplied by k.
  Tomograph homogenized(int k) const;
  /// Measure divided by the normalization constant, so that sigma(0) = 1.
  Tomograph normalized() const;

private:
  int dim_;
  RadialMeasure measure_;
  int k_;
  double normalization_;
};

/// |L_s cap L|, or tangent when some intersection has Jacobian below `jacobian_tol`.
/// Separable forms decouple into 1D counts; coupled forms (n = 2) use the cell scan.
RootCount intersection_count(const Tomograph& t, const SParam& s, const GraphLagrangian& l,
                             double jacobian_tol = 1e-8, int coupled_grid = 512);

struct CroftonOptions {
  int radial = 200;             // radial cells on [r0, r1] per factor
  int angular = 64;             // periodic trapezoid nodes per factor
  double jacobian_tol = 1e-8;
  double perturbation = 1e-7;   // rho offset for a tangent sample
  double max_tangent_fraction = 0.01;
  double jump_tol = 1e-10;      // width at which a count jump in rho is located
  int scan_grid = 0;            // 1D scan resolution; 0 = automatic
  // Coupled forms: Gauss-Legendre radial x trapezoid angular tensor in 2n dimensions.
  int coupled_radial = 8;
  int coupled_angular = 8;
  int coupled_grid = 128;
  int threads = 1;
  bool trace = false;
};

/// One quadrature piece. For separable forms each factor is integrated on its
/// own and `factor` names it; coupled forms record full samples with factor -1.
struct CroftonTraceRecord {
  int factor = 0;
  SParam s;
  double rho_hi = 0.0;  // piece [s.rho[factor], rho_hi] for separable forms
  long count = 0;
  double weight = 0.0;
};

struct CroftonResult {
  double value = 0.0;
  long samples = 0;         // primary count evaluations
  long tangent = 0;         // samples flagged tangent (then perturbed)
  long failed = 0;          // samples still tangent after perturbation
  double tangent_fraction = 0.0;
  bool ok = true;
  std::string message;
  std::vector<CroftonTraceRecord> trace;
};

/// I_T(L) = int_B |L_s cap L| ds.
CroftonResult crofton_integral(const Tomograph& t, const GraphLagrangian& l,
                               const CroftonOptions& opts = {});

/// Closed-form profile prod_i 2 M(|y_i|) / c; independent of the frequency.
double sigma(const Tomograph& t, const Vector& y);
/// (2 M(0))^n of the unnormalized measure.
double normalization_constant(const Tomograph& t);
/// I_T(T^n_y) in closed form: (2 pi)^n sigma(y).
double flat_crofton_closed_form(const Tomograph& t, const Vector& y);
/// int_{T^n} sigma(beta(x)) dx, the k -> infinity limit of I_{T_k}(graph beta).
double homogenized_limit(const Tomograph& t, const OneForm& beta, const QuadratureRule& quad);

/// Quadrature samples of B with weights of ds: Gauss-Legendre on [r0, r1] and
/// periodic trapezoid in phi, tensored over the n factors.
struct WeightedSample {
  SParam s;
  double weight = 0.0;
};
std::vector<WeightedSample> sample_parameter_space(const Tomograph& t, int radial, int angular);

}  // namespace lagtomo
