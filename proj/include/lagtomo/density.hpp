// n-densities on T^n x R^n: the metric density, translation-invariant
// densities sigma(y)|dx|, and the pull-backs/push-forwards used by the
// homogenization argument.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lagtomo/quadrature.hpp"
#include "lagtomo/torus.hpp"

namespace lagtomo {

/// n tangent vectors v_i = (w_i, u_i) at (x, y). Row i of `w` is w_i, row i of `u` is u_i.
struct Frame {
  TorusPoint x;
  Vector y;
  Matrix w;
  Matrix u;

  int dim() const { return x.dim(); }

  /// Frame (e_i, d beta/d x_i) of graph(beta) over x.
  static Frame on_graph(const OneForm& beta, const Coords& x);
  /// Horizontal coordinate frame at (x, y).
  static Frame horizontal(const TorusPoint& x, const Vector& y);

  /// v'_j = sum_i a(i, j) v_i
  Frame reparametrized(const Matrix& a) const;

  /// [x..., y..., w row-major..., u row-major...]
  std::vector<double> to_array() const;
  static Frame from_array(int dim, std::span<const double> data);
};

/// sigma(y) = scale * prod_i factor(|y_i|).
class Profile {
public:
  enum class Kind { Constant, PiecewiseLinear, Custom };

  static Profile constant(double c);
  /// Linear interpolation in |y_i| through the table, end values held outside it.
  static Profile piecewise_linear(std::vector<double> breakpoints, std::vector<double> values);
  static Profile custom(std::string tag, std::function<double(double)> factor, double scale = 1.0);

  double operator()(const Vector& y) const;
  double factor(double t) const;
  Profile scaled(double s) const;

  Kind kind() const { return kind_; }
  const std::string& tag() const { return tag_; }
  double scale() const { return scale_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }

private:
  Kind kind_ = Kind::Constant;
  std::string tag_ = "constant";
  double scale_ = 1.0;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::function<double(double)> custom_;
};

enum class DensityKind { Metric, InvariantProfile, PulledBack };

class Density {
public:
  using Evaluator = std::function<double(const Frame&)>;

  static Density metric();
  static Density invariant(Profile sigma);
  /// A derived density; `translation_invariant` records independence of x.
  static Density pulled_back(Evaluator eval, bool translation_invariant);

  double operator()(const Frame& fr) const { return eval_(fr); }

  DensityKind kind() const { return kind_; }
  bool translation_invariant() const { return invariant_; }
  const std::optional<Profile>& profile() const { return profile_; }

private:
  Density(DensityKind kind, Evaluator eval, bool invariant, std::optional<Profile> profile);

  DensityKind kind_;
  Evaluator eval_;
  bool invariant_;
  std::optional<Profile> profile_;
};

/// sqrt(det(W W^T + U U^T)); the volume of the parallelepiped spanned by the frame.
double metric_density_eval(const Frame& fr);
/// sigma(y) |det W|
double invariant_density_eval(const Profile& sigma, const Frame& fr);

/// Frequency k of the vertical rescaling (w, u) -> (w, u/k); k = infinity drops u.
struct VerticalScale {
  int k = 1;
  bool infinite = false;

  static VerticalScale finite(int k);
  static VerticalScale infinity() { return VerticalScale{0, true}; }
};

/// (P_k^* d)(v) = d(P_k v). At k = infinity the pull-back of an invariant
/// (metric or profile) density is returned as an invariant-profile density.
Density vertical_pullback(const Density& d, VerticalScale scale);

/// (F_k^* d) at (x, y) on (w, u) = d at (kx, y) on (kw, u).
Density covering_pullback(const Density& d, int k);
/// Sum over the k^n preimages (x + 2 pi j)/k of d on (w/k, u). Translation-invariant d only.
Density covering_pushforward(const Density& d, int k);

/// |d(v A) - |det A| d(v)|
double check_homogeneity(const Density& d, const Frame& fr, const Matrix& a);

struct ScalingLemmaResidual {
  double pull_push = 0.0;  // max |F_k^* F_k* d - k^n d|
  double push_pull = 0.0;  // max |F_k* F_k^* d - k^n d|
  double vertical = 0.0;   // max |k^-n F_k^* d - P_k^* d|
  double worst() const;
};

/// Evaluates the covering identities for sigma(y)|dx| on `samples` random frames.
ScalingLemmaResidual scaling_lemma_check(const Profile& sigma, int dim, int k, int samples,
                                         std::uint64_t seed);

/// int_{T^n} d(frame of graph(beta) at x) dx
double integrate_density_over_graph(const Density& d, const OneForm& beta,
                                    const QuadratureRule& quad);

/// Random frame with entries in [-scale, scale] and heights in [-height, height].
Frame random_frame(int dim, std::mt19937_64& rng, double scale = 1.0, double height = 1.0);

}  // namespace lagtomo
