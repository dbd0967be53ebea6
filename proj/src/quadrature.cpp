#include "lagtomo/quadrature.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lagtomo {

double QuadratureAxis::weight_sum() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

QuadratureAxis periodic_trapezoid(int n, double offset) {
  if (n < 1) throw std::invalid_argument("periodic_trapezoid: need at least one node");
  QuadratureAxis ax;
  ax.nodes.resize(static_cast<std::size_t>(n));
  ax.weights.assign(static_cast<std::size_t>(n), kTwoPi / n);
  for (int j = 0; j < n; ++j) {
    ax.nodes[static_cast<std::size_t>(j)] = (j + offset) * kTwoPi / n;
  }
  return ax;
}

QuadratureAxis gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  if (!(b > a)) throw std::invalid_argument("gauss_legendre: empty interval");
  QuadratureAxis ax;
  ax.nodes.resize(static_cast<std::size_t>(n));
  ax.weights.resize(static_cast<std::size_t>(n));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    ax.nodes[static_cast<std::size_t>(i)] = mid - half * z;
    ax.nodes[static_cast<std::size_t>(n - 1 - i)] = mid + half * z;
    ax.weights[static_cast<std::size_t>(i)] = half * w;
    ax.weights[static_cast<std::size_t>(n - 1 - i)] = half * w;
  }
  return ax;
}

QuadratureAxis composite_gauss_legendre(const std::vector<double>& breaks, int per_panel) {
  if (breaks.size() < 2) throw std::invalid_argument("composite_gauss_legendre: need >= 2 breaks");
  QuadratureAxis ax;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    const auto panel = gauss_legendre(per_panel, breaks[i], breaks[i + 1]);
    ax.nodes.insert(ax.nodes.end(), panel.nodes.begin(), panel.nodes.end());
    ax.weights.insert(ax.weights.end(), panel.weights.begin(), panel.weights.end());
  }
  return ax;
}

QuadratureRule::QuadratureRule(std::vector<QuadratureAxis> axes) : axes_(std::move(axes)) {
  require_dim(static_cast<int>(axes_.size()));
  for (const auto& a : axes_) {
    if (a.nodes.empty() || a.nodes.size() != a.weights.size()) {
      throw std::invalid_argument("quadrature axis must have matching, non-empty nodes and weights");
    }
    for (double w : a.weights) {
      if (!(w > 0.0)) throw std::invalid_argument("quadrature weights must be positive");
    }
  }
}

QuadratureRule QuadratureRule::torus(int dim, int resolution) {
  require_dim(dim);
  std::vector<QuadratureAxis> axes(static_cast<std::size_t>(dim), periodic_trapezoid(resolution));
  return QuadratureRule(std::move(axes));
}

long long QuadratureRule::size() const {
  long long s = 1;
  for (const auto& a : axes_) s *= a.size();
  return s;
}

}  // namespace lagtomo
