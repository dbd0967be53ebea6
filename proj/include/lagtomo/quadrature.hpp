// Tensor-product quadrature rules: periodic trapezoid on angular axes,
// Gauss-Legendre on bounded (radial) axes.
#pragma once

#include <vector>

#include "lagtomo/torus.hpp"

namespace lagtomo {

struct QuadratureAxis {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
  double weight_sum() const;
};

/// N equispaced nodes on [0, 2pi), weights 2pi/N.
QuadratureAxis periodic_trapezoid(int n, double offset = 0.0);
/// N-point Gauss-Legendre on [a, b].
QuadratureAxis gauss_legendre(int n, double a, double b);
/// Gauss-Legendre panels of `per_panel` points on each [breaks[i], breaks[i+1]].
QuadratureAxis composite_gauss_legendre(const std::vector<double>& breaks, int per_panel);

class QuadratureRule {
public:
  explicit QuadratureRule(std::vector<QuadratureAxis> axes);

  /// Periodic trapezoid with `resolution` nodes on every axis of T^n.
  static QuadratureRule torus(int dim, int resolution);

  int dim() const { return static_cast<int>(axes_.size()); }
  const QuadratureAxis& axis(int i) const { return axes_[static_cast<std::size_t>(i)]; }
  long long size() const;

  /// Calls fn(coords, weight) for every tensor node (row-major, axis 0 slowest).
  template <class Fn>
  void for_each(Fn&& fn) const {
    Coords x{};
    if (dim() == 1) {
      const auto& a = axes_[0];
      for (int i = 0; i < a.size(); ++i) {
        x[0] = a.nodes[static_cast<std::size_t>(i)];
        fn(x, a.weights[static_cast<std::size_t>(i)]);
      }
      return;
    }
    const auto& a = axes_[0];
    const auto& b = axes_[1];
    for (int i = 0; i < a.size(); ++i) {
      x[0] = a.nodes[static_cast<std::size_t>(i)];
      for (int j = 0; j < b.size(); ++j) {
        x[1] = b.nodes[static_cast<std::size_t>(j)];
        fn(x, a.weights[static_cast<std::size_t>(i)] * b.weights[static_cast<std::size_t>(j)]);
      }
    }
  }

  /// Sum of weight * fn(coords), accumulated row by row.
  template <class Fn>
  double integrate(Fn&& fn) const;

private:
  std::vector<QuadratureAxis> axes_;
};

}  // namespace lagtomo

#include "lagtomo/kernels.hpp"

namespace lagtomo {

template <class Fn>
double QuadratureRule::integrate(Fn&& fn) const {
  const auto& last = axes_.back();
  std::vector<double> values(last.nodes.size());
  if (dim() == 1) {
    Coords x{};
    for (int i = 0; i < last.size(); ++i) {
      x[0] = last.nodes[static_cast<std::size_t>(i)];
      values[static_cast<std::size_t>(i)] = fn(x);
    }
    return kernels::weighted_sum(values, last.weights);
  }
  const auto& first = axes_[0];
  double total = 0.0;
  Coords x{};
  for (int i = 0; i < first.size(); ++i) {
    x[0] = first.nodes[static_cast<std::size_t>(i)];
    for (int j = 0; j < last.size(); ++j) {
      x[1] = last.nodes[static_cast<std::size_t>(j)];
      values[static_cast<std::size_t>(j)] = fn(x);
    }
    total += first.weights[static_cast<std::size_t>(i)] * kernels::weighted_sum(values, last.weights);
  }
  return total;
}

}  // namespace lagtomo
