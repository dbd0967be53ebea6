// Sublevel-set persistence of periodic fields on a cubical grid of T^n, over Z/2.
//
// For exact graphs L = graph(df), L' = graph(dg), intersections are critical
// points of g - f and the action filtration is its value, so the barcode of the
// pair is the (degree-pooled) persistence barcode of g - f.
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "lagtomo/torus.hpp"

namespace lagtomo {

struct Bar {
  double birth = 0.0;
  double death = std::numeric_limits<double>::infinity();
  int degree = 0;

  bool infinite() const { return death == std::numeric_limits<double>::infinity(); }
  double length() const { return death - birth; }
};

class Barcode {
public:
  Barcode() = default;
  Barcode(int dim, std::vector<Bar> bars);

  int dim() const { return dim_; }
  const std::vector<Bar>& bars() const { return bars_; }
  long total() const { return static_cast<long>(bars_.size()); }
  long infinite_count() const;
  long finite_count() const { return total() - infinite_count(); }
  /// Sorted lengths; infinite bars last.
  std::vector<double> lengths() const;
  /// Shortest bar length; infinity when every bar is infinite.
  double shortest() const;
  double longest_finite() const;

private:
  int dim_ = 1;
  std::vector<Bar> bars_;
};

/// b_eps: bars longer than eps, infinite bars included.
long bar_count(const Barcode& b, double eps);

/// Periodic cubical grid with the lower-star filtration of sampled vertex values.
/// Cells are ordered by (value, dimension, index).
class FilteredTorusComplex {
public:
  FilteredTorusComplex(const PeriodicScalarField& f, int resolution, double offset = 0.0);
  FilteredTorusComplex(int dim, int resolution, std::vector<double> vertex_values);

  int dim() const { return dim_; }
  int resolution() const { return n_; }
  long cell_count(int d) const;
  double value(int d, long index) const;
  /// Codimension-one faces of a cell (vertices of an edge, edges of a square).
  std::vector<long> faces(int d, long index) const;
  /// Every face has value <= its cell.
  bool filtration_monotone() const;

  Barcode persistence() const;

private:
  Barcode persistence_1d() const;
  Barcode persistence_2d() const;

  int dim_;
  int n_;
  std::vector<double> v_;
};

enum class BarcodeStatus { Ok, Degenerate };

struct BarcodeResult {
  BarcodeStatus status = BarcodeStatus::Ok;
  Barcode barcode;           // grid-noise bars removed
  double noise_floor = 0.0;  // grid interpolation error bound tau
  double tolerance = 0.0;    // 2 tau
  long removed = 0;          // bars of length <= tau dropped as grid noise
  std::string reason;

  bool degenerate() const { return status == BarcodeStatus::Degenerate; }
};

/// Barcode of f sampled at resolution^n. The cubical lower-star complex creates
/// spurious pairs of length O(h^2) next to critical points; bars no longer than
/// the interpolation error tau are dropped as grid noise. DEGENERATE when the
/// grid oscillation is <= 2 tau or a bar falls in (tau, 2 tau], where a genuine
/// pair cannot be told apart from noise.
BarcodeResult barcode(const PeriodicScalarField& f, int resolution, double offset = 0.0);

struct BarIdentityReport {
  BarcodeStatus status = BarcodeStatus::Ok;
  long bars = 0;               // b
  long infinite_bars = 0;
  long crit_from_barcode = 0;  // 2 #finite + #infinite
  long two_b_minus_h = 0;      // 2b - 2^n
  long crit_independent = 0;   // zeros of grad f by root isolation
  bool independent_tangent = false;
  bool identity_holds = false;    // crit_independent == 2b - 2^n == crit_from_barcode
  bool inequality_holds = false;  // crit_independent >= 2 b_eps - 2^n on the sweep
  int sweep_points = 0;
};

BarIdentityReport verify_bar_identity(const PeriodicScalarField& f, int resolution, int sweep = 50,
                                      int crit_grid = 0);

struct StabilityReport {
  bool precondition_met = false;  // sup |f - g| < delta / 2
  double sup_distance = 0.0;
  long lhs = 0;  // b_eps(g)
  long rhs = 0;  // b_{eps + delta}(f)
  bool pass = false;  // precondition met and lhs >= rhs
  double margin() const { return static_cast<double>(lhs - rhs); }
};

StabilityReport stability_count_check(const PeriodicScalarField& f, const PeriodicScalarField& g,
                                      double eps, double delta, int resolution);

/// "length,is_infinite" rows, lengths in ascending order.
std::string barcode_csv(const Barcode& b);

}  // namespace lagtomo
