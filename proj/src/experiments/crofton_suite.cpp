#include <algorithm>
#include <cmath>

#include "lagtomo/experiments.hpp"

namespace lagtomo {

namespace {

const std::vector<std::string> kColumns{"case", "n", "k", "y1", "y2", "lhs", "rhs", "error",
                                        "tolerance", "margin", "tangent_fraction", "pass"};

Vector make_y(int n, double y1, double y2) {
  Vector y(n);
  y(0) = y1;
  if (n == 2) y(1) = y2;
  return y;
}

// Flat-torus Crofton integral from the root count alone: each factor has 2k
// roots when |y_i| < rho_i and none otherwise, so
// I_{T_k}(T^n_y) = prod_i (2k * 2pi * M(|y_i|)) / (c k^n).
double flat_counting_form(const Tomograph& t, const Vector& y) {
  double v = t.measure_scale();
  for (int i = 0; i < t.dim(); ++i) {
    v *= 2.0 * t.frequency() * kTwoPi * t.measure().tail_mass(std::fabs(y(i)));
  }
  return v;
}

struct Comparison {
  double error;
  bool pass;
};

// Relative error against the closed form, absolute when the closed form vanishes.
Comparison compare(double lhs, double rhs, double tol) {
  const double err = rhs != 0.0 ? std::fabs(lhs - rhs) / std::fabs(rhs) : std::fabs(lhs);
  return {err, err <= tol};
}

void equality_row(Report& rep, const std::string& name, int n, int k, const Vector& y, double lhs,
                  double rhs, double tol, double tangent_fraction, bool crofton_ok = true,
                  const std::string& crofton_msg = "") {
  const Comparison c = compare(lhs, rhs, tol);
  const bool pass = c.pass && crofton_ok;
  rep.add_row({name, static_cast<long>(n), static_cast<long>(k), y(0), n == 2 ? y(1) : 0.0, lhs, rhs,
               c.error, tol, tol - c.error, tangent_fraction, pass});
  rep.record_margin(tol - c.error);
  if (!pass) {
    rep.fail(name + " at y=(" + format_double(y(0)) + (n == 2 ? "," + format_double(y(1)) : "") +
             "), k=" + std::to_string(k) + ": error " + format_double(c.error) +
             (crofton_ok ? "" : "; " + crofton_msg));
  }
}

}  // namespace

Report run_crofton_suite(const ExperimentConfig& cfg) {
  const auto& sc = cfg.crofton;
  Report rep("crofton", kColumns);
  const Tomograph base = cfg.tomograph.build();
  const int n = base.dim();
  CroftonOptions opts;
  opts.radial = sc.radial;
  opts.angular = sc.angular;
  opts.threads = cfg.worker_threads();
  opts.trace = cfg.trace;

  // Flat tori along the diagonal y = (t, ..., t).
  CroftonResult traced;
  for (int j = 0; j < sc.y_points; ++j) {
    const double yv = sc.y_max * j / (sc.y_points - 1);
    const Vector y = make_y(n, yv, yv);
    const CroftonResult r = crofton_integral(base, GraphLagrangian::flat(y), opts);
    equality_row(rep, "flat_crofton", n, base.frequency(), y, r.value, flat_crofton_closed_form(base, y),
                 sc.tolerance, r.tangent_fraction, r.ok, r.message);
    if (cfg.trace && j == 0) traced = r;
  }
  if (cfg.trace) rep.attach("crofton_trace.csv", crofton_trace_csv(traced, n));

  // Product structure in n = 2 at generic points.
  {
    const Tomograph t2(2, base.measure(), base.frequency(), 1.0);
    const Tomograph t1(1, base.measure(), base.frequency(), 1.0);
    const double pts[][2] = {{0.0, 0.0}, {0.3, 0.6}, {0.55, 0.55}, {0.7, 0.9}, {0.8, 0.2},
                             {0.1, 0.95}, {0.65, 0.4}, {0.45, 0.75}};
    const int count = std::min<int>(sc.product_points, static_cast<int>(std::size(pts)));
    for (int p = 0; p < count; ++p) {
      const double scale = sc.y_max;
      const Vector y = make_y(2, pts[p][0] * scale, pts[p][1] * scale);
      const CroftonResult r = crofton_integral(t2, GraphLagrangian::flat(y), opts);
      equality_row(rep, "product_crofton", 2, t2.frequency(), y, r.value, flat_crofton_closed_form(t2, y),
                   sc.tolerance, r.tangent_fraction, r.ok, r.message);
      // Closed form at equal |y_i| is the square of the n = 1 value.
      const Vector yy = make_y(2, y(0), -y(0));
      const double one = flat_crofton_closed_form(t1, make_y(1, y(0), 0.0));
      equality_row(rep, "product_square", 2, t2.frequency(), yy, flat_crofton_closed_form(t2, yy),
                   one * one, sc.closed_form_tolerance, 0.0);
    }
  }

  // sigma is nonincreasing in each |y_i| and maximal at 0.
  {
    const double top = 1.05 * base.measure().outer_radius();
    double worst_step = std::numeric_limits<double>::infinity();
    double worst_max = std::numeric_limits<double>::infinity();
    const double s0 = sigma(base, Vector::Zero(n));
    for (int axis = 0; axis < n; ++axis) {
      for (double sign : {1.0, -1.0}) {
        for (int j = 1; j < sc.sigma_sweep; ++j) {
          Vector y = Vector::Zero(n);
          y(axis) = sign * top * j / (sc.sigma_sweep - 1);
          if (n == 2) y(1 - axis) = 0.25 * top;  // off-axis slice
          const double s = sigma(base, y);
          Vector y_prev = y;
          y_prev(axis) = sign * top * (j - 1) / (sc.sigma_sweep - 1);
          worst_step = std::min(worst_step, sigma(base, y_prev) - s);
          worst_max = std::min(worst_max, s0 - s);
        }
      }
    }
    const bool mono = worst_step >= 0.0;
    const bool top_ok = worst_max >= 0.0;
    rep.add_row({std::string("sigma_nonincreasing"), static_cast<long>(n), 1L, 0.0, 0.0, worst_step, 0.0,
                 0.0, 0.0, worst_step, 0.0, mono});
    rep.add_row({std::string("sigma_max_at_zero"), static_cast<long>(n), 1L, 0.0, 0.0, worst_max, 0.0,
                 0.0, 0.0, worst_max, 0.0, top_ok});
    rep.record_margin(worst_step);
    rep.record_margin(worst_max);
    if (!mono) rep.fail("sigma increases somewhere along the sweep");
    if (!top_ok) rep.fail("sigma exceeds sigma(0) somewhere");
  }

  // Normalization: c = (2 M(0))^n = sigma(0) of the raw measure, and the
  // rescaled tomograph has sigma(0) = 1 exactly.
  {
    const Tomograph raw(n, base.measure(), 1, 1.0);
    const double c = normalization_constant(raw);
    const double s0 = sigma(raw, Vector::Zero(n));
    const bool exact_c = c == s0;
    rep.add_row({std::string("normalization_constant"), static_cast<long>(n), 1L, 0.0, 0.0, c, s0,
                 std::fabs(c - s0), 0.0, -std::fabs(c - s0), 0.0, exact_c});
    if (!exact_c) rep.fail("normalization constant differs from sigma(0)");
    const double one = sigma(raw.normalized(), Vector::Zero(n));
    const bool exact_one = one == 1.0;
    rep.add_row({std::string("normalized_sigma0"), static_cast<long>(n), 1L, 0.0, 0.0, one, 1.0,
                 std::fabs(one - 1.0), 0.0, -std::fabs(one - 1.0), 0.0, exact_one});
    if (!exact_one) rep.fail("normalized sigma(0) is not exactly 1");
  }

  // Flat tori: I_{T_k} = I_T, in closed form and through the counting path.
  for (int k : sc.k_values) {
    const Tomograph tk = base.homogenized(k);
    for (double frac : {0.0, 0.3, 0.75}) {
      const double yv = frac * base.measure().r1();
      const Vector y = make_y(n, yv, 0.5 * yv);
      equality_row(rep, "flat_invariance_closed", n, tk.frequency(), y, flat_counting_form(tk, y),
                   flat_counting_form(base, y), sc.closed_form_tolerance, 0.0);
      const CroftonResult rk = crofton_integral(tk, GraphLagrangian::flat(y), opts);
      const CroftonResult r1 = crofton_integral(base, GraphLagrangian::flat(y), opts);
      equality_row(rep, "flat_invariance_counting", n, tk.frequency(), y, rk.value, r1.value, sc.tolerance,
                   rk.tangent_fraction, rk.ok && r1.ok, rk.message + r1.message);
    }
  }

  // N(s) on T^n_y never exceeds N(s) on the zero section.
  {
    std::mt19937_64 rng(cfg.seed);
    const double big_r = base.measure().outer_radius();
    std::uniform_real_distribution<double> rho(0.0, big_r);
    std::uniform_real_distribution<double> phi(0.0, kTwoPi);
    std::uniform_real_distribution<double> yd(-1.2 * big_r, 1.2 * big_r);
    long violations = 0;
    long worst = std::numeric_limits<long>::max();
    long perturbed = 0;
    const auto counted = [&](const SParam& s0, const GraphLagrangian& l) {
      SParam s = s0;
      for (int attempt = 0; attempt < 8; ++attempt) {
        const RootCount rc = intersection_count(base, s, l);
        if (!rc.tangent) return rc.count;
        ++perturbed;
        for (int i = 0; i < n; ++i) s.rho[static_cast<std::size_t>(i)] += 1e-7;
      }
      return -1L;
    };
    const GraphLagrangian zero = GraphLagrangian::flat(Vector::Zero(n));
    long unresolved = 0;
    for (int p = 0; p < sc.max_at_zero_pairs; ++p) {
      SParam s;
      s.dim = n;
      Vector y(n);
      for (int i = 0; i < n; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        s.rho[ii] = rho(rng);
        s.phi[ii] = phi(rng);
        y(i) = yd(rng);
      }
      const long n0 = counted(s, zero);
      const long ny = counted(s, GraphLagrangian::flat(y));
      if (n0 < 0 || ny < 0) {
        ++unresolved;
        continue;
      }
      worst = std::min(worst, n0 - ny);
      if (ny > n0) ++violations;
    }
    const bool pass = violations == 0 && unresolved == 0;
    rep.add_row({std::string("max_at_zero"), static_cast<long>(n), 1L, 0.0, 0.0,
                 static_cast<long>(sc.max_at_zero_pairs - unresolved), violations, 0.0, 0.0,
                 static_cast<double>(worst), 0.0, pass});
    rep.record_margin(static_cast<double>(worst));
    if (!pass) {
      rep.fail("max-at-zero: " + std::to_string(violations) + " violations, " +
               std::to_string(unresolved) + " unresolved samples");
    }
    if (perturbed > 0) rep.note("max_at_zero: " + std::to_string(perturbed) + " tangent samples perturbed");
  }
  return rep;
}

}  // namespace lagtomo
