#include <algorithm>
#include <cmath>

#include "lagtomo/experiments.hpp"

namespace lagtomo {

Report run_homogenization(const ExperimentConfig& cfg) {
  const auto& hc = cfg.homogenize;
  Report rep("homogenize", {"k", "crofton", "limit", "gap", "relative_gap", "previous_gap", "decreasing",
                            "tangent_fraction", "pass"});
  const Tomograph base = cfg.tomograph.build();
  const int n = base.dim();
  const int res = n == 1 ? hc.limit_resolution : std::min(hc.limit_resolution, 1024);
  const double limit = homogenized_limit(base, hc.form, QuadratureRule::torus(n, res));
  // Gaps at this level are quadrature noise; the sequence has converged.
  const double floor = 1e-9 * std::max(1.0, std::fabs(limit));

  CroftonOptions opts;
  opts.radial = hc.radial;
  opts.angular = hc.angular;
  opts.threads = cfg.worker_threads();
  opts.trace = cfg.trace;
  const GraphLagrangian graph(hc.form);

  double previous = std::numeric_limits<double>::infinity();
  double last_rel = 0.0;
  for (std::size_t i = 0; i < hc.k_schedule.size(); ++i) {
    const int k = hc.k_schedule[i];
    const CroftonResult r = crofton_integral(base.homogenized(k), graph, opts);
    const double gap = std::fabs(r.value - limit);
    const double rel = limit != 0.0 ? gap / std::fabs(limit) : gap;
    const bool decreasing = gap < previous || gap <= floor;
    const bool pass = decreasing && r.ok;
    rep.add_row({static_cast<long>(k), r.value, limit, gap, rel, previous, decreasing, r.tangent_fraction, pass});
    if (i > 0 && std::isfinite(previous)) rep.record_margin(previous - gap);
    if (!decreasing) rep.fail("gap at k=" + std::to_string(k) + " did not decrease");
    if (!r.ok) rep.fail("k=" + std::to_string(k) + ": " + r.message);
    if (cfg.trace) rep.attach("homogenize_trace_k" + std::to_string(k) + ".csv", crofton_trace_csv(r, n));
    previous = gap;
    last_rel = rel;
  }
  rep.record_margin(hc.final_tolerance - last_rel);
  if (last_rel > hc.final_tolerance) {
    rep.fail("final relative gap " + format_double(last_rel) + " exceeds " + format_double(hc.final_tolerance));
  }
  return rep;
}

}  // namespace lagtomo
