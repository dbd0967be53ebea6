#include <algorithm>
#include <cmath>

#include "lagtomo/experiments.hpp"
#include "lagtomo/parallel.hpp"

namespace lagtomo {

namespace {

const std::vector<std::string> kColumns{"case", "index", "a1", "a2", "a3", "a4", "a5",
                                        "lhs", "rhs", "margin", "pass"};

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SampleInfo {
  bool kept = false;        // in B'
  bool degenerate = false;
  long count = 0;           // N(s) = |L_s cap L|
  double shortest = kInf;
  Barcode bars;             // noise-filtered barcode of F_s - f
};

struct Analysis {
  std::vector<SampleInfo> info;
  long kept = 0;
  long degenerate = 0;
  double beta = kInf;
};

bool resolved(const BarcodeResult& br, long count, long h) { return 2 * br.barcode.total() - h == count; }

int n_max_resolution(int dim, int base) { return std::max(base, dim == 1 ? 1 << 15 : 1024); }

// N(s), nudging rho off a tangency the same way the Crofton integral does.
RootCount robust_count(const Tomograph& t, SParam s, const GraphLagrangian& l) {
  RootCount rc;
  for (int attempt = 0; attempt < 8; ++attempt) {
    rc = intersection_count(t, s, l);
    if (!rc.tangent) return rc;
    for (int i = 0; i < s.dim; ++i) s.rho[static_cast<std::size_t>(i)] += 1e-7;
  }
  return rc;
}

Analysis analyze(const Tomograph& t, const PeriodicScalarField& f, const std::vector<WeightedSample>& b,
                 const ProofTraceConfig& pc, int threads) {
  const long h = t.dim() == 1 ? 2 : 4;
  const GraphLagrangian l(OneForm::exact(f));
  Analysis a;
  a.info.resize(b.size());
  parallel_for(static_cast<long>(b.size()), threads, [&](long i) {
    const SParam& s = b[static_cast<std::size_t>(i)].s;
    SampleInfo& out = a.info[static_cast<std::size_t>(i)];
    // B' drops samples near the tangency locus Sigma.
    const RootCount strict = intersection_count(t, s, l, pc.strict_jacobian_tol);
    if (strict.tangent) return;
    out.kept = true;
    out.count = strict.count;
    // A genuine pair shorter than the grid noise floor is dropped with the
    // noise; N(s) exposes that, and a finer grid usually resolves it.
    const PeriodicScalarField diff = t.potential_at(s) - f;
    const int max_res = n_max_resolution(diff.dim(), pc.barcode_resolution);
    BarcodeResult br = barcode(diff, pc.barcode_resolution);
    for (int res = pc.barcode_resolution; !br.degenerate() && resolved(br, strict.count, h) == false && res < max_res;) {
      res *= 4;
      br = barcode(diff, res);
    }
    out.degenerate = br.degenerate() || !resolved(br, strict.count, h);
    out.bars = br.barcode;
    out.shortest = br.barcode.shortest();
  });
  for (const auto& s : a.info) {
    if (!s.kept) continue;
    ++a.kept;
    if (s.degenerate) {
      ++a.degenerate;
      continue;
    }
    a.beta = std::min(a.beta, s.shortest);
  }
  return a;
}

}  // namespace

ProofTraceOutcome run_theorem_proof_trace_detailed(const ExperimentConfig& cfg) {
  const auto& pc = cfg.proof_trace;
  ProofTraceOutcome out;
  Report& rep = out.report;
  rep = Report("proof-trace", kColumns);
  const Tomograph t = cfg.tomograph.build();
  const int n = t.dim();
  const long h = n == 1 ? 2 : 4;  // total Betti number of T^n
  const PeriodicScalarField f = pc.base ? *pc.base : PeriodicScalarField::zero(n);
  const int threads = cfg.worker_threads();

  const auto b = sample_parameter_space(t, pc.radial, pc.angular);
  const Analysis a = analyze(t, f, b, pc, threads);
  out.samples = static_cast<long>(b.size());
  out.b_prime = a.kept;
  out.degenerate = a.degenerate;
  out.shortest_bar = a.beta;
  rep.add_row({std::string("b_prime"), 0L, static_cast<double>(out.samples), static_cast<double>(a.kept),
               static_cast<double>(a.degenerate), 0.0, 0.0, static_cast<double>(a.kept), 0.0,
               static_cast<double>(a.kept), a.kept > 0});
  if (a.kept == 0) rep.fail("B' is empty");

  // DEGENERATE barcodes are excluded; there must be few of them.
  const double allowed_degenerate = pc.max_degenerate_fraction * static_cast<double>(a.kept);
  const bool degenerate_ok = static_cast<double>(a.degenerate) < allowed_degenerate || a.degenerate == 0;
  rep.add_row({std::string("degenerate"), 0L, static_cast<double>(a.degenerate), 0.0, 0.0, 0.0, 0.0,
               static_cast<double>(a.degenerate), allowed_degenerate,
               allowed_degenerate - static_cast<double>(a.degenerate), degenerate_ok});
  if (!degenerate_ok) rep.fail(std::to_string(a.degenerate) + " DEGENERATE barcodes in B'");

  // beta and its stability under doubled sampling.
  const auto b2 = sample_parameter_space(t, 2 * pc.radial, 2 * pc.angular);
  const Analysis a2 = analyze(t, f, b2, pc, threads);
  out.shortest_bar_doubled = a2.beta;
  double change = 0.0;
  if (std::isinf(a.beta) || std::isinf(a2.beta)) {
    change = std::isinf(a.beta) && std::isinf(a2.beta) ? 0.0 : kInf;
  } else {
    change = std::fabs(a2.beta - a.beta) / a.beta;
  }
  out.shortest_bar_stable = a.beta > 0.0 && change <= pc.stability_tolerance;
  rep.add_row({std::string("beta"), 0L, a.beta, a2.beta, change, 0.0, 0.0, change, pc.stability_tolerance,
               pc.stability_tolerance - change, out.shortest_bar_stable});
  rep.record_margin(pc.stability_tolerance - change);
  if (!out.shortest_bar_stable) {
    rep.fail("shortest bar " + format_double(a.beta) + " vs " + format_double(a2.beta) + " under doubled sampling");
  }
  if (std::isinf(a.beta)) rep.note("every B' barcode has only infinite bars; beta is infinite");

  // eps + delta < beta.
  double eps = pc.epsilon;
  double delta = pc.delta;
  if (!(eps + delta < a.beta)) {
    const double s = 0.9 * a.beta / (eps + delta);
    eps *= s;
    delta *= s;
    rep.note("epsilon and delta scaled by " + format_double(s) + " to fit under beta");
  }
  out.epsilon = eps;
  out.delta = delta;

  // N(s) = 2 b_{eps+delta} - h on every non-degenerate s in B'.
  long checked = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const SampleInfo& s = a.info[i];
    if (!s.kept || s.degenerate) continue;
    ++checked;
    const long rhs = 2 * bar_count(s.bars, eps + delta) - h;
    if (s.count != rhs) {
      ++out.identity_failures;
      if (out.identity_failures <= 5) {
        rep.add_row({std::string("identity_violation"), static_cast<long>(i), 0.0, 0.0, 0.0, 0.0, 0.0,
                     static_cast<double>(s.count), static_cast<double>(rhs),
                     -std::fabs(static_cast<double>(s.count - rhs)), false});
      }
    }
  }
  rep.add_row({std::string("identity"), 0L, static_cast<double>(checked), eps, delta, 0.0, 0.0,
               static_cast<double>(checked - out.identity_failures), static_cast<double>(checked),
               -static_cast<double>(out.identity_failures), out.identity_failures == 0});
  if (out.identity_failures > 0) {
    rep.fail(std::to_string(out.identity_failures) + " B' samples violate N = 2 b_{eps+delta} - h");
  }

  // The inequality chain against L~ = graph d(f + w), sup |w| < delta / 2. All
  // integrals use the B quadrature, where each line holds sample by sample:
  //   A1 = int_B N~ >= A2 = int_B'' N~ >= A3 = int_B'' (2 b_eps(F_s - f - w) - h)
  //      >= A4 = int_B'' (2 b_{eps+delta}(F_s - f) - h) = A5 = int_B'' N = I_T(L) - eta
  // with B'' the non-degenerate part of B' and eta = int_{B \ B''} N.
  const GraphLagrangian l(OneForm::exact(f));
  const auto inside = [&](std::size_t i) { return a.info[i].kept && !a.info[i].degenerate; };
  std::vector<long> n_outside(b.size(), 0);
  parallel_for(static_cast<long>(b.size()), threads, [&](long i) {
    const auto ii = static_cast<std::size_t>(i);
    if (!a.info[ii].kept) n_outside[ii] = robust_count(t, b[ii].s, l).count;
  });
  double a4 = 0.0;
  double a5 = 0.0;
  double eta = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double w = b[i].weight;
    if (inside(i)) {
      a4 += w * static_cast<double>(2 * bar_count(a.info[i].bars, eps + delta) - h);
      a5 += w * static_cast<double>(a.info[i].count);
    } else {
      eta += w * static_cast<double>(a.info[i].kept ? a.info[i].count : n_outside[i]);
    }
  }
  const double i_l = a5 + eta;
  rep.add_row({std::string("eta"), 0L, i_l, a5, eta, 0.0, 0.0, i_l - eta, a5, 0.0, true});

  std::mt19937_64 rng(cfg.seed);
  for (int p = 0; p < pc.perturbations; ++p) {
    PeriodicScalarField w = random_trig_field(n, rng, pc.terms, pc.max_frequency);
    w = w.scaled(0.45 * delta / sup_norm(w, n == 1 ? 4096 : 256));
    const PeriodicScalarField g = f + w;
    const GraphLagrangian lt(OneForm::exact(g));
    std::vector<long> n_tilde(b.size(), 0);
    std::vector<long> b_eps(b.size(), 0);
    parallel_for(static_cast<long>(b.size()), threads, [&](long i) {
      const auto ii = static_cast<std::size_t>(i);
      n_tilde[ii] = robust_count(t, b[ii].s, lt).count;
      if (!inside(ii)) return;
      const Barcode raw = FilteredTorusComplex(t.potential_at(b[ii].s) - g, pc.barcode_resolution).persistence();
      b_eps[ii] = 2 * bar_count(raw, eps) - h;
    });
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    long broken = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      a1 += b[i].weight * static_cast<double>(n_tilde[i]);
      if (!inside(i)) continue;
      a2 += b[i].weight * static_cast<double>(n_tilde[i]);
      a3 += b[i].weight * static_cast<double>(b_eps[i]);
      const long line4 = 2 * bar_count(a.info[i].bars, eps + delta) - h;
      if (n_tilde[i] < b_eps[i] || b_eps[i] < line4 || line4 != a.info[i].count) ++broken;
    }
    const double rhs = i_l - eta;
    const bool pass = broken == 0 && a1 >= rhs;
    ++out.chain_runs;
    if (pass) ++out.chain_passes;
    rep.add_row({std::string("chain"), static_cast<long>(p), a1, a2, a3, a4, a5, a1, rhs, a1 - rhs, pass});
    rep.record_margin(a1 - rhs);
    if (broken > 0) rep.fail("perturbation " + std::to_string(p) + ": chain broken on " + std::to_string(broken) + " samples");
    if (a1 < rhs) {
      rep.fail("perturbation " + std::to_string(p) + ": I_T(L~) = " + format_double(a1) + " below I_T(L) - eta = " +
               format_double(rhs));
    }
  }
  return out;
}

Report run_theorem_proof_trace(const ExperimentConfig& cfg) {
  return run_theorem_proof_trace_detailed(cfg).report;
}

}  // namespace lagtomo
