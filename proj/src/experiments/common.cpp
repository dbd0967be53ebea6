#include <sstream>

#include "lagtomo/experiments.hpp"

namespace lagtomo {

PeriodicScalarField random_trig_field(int dim, std::mt19937_64& rng, int terms, int max_frequency) {
  require_dim(dim);
  if (max_frequency < 1) throw std::invalid_argument("random_trig_field: max_frequency must be >= 1");
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::uniform_int_distribution<int> freq(dim == 1 ? 1 : -max_frequency, max_frequency);
  std::vector<TrigTerm> out;
  for (int i = 0; i < terms; ++i) {
    TrigTerm t;
    t.amplitude = amp(rng);
    do {
      t.wave = {freq(rng), dim == 2 ? freq(rng) : 0};
    } while (t.wave[0] == 0 && t.wave[1] == 0);
    t.phase = phase(rng);
    out.push_back(t);
  }
  return PeriodicScalarField(dim, std::move(out));
}

std::string crofton_trace_csv(const CroftonResult& r, int dim) {
  std::ostringstream out;
  out << "factor";
  for (int i = 0; i < dim; ++i) out << ",rho" << i + 1 << ",phi" << i + 1;
  out << ",rho_hi,count,weight\n";
  for (const auto& rec : r.trace) {
    out << rec.factor;
    for (int i = 0; i < dim; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      if (i < rec.s.dim) {
        out << ',' << format_double(rec.s.rho[ii]) << ',' << format_double(rec.s.phi[ii]);
      } else {
        out << ",,";
      }
    }
    out << ',' << format_double(rec.rho_hi) << ',' << rec.count << ',' << format_double(rec.weight) << '\n';
  }
  return out.str();
}

PrerequisiteResult check_prerequisites(int threads) {
  ExperimentConfig cfg;
  cfg.threads = threads;
  PrerequisiteResult res;
  const Report crofton = run_crofton_suite(cfg);
  if (!crofton.pass()) {
    res.pass = false;
    for (const auto& f : crofton.failures()) res.failures.push_back("crofton: " + f);
  }
  const Report trace = run_theorem_proof_trace(cfg);
  if (!trace.pass()) {
    res.pass = false;
    for (const auto& f : trace.failures()) res.failures.push_back("proof-trace: " + f);
  }
  return res;
}

}  // namespace lagtomo
