// The named verification experiments. Each returns a Report whose rows carry
// both sides of every asserted relation and its margin.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "lagtomo/config.hpp"
#include "lagtomo/persistence.hpp"
#include "lagtomo/report.hpp"
#include "lagtomo/tomograph.hpp"

namespace lagtomo {

Report run_crofton_suite(const ExperimentConfig& cfg);
Report run_homogenization(const ExperimentConfig& cfg);
Report run_volume_bound(const ExperimentConfig& cfg);
Report run_semicontinuity(const ExperimentConfig& cfg);
Report run_barcode(const ExperimentConfig& cfg);

struct ProofTraceOutcome {
  long samples = 0;           // |B|
  long b_prime = 0;           // |B'|
  long degenerate = 0;        // DEGENERATE barcodes among B'
  double shortest_bar = 0.0;  // beta, min over B'
  double shortest_bar_doubled = 0.0;
  bool shortest_bar_stable = false;
  double epsilon = 0.0;
  double delta = 0.0;
  long identity_failures = 0;  // s in B' with N(s) != 2 b_{eps+delta} - h
  int chain_passes = 0;
  int chain_runs = 0;
  Report report{"proof-trace", {}};
};

ProofTraceOutcome run_theorem_proof_trace_detailed(const ExperimentConfig& cfg);
Report run_theorem_proof_trace(const ExperimentConfig& cfg);

/// The crofton suite and proof trace on the default configuration; other
/// experiments are only meaningful once these pass.
struct PrerequisiteResult {
  bool pass = true;
  std::vector<std::string> failures;
};
PrerequisiteResult check_prerequisites(int threads);

/// sum of `terms` terms a cos(<m, x> + theta) with |a| <= 1, 1 <= |m|_inf <= max_frequency.
PeriodicScalarField random_trig_field(int dim, std::mt19937_64& rng, int terms, int max_frequency);

/// "factor,rho,rho_hi,phi,...,count,weight" rows of a Crofton trace.
std::string crofton_trace_csv(const CroftonResult& r, int dim);

}  // namespace lagtomo
