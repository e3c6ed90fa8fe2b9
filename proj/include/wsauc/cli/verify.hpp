#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wsauc::cli {

struct SuiteResult {
  std::string name;
  bool passed = true;
  int draws = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::string counterexample;  // first failing draw
};

// Each suite is deterministic in its seed. `b_offset` shifts the b
// coefficient used when checking the contaminated-risk identities, which
// must then fail.
SuiteResult verify_contaminated_identity(int draws, std::uint64_t seed, double b_offset = 0.0);
SuiteResult verify_argmin_invariance(int grids, int candidates, std::uint64_t seed);
SuiteResult verify_pu_decomposition(int draws, std::uint64_t seed);
SuiteResult verify_noisy_ssl_recovery(int draws_per_cell, std::uint64_t seed, double b_offset = 0.0);
SuiteResult verify_trim_equivalence(int draws, std::uint64_t seed);
SuiteResult verify_gamma_formula(int draws, std::uint64_t seed);
SuiteResult verify_pair_risk(int draws, std::uint64_t seed);
SuiteResult verify_metrics(int draws, std::uint64_t seed);
SuiteResult verify_mixture_coefficients(int draws, std::uint64_t seed);

std::vector<SuiteResult> run_all_suites(std::uint64_t seed, double b_offset = 0.0);

std::string summary_line(const SuiteResult& r);

}  // namespace wsauc::cli
