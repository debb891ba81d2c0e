#pragma once

// Experiment runners behind the CLI subcommands. Each returns a Table whose
// CSV form depends only on the configuration, never on the worker count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levyshrink/config.hpp"
#include "levyshrink/oulevy.hpp"
#include "levyshrink/report.hpp"
#include "levyshrink/trials.hpp"

namespace levyshrink {

struct CheckRow {
  std::string check;
  std::string label;
  double estimate = 0.0;
  double half_width = 0.0;
  double reference = 0.0;
  bool pass = false;
};

/// Unconditional E I_n(phi_i) I_n(phi_j) against rho* tau (all i, j), and
/// E I_n(phi_j)^2 against 3 rho* n.
std::vector<CheckRow> verify_second_moments(const TrigBasis& basis, const NoiseParams& params,
                                            int n, double step, std::uint64_t paths,
                                            std::uint64_t seed, Execution exec);

/// With the jump times of `jumps` frozen (marks redrawn per path): E(I_n(phi_j) | G) against 0 and the sample second
/// moments of zeta(n) against conditional_covariance.
std::vector<CheckRow> verify_conditional_moments(const TrigBasis& basis, const NoiseParams& params,
                                                 const JumpRecord& jumps, int n, double step,
                                                 std::uint64_t paths, std::uint64_t seed,
                                                 Execution exec);

struct MinEigenvalueSweep {
  std::uint64_t samples = 0;
  std::uint64_t failures = 0;
  double min_eigenvalue = 0.0;
  double threshold = 0.0;
  std::uint64_t worst_sample = 0;
  JumpRecord worst_jumps;
};

/// check_lemma_54 on `samples` jump records drawn from substreams of `seed`.
MinEigenvalueSweep sweep_min_eigenvalue(const TrigBasis& basis, const NoiseParams& params, int n,
                            std::uint64_t samples, std::uint64_t seed, Execution exec);

/// Jump record frozen by verify-appendix for a given seed.
JumpRecord frozen_jumps(const NoiseParams& params, int n, std::uint64_t seed);

Table cmd_figure1(const ExperimentConfig& cfg, Execution exec = Execution::Parallel);
std::string figure1_svg(const ExperimentConfig& cfg);
Table cmd_gamma_p(const ExperimentConfig& cfg);
Table cmd_risk_cond_gauss(const ExperimentConfig& cfg, Execution exec = Execution::Parallel);
Table cmd_risk_ou(const ExperimentConfig& cfg, Execution exec = Execution::Parallel);
Table cmd_risk_ar1(const ExperimentConfig& cfg, Execution exec = Execution::Parallel);
Table cmd_verify_appendix(const ExperimentConfig& cfg, Execution exec = Execution::Parallel);

}  // namespace levyshrink
