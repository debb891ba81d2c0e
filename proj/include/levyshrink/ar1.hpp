#pragma once

// Gaussian AR(1) noise xi_k = a xi_{k-1} + eps_k with |a| <= alpha < 1.

#include <cstdint>
#include <vector>

#include "levyshrink/condgauss.hpp"

namespace levyshrink {

struct Ar1Noise {
  double a = 0.0;
  double alpha = 0.5;
  int p = 2;

  void validate() const;
};

/// D(a)_{ij} = a^{|i-j|} / (1 - a^2); std::domain_error for |a| >= 1.
Matrix ar1_covariance(double a, int p);

/// Stationary start xi_0 ~ N(0, 1/(1 - a^2)), then p recursion steps;
/// returns (xi_1, ..., xi_p).
Vector simulate_ar1(const Ar1Noise& noise, Engine& rng);

/// 1 / (1 - alpha)^2, an upper bound on lambda_max(D(a)) over |a| <= alpha.
double lambda_max_bound(double alpha);

/// Shrinkage with c = (p - 1/(1 - alpha)^2) gamma_p. Requires p > 1/(1 - alpha)^2.
Vector improved_estimate_prop41(const Vector& y, int p, double alpha, double gamma_p);

struct Ar1EigenSweep {
  double max_lambda_max = 0.0;
  double min_trace_gap = 0.0;  // min over a of tr D(a) - lambda_max(D(a))
  double lambda_bound = 0.0;   // 1/(1 - alpha)^2
  double gap_bound = 0.0;      // p - 1/(1 - alpha)^2
  bool pass = false;
};

/// Eigen-solves D(a) at `points` equally spaced a in [-alpha, alpha].
Ar1EigenSweep eigen_sweep(int p, double alpha, int points);

struct Prop41Report {
  double a_star = 0.0;
  double gamma_p = 0.0;
  double c = 0.0;
  double bound = 0.0;  // -c^2
  DeltaSweep sweep;
};

/// Paired LSE / improved-estimator risks with noise from simulate_ar1 at the
/// true a; gamma_p uses a* = 1/(1 - alpha)^2 and radius d.
Prop41Report mc_risk_prop41(const Ar1Noise& noise, double d, const std::vector<Vector>& grid,
                            std::uint64_t trials, std::uint64_t seed,
                            Execution exec = Execution::Parallel);

}  // namespace levyshrink
