#include "levyshrink/ar1.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "levyshrink/special.hpp"

namespace levyshrink {

void Ar1Noise::validate() const {
  if (p < 1) throw std::invalid_argument("Ar1Noise: p must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("Ar1Noise: alpha must lie in (0, 1)");
  if (!(std::abs(a) <= alpha)) {
    throw std::invalid_argument("Ar1Noise: |a| = " + std::to_string(std::abs(a)) + " exceeds alpha");
  }
}

Matrix ar1_covariance(double a, int p) {
  if (!(std::abs(a) < 1.0)) throw std::domain_error("ar1_covariance: |a| must be < 1");
  if (p < 1) throw std::domain_error("ar1_covariance: p must be >= 1");
  Matrix d(p, p);
  const double scale = 1.0 / (1.0 - a * a);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) d(i, j) = std::pow(a, std::abs(i - j)) * scale;
  return d;
}

Vector simulate_ar1(const Ar1Noise& noise, Engine& rng) {
  noise.validate();
  double prev = standard_normal(rng) / std::sqrt(1.0 - noise.a * noise.a);
  Vector xi(noise.p);
  for (int k = 0; k < noise.p; ++k) {
    prev = noise.a * prev + standard_normal(rng);
    xi[k] = prev;
  }
  return xi;
}

double lambda_max_bound(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::domain_error("lambda_max_bound: alpha must lie in [0, 1)");
  return 1.0 / ((1.0 - alpha) * (1.0 - alpha));
}

Vector improved_estimate_prop41(const Vector& y, int p, double alpha, double gamma_p) {
  const double bound = lambda_max_bound(alpha);
  if (!(p > bound)) {
    throw std::domain_error("improved_estimate_prop41: needs p > 1/(1-alpha)^2 = " + std::to_string(bound));
  }
  return shrink_estimate(y, (p - bound) * gamma_p);
}

Ar1EigenSweep eigen_sweep(int p, double alpha, int points) {
  if (points < 2) throw std::invalid_argument("eigen_sweep: points must be >= 2");
  Ar1EigenSweep out;
  out.lambda_bound = lambda_max_bound(alpha);
  out.gap_bound = p - out.lambda_bound;
  out.min_trace_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < points; ++k) {
    const double a = -alpha + 2.0 * alpha * k / (points - 1);
    const Matrix d = ar1_covariance(a, p);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(d, Eigen::EigenvaluesOnly);
    const double lmax = solver.eigenvalues().maxCoeff();
    out.max_lambda_max = std::max(out.max_lambda_max, lmax);
    out.min_trace_gap = std::min(out.min_trace_gap, d.trace() - lmax);
  }
  out.pass = out.max_lambda_max <= out.lambda_bound && out.min_trace_gap >= out.gap_bound;
  return out;
}

Prop41Report mc_risk_prop41(const Ar1Noise& noise, double d, const std::vector<Vector>& grid,
                            std::uint64_t trials, std::uint64_t seed, Execution exec) {
  noise.validate();
  Prop41Report report;
  report.a_star = lambda_max_bound(noise.alpha);
  if (!(noise.p > report.a_star)) {
    throw std::domain_error("mc_risk_prop41: needs p > 1/(1-alpha)^2");
  }
  report.gamma_p = gamma_p_quadrature(GammaPInputs(noise.p, d, report.a_star));
  report.c = (noise.p - report.a_star) * report.gamma_p;
  report.bound = -report.c * report.c;
  const NoiseDraw draw = [noise](Engine& rng) { return simulate_ar1(noise, rng); };
  report.sweep = paired_delta_sweep(draw, report.c, grid, d, trials, seed, exec);
  return report;
}

}  // namespace levyshrink
