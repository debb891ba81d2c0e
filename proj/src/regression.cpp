#include "levyshrink/regression.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "levyshrink/special.hpp"

namespace levyshrink {

void RegressionExperiment::validate() const {
  if (p() < 2) throw std::invalid_argument("RegressionExperiment: p must be >= 2");
  if (theta.size() != p()) throw std::invalid_argument("RegressionExperiment: theta has the wrong dimension");
  if (n < 1) throw std::invalid_argument("RegressionExperiment: n must be >= 1");
  if (!(d > 0.0)) throw std::invalid_argument("RegressionExperiment: d must be > 0");
  if (theta.norm() > d * (1.0 + 1e-12)) throw std::invalid_argument("RegressionExperiment: |theta| exceeds d");
  noise.validate();
}

Vector lse(const SimulatedPath& path, const TrigBasis& basis, const Vector& theta, int n) {
  if (theta.size() != basis.size()) throw std::invalid_argument("lse: theta has the wrong dimension");
  Vector out(basis.size());
  for (int j = 0; j < basis.size(); ++j) {
    out[j] = theta[j] + stochastic_integral(path, basis.function(j)) / n;
  }
  return out;
}

Vector improved_estimate_thm31(const Vector& theta_hat, int p, int n, double rho1, double gamma_p) {
  if (!(rho1 > 0.0)) throw std::domain_error("improved_estimate_thm31: rho1 must be > 0");
  if (p < 2) throw std::domain_error("improved_estimate_thm31: p must be >= 2");
  if (n < 1) throw std::domain_error("improved_estimate_thm31: n must be >= 1");
  return shrink_estimate(theta_hat, rho1 * rho1 * (p - 1) * gamma_p / n);
}

double thm31_a_star(const RegressionExperiment& exp) {
  const double bound = 3.0 * exp.p() * exp.noise.rho_star();
  return exp.scaling == GammaScaling::PerHorizon ? bound / exp.n : bound;
}

Thm31Report mc_risk_thm31(const RegressionExperiment& exp, const std::vector<Vector>& grid,
                          Execution exec) {
  exp.validate();
  Thm31Report report;
  report.scaling = exp.scaling;
  report.a_star = thm31_a_star(exp);
  report.gamma_p = gamma_p_quadrature(GammaPInputs(exp.p(), exp.d, report.a_star));
  report.c = exp.noise.rho1 * exp.noise.rho1 * (exp.p() - 1) * report.gamma_p / exp.n;
  report.bound = -report.c * report.c;
  const NoiseDraw noise = [&exp](Engine& rng) {
    return Vector(basis_integrals(exp.noise, exp.basis, exp.n, exp.step, rng) / exp.n);
  };
  report.sweep = paired_delta_sweep(noise, report.c, grid, exp.d, exp.trials, exp.seed, exec);
  return report;
}

std::vector<Vector> ray_grid(int p, double d) {
  if (p < 2) throw std::invalid_argument("ray_grid: p must be >= 2");
  std::vector<Vector> dirs;
  for (int k = 0; k < 2; ++k) {
    Vector e = Vector::Zero(p);
    e[k] = 1.0;
    dirs.push_back(e);
  }
  dirs.push_back(Vector::Ones(p) / std::sqrt(static_cast<double>(p)));
  std::vector<Vector> grid{Vector::Zero(p)};
  for (double r : {0.5 * d, d})
    for (const auto& u : dirs) grid.push_back(r * u);
  return grid;
}

}  // namespace levyshrink
