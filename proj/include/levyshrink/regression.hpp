#pragma once

// Continuous-time regression dy = sum_j theta_j phi_j(t) dt + d xi_t on [0, n]
// with OU-Levy noise: the integral LSE and its shrinkage improvement.

#include <cstdint>
#include <vector>

#include "levyshrink/condgauss.hpp"
#include "levyshrink/oulevy.hpp"

namespace levyshrink {

/// Which a* enters gamma_p for the improved estimator. PerHorizon uses the
/// covariance of theta_hat itself, 3 p rho* / n; Unscaled uses 3 p rho*.
enum class GammaScaling { PerHorizon, Unscaled };

struct RegressionExperiment {
  Vector theta;
  TrigBasis basis{2};
  NoiseParams noise;
  int n = 1;
  double d = 1.0;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  double step = 1e-3;
  GammaScaling scaling = GammaScaling::PerHorizon;

  int p() const { return basis.size(); }
  /// Throws std::invalid_argument naming the violated field.
  void validate() const;
};

/// theta_hat_j = theta_j + I_n(phi_j) / n. The signal part uses exact
/// orthonormality over integer horizons instead of discretising y.
Vector lse(const SimulatedPath& path, const TrigBasis& basis, const Vector& theta, int n);

/// (1 - rho1^2 (p - 1) gamma_p / (n |theta_hat|)) theta_hat.
Vector improved_estimate_thm31(const Vector& theta_hat, int p, int n, double rho1, double gamma_p);

struct Thm31Report {
  double a_star = 0.0;
  double gamma_p = 0.0;
  double c = 0.0;
  double bound = 0.0;  // -c^2
  GammaScaling scaling = GammaScaling::PerHorizon;
  DeltaSweep sweep;
};

/// a* under the chosen scaling.
double thm31_a_star(const RegressionExperiment& exp);

/// Paired risks of the LSE and the improved estimator at every grid point;
/// trial i simulates one noise path (substream i of exp.seed) shared by all
/// grid points.
Thm31Report mc_risk_thm31(const RegressionExperiment& exp, const std::vector<Vector>& grid,
                          Execution exec = Execution::Parallel);

/// Origin plus radii d/2 and d along e_1, e_2 and (1,...,1)/sqrt(p).
std::vector<Vector> ray_grid(int p, double d);

}  // namespace levyshrink
