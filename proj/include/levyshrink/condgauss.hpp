#pragma once

// Conditionally Gaussian observation model Y = theta + xi with
// Law(xi | G) = N_p(0, D(G)), the shrinkage estimator (1 - c/|Y|) Y, its
// James-Stein and least-squares comparators, and Monte Carlo risk harnesses.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levyshrink/rng.hpp"
#include "levyshrink/trials.hpp"

namespace levyshrink {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a covariance is not symmetric positive definite.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Draws one noise vector; the unit every risk harness pairs estimators on.
using NoiseDraw = std::function<Vector(Engine&)>;

/// Draws one realisation of the random covariance D(G).
using CovarianceSampler = std::function<Matrix(Engine&)>;

/// Either a fixed SPD matrix or a sampler of random SPD matrices.
class CovarianceSource {
 public:
  static CovarianceSource fixed(Matrix covariance);
  static CovarianceSource random(int p, CovarianceSampler sampler);

  int dimension() const { return p_; }
  bool is_fixed() const { return !sampler_; }
  /// The fixed matrix; std::logic_error for a random source.
  const Matrix& matrix() const;

  /// Realised covariance (consumes `rng` only for random sources).
  Matrix draw(Engine& rng) const;
  /// Covariance and noise xi = L z with L L' = D; ModelError if D is not SPD.
  std::pair<Matrix, Vector> draw_noise(Engine& rng) const;

 private:
  int p_ = 0;
  Matrix fixed_;
  Matrix fixed_factor_;
  CovarianceSampler sampler_;
};

/// D(G) = lambda_star I + W W' / p with W a p x p standard normal matrix.
/// lambda_min >= lambda_star and E lambda_max <= lambda_star + p.
CovarianceSource wishart_perturbed_source(int p, double lambda_star);

struct Observation {
  Vector y;
  Matrix covariance;
};

class CondGaussModel {
 public:
  CondGaussModel(Vector theta, CovarianceSource covariance);

  const Vector& theta() const { return theta_; }
  int dimension() const { return static_cast<int>(theta_.size()); }
  const CovarianceSource& covariance() const { return covariance_; }

  /// Draws D, then xi ~ N(0, D); returns Y = theta + xi and the realised D.
  Observation sample_observation(Engine& rng) const;
  NoiseDraw noise_draw() const;

 private:
  Vector theta_;
  CovarianceSource covariance_;
};

/// (1 - c/|y|) y. The factor goes negative for |y| < c and is kept as is;
/// y = 0 maps to the zero vector.
Vector shrink_estimate(const Vector& y, double c);
/// (1 - c/|y|^2) y, zero vector for y = 0.
Vector james_stein_estimate(const Vector& y, double c);
inline Vector ls_estimate(const Vector& y) { return y; }

/// c = (p - 1) lambda_star gamma_p.
double optimal_c_theorem21(int p, double lambda_star, double gamma_p);
/// -[(p - 1) lambda_star gamma_p]^2.
double risk_difference_bound(int p, double lambda_star, double gamma_p);

struct ShrinkageConfig {
  double c = 0.0;
  double d = 0.0;
  double lambda_star = 0.0;
  double a_star = 0.0;
  double gamma_p = 0.0;

  /// gamma_p by quadrature from (p, d, a_star), c = (p - 1) lambda_star gamma_p.
  static ShrinkageConfig theorem21(int p, double d, double lambda_star, double a_star);
  double bound() const { return -c * c; }
};

enum class EstimatorKind { LeastSquares, Shrinkage, JamesStein };

struct Estimator {
  EstimatorKind kind = EstimatorKind::LeastSquares;
  double c = 0.0;

  Vector apply(const Vector& y) const;
  std::string name() const;
};

struct RiskReport {
  std::string estimator_name;
  double empirical_risk = 0.0;
  double half_width = 0.0;
  std::uint64_t trials = 0;
  std::optional<double> theoretical_bound;
  std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kMinTrials = 1000;

/// Empirical E|estimate - theta|^2 with a 3-sigma half-width.
RiskReport mc_risk(const Estimator& estimator, const CondGaussModel& model, std::uint64_t trials,
                   std::uint64_t seed, Execution exec = Execution::Parallel);

struct DeltaPoint {
  Vector theta;
  double shrink_risk = 0.0;
  double lse_risk = 0.0;
  double delta = 0.0;
  double half_width = 0.0;  // 3 sigma of the paired per-trial differences
};

struct DeltaSweep {
  std::vector<DeltaPoint> points;
  double worst_delta = 0.0;
  std::size_t worst_index = 0;
  double c = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Risk difference shrink - LSE at every theta in `grid`, with common random
/// numbers: trial i draws one noise vector and every estimator at every grid
/// point sees it. Throws std::invalid_argument if a grid point lies outside
/// the ball of radius `d` or trials < kMinTrials.
DeltaSweep paired_delta_sweep(const NoiseDraw& noise, double c, const std::vector<Vector>& grid,
                              double d, std::uint64_t trials, std::uint64_t seed,
                              Execution exec = Execution::Parallel);

/// paired_delta_sweep for the conditionally Gaussian model with config.c.
DeltaSweep sup_delta_over_grid(const CovarianceSource& covariance, const ShrinkageConfig& config,
                               const std::vector<Vector>& grid, std::uint64_t trials,
                               std::uint64_t seed, Execution exec = Execution::Parallel);

/// Nine points in the ball of radius d: the origin and radii d/2, d along
/// e_1, -e_1, (1,...,1)/sqrt(p) and (1,-1,1,...)/sqrt(p).
std::vector<Vector> ball_grid(int p, double d);

struct ConditionCheck {
  double min_lambda_min = 0.0;
  double mean_lambda_max = 0.0;
  double lambda_max_half_width = 0.0;
  bool c1_holds = false;  // every sampled lambda_min >= lambda_star
  bool c2_holds = false;  // mean lambda_max - 3 sigma <= a_star
};

/// Samples D(G) and checks the eigenvalue conditions used by the shrinkage bound.
ConditionCheck check_conditions(const CovarianceSource& covariance, double lambda_star,
                                double a_star, std::uint64_t samples, std::uint64_t seed);

}  // namespace levyshrink
