#include "levyshrink/condgauss.hpp"

#include <cmath>
#include <limits>

#include "levyshrink/special.hpp"

namespace levyshrink {
namespace {

void require_symmetric(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw ModelError("covariance must be square and non-empty");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ModelError("covariance is not symmetric");
  }
}

Matrix cholesky_factor(const Matrix& m) {
  require_symmetric(m);
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw ModelError("covariance is not positive definite");
  return llt.matrixL();
}

Vector normal_vector(int p, Engine& rng) {
  Vector z(p);
  for (int i = 0; i < p; ++i) z[i] = standard_normal(rng);
  return z;
}

}  // namespace

CovarianceSource CovarianceSource::fixed(Matrix covariance) {
  CovarianceSource s;
  s.fixed_factor_ = cholesky_factor(covariance);
  s.p_ = static_cast<int>(covariance.rows());
  s.fixed_ = std::move(covariance);
  return s;
}

CovarianceSource CovarianceSource::random(int p, CovarianceSampler sampler) {
  if (p < 1) throw std::invalid_argument("CovarianceSource: p must be >= 1");
  if (!sampler) throw std::invalid_argument("CovarianceSource: empty sampler");
  CovarianceSource s;
  s.p_ = p;
  s.sampler_ = std::move(sampler);
  return s;
}

const Matrix& CovarianceSource::matrix() const {
  if (!is_fixed()) throw std::logic_error("CovarianceSource::matrix on a random source");
  return fixed_;
}

Matrix CovarianceSource::draw(Engine& rng) const {
  if (is_fixed()) return fixed_;
  Matrix m = sampler_(rng);
  if (m.rows() != p_) throw ModelError("sampled covariance has the wrong dimension");
  return m;
}

std::pair<Matrix, Vector> CovarianceSource::draw_noise(Engine& rng) const {
  if (is_fixed()) return {fixed_, fixed_factor_ * normal_vector(p_, rng)};
  Matrix d = draw(rng);
  const Matrix factor = cholesky_factor(d);
  Vector xi = factor * normal_vector(p_, rng);
  return {std::move(d), std::move(xi)};
}

CovarianceSource wishart_perturbed_source(int p, double lambda_star) {
  if (!(lambda_star > 0.0)) throw std::invalid_argument("wishart_perturbed_source: lambda_star must be > 0");
  return CovarianceSource::random(p, [p, lambda_star](Engine& rng) {
    Matrix w(p, p);
    for (int j = 0; j < p; ++j)
      for (int i = 0; i < p; ++i) w(i, j) = standard_normal(rng);
    Matrix d = (w * w.transpose()) / static_cast<double>(p);
    d.diagonal().array() += lambda_star;
    return Matrix(0.5 * (d + d.transpose()));
  });
}

CondGaussModel::CondGaussModel(Vector theta, CovarianceSource covariance)
    : theta_(std::move(theta)), covariance_(std::move(covariance)) {
  if (theta_.size() != covariance_.dimension()) {
    throw ModelError("theta has dimension " + std::to_string(theta_.size()) +
                     " but the covariance is " + std::to_string(covariance_.dimension()));
  }
}

Observation CondGaussModel::sample_observation(Engine& rng) const {
  auto [d, xi] = covariance_.draw_noise(rng);
  return {theta_ + xi, std::move(d)};
}

NoiseDraw CondGaussModel::noise_draw() const {
  return [source = covariance_](Engine& rng) { return source.draw_noise(rng).second; };
}

Vector shrink_estimate(const Vector& y, double c) {
  const double norm = y.norm();
  if (norm == 0.0) return Vector::Zero(y.size());
  return (1.0 - c / norm) * y;
}

Vector james_stein_estimate(const Vector& y, double c) {
  const double sq = y.squaredNorm();
  if (sq == 0.0) return Vector::Zero(y.size());
  return (1.0 - c / sq) * y;
}

double optimal_c_theorem21(int p, double lambda_star, double gamma_p) {
  if (p < 2) throw std::domain_error("optimal_c_theorem21: p must be >= 2");
  if (!(lambda_star > 0.0)) throw std::domain_error("optimal_c_theorem21: lambda_star must be > 0");
  if (!(gamma_p > 0.0)) throw std::domain_error("optimal_c_theorem21: gamma_p must be > 0");
  return (p - 1) * lambda_star * gamma_p;
}

double risk_difference_bound(int p, double lambda_star, double gamma_p) {
  const double c = optimal_c_theorem21(p, lambda_star, gamma_p);
  return -c * c;
}

ShrinkageConfig ShrinkageConfig::theorem21(int p, double d, double lambda_star, double a_star) {
  ShrinkageConfig cfg;
  cfg.d = d;
  cfg.lambda_star = lambda_star;
  cfg.a_star = a_star;
  cfg.gamma_p = gamma_p_quadrature(GammaPInputs(p, d, a_star));
  cfg.c = optimal_c_theorem21(p, lambda_star, cfg.gamma_p);
  return cfg;
}

Vector Estimator::apply(const Vector& y) const {
  switch (kind) {
    case EstimatorKind::LeastSquares:
      return ls_estimate(y);
    case EstimatorKind::Shrinkage:
      return shrink_estimate(y, c);
    case EstimatorKind::JamesStein:
      return james_stein_estimate(y, c);
  }
  return y;
}

std::string Estimator::name() const {
  switch (kind) {
    case EstimatorKind::LeastSquares:
      return "lse";
    case EstimatorKind::Shrinkage:
      return "shrink";
    case EstimatorKind::JamesStein:
      return "james_stein";
  }
  return "unknown";
}

RiskReport mc_risk(const Estimator& estimator, const CondGaussModel& model, std::uint64_t trials,
                   std::uint64_t seed, Execution exec) {
  if (trials < kMinTrials) {
    throw std::invalid_argument("mc_risk: trials must be >= " + std::to_string(kMinTrials));
  }
  const auto moments = accumulate_trials(
      trials, 1,
      [&](std::uint64_t i, std::span<double> out) {
        Engine rng = substream(seed, i);
        const Observation obs = model.sample_observation(rng);
        out[0] = (estimator.apply(obs.y) - model.theta()).squaredNorm();
      },
      exec);
  RiskReport report;
  report.estimator_name = estimator.name();
  report.empirical_risk = moments[0].mean();
  report.half_width = moments[0].half_width();
  report.trials = trials;
  report.seed = seed;
  return report;
}

DeltaSweep paired_delta_sweep(const NoiseDraw& noise, double c, const std::vector<Vector>& grid,
                              double d, std::uint64_t trials, std::uint64_t seed, Execution exec) {
  if (trials < kMinTrials) {
    throw std::invalid_argument("paired_delta_sweep: trials must be >= " + std::to_string(kMinTrials));
  }
  if (grid.empty()) throw std::invalid_argument("paired_delta_sweep: empty theta grid");
  for (const auto& theta : grid) {
    if (theta.norm() > d * (1.0 + 1e-12)) {
      throw std::invalid_argument("paired_delta_sweep: grid point with norm " +
                                  std::to_string(theta.norm()) + " lies outside the ball of radius " +
                                  std::to_string(d));
    }
  }
  const std::size_t g = grid.size();
  const auto moments = accumulate_trials(
      trials, 3 * g,
      [&](std::uint64_t i, std::span<double> out) {
        Engine rng = substream(seed, i);
        const Vector xi = noise(rng);
        const double lse_loss = xi.squaredNorm();
        for (std::size_t k = 0; k < g; ++k) {
          const Vector y = grid[k] + xi;
          const double shrink_loss = (shrink_estimate(y, c) - grid[k]).squaredNorm();
          out[3 * k] = shrink_loss;
          out[3 * k + 1] = lse_loss;
          out[3 * k + 2] = shrink_loss - lse_loss;
        }
      },
      exec);

  DeltaSweep sweep;
  sweep.c = c;
  sweep.trials = trials;
  sweep.seed = seed;
  sweep.worst_delta = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < g; ++k) {
    DeltaPoint pt;
    pt.theta = grid[k];
    pt.shrink_risk = moments[3 * k].mean();
    pt.lse_risk = moments[3 * k + 1].mean();
    pt.delta = moments[3 * k + 2].mean();
    pt.half_width = moments[3 * k + 2].half_width();
    if (pt.delta > sweep.worst_delta) {
      sweep.worst_delta = pt.delta;
      sweep.worst_index = k;
    }
    sweep.points.push_back(std::move(pt));
  }
  return sweep;
}

DeltaSweep sup_delta_over_grid(const CovarianceSource& covariance, const ShrinkageConfig& config,
                               const std::vector<Vector>& grid, std::uint64_t trials,
                               std::uint64_t seed, Execution exec) {
  const NoiseDraw noise = [&covariance](Engine& rng) { return covariance.draw_noise(rng).second; };
  return paired_delta_sweep(noise, config.c, grid, config.d, trials, seed, exec);
}

std::vector<Vector> ball_grid(int p, double d) {
  if (p < 2) throw std::invalid_argument("ball_grid: p must be >= 2");
  std::vector<Vector> dirs;
  Vector e1 = Vector::Zero(p);
  e1[0] = 1.0;
  dirs.push_back(e1);
  dirs.push_back(-e1);
  dirs.push_back(Vector::Ones(p) / std::sqrt(static_cast<double>(p)));
  Vector alt(p);
  for (int i = 0; i < p; ++i) alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
  dirs.push_back(alt / std::sqrt(static_cast<double>(p)));

  std::vector<Vector> grid{Vector::Zero(p)};
  for (double r : {0.5 * d, d})
    for (const auto& u : dirs) grid.push_back(r * u);
  return grid;
}

ConditionCheck check_conditions(const CovarianceSource& covariance, double lambda_star,
                                double a_star, std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("check_conditions: samples must be >= 1");
  const auto eig = map_indices<std::pair<double, double>>(samples, [&](std::size_t i) {
    Engine rng = substream(seed, i);
    const Matrix d = covariance.draw(rng);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(d, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return std::make_pair(ev.minCoeff(), ev.maxCoeff());
  });
  ConditionCheck out;
  out.min_lambda_min = std::numeric_limits<double>::infinity();
  Moments lmax;
  for (const auto& [lo, hi] : eig) {
    out.min_lambda_min = std::min(out.min_lambda_min, lo);
    lmax.add(hi);
  }
  out.mean_lambda_max = lmax.mean();
  out.lambda_max_half_width = lmax.half_width();
  out.c1_holds = out.min_lambda_min >= lambda_star * (1.0 - 1e-12);
  out.c2_holds = out.mean_lambda_max - out.lambda_max_half_width <= a_star;
  return out;
}

}  // namespace levyshrink
