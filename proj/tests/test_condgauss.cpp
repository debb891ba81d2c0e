#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "levyshrink/condgauss.hpp"
#include "levyshrink/special.hpp"
#include "levyshrink/trials.hpp"

using namespace levyshrink;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

CondGaussModel identity_model(int p, const Vector& theta) {
  return CondGaussModel(theta, CovarianceSource::fixed(Matrix::Identity(p, p)));
}

bool same_report(const RiskReport& a, const RiskReport& b) {
  return a.empirical_risk == b.empirical_risk && a.half_width == b.half_width && a.trials == b.trials;
}

}  // namespace

TEST_CASE("shrink estimate arithmetic and conventions") {
  CHECK(shrink_estimate(vec({3, 4}), 1.0).isApprox(vec({2.4, 3.2}), 1e-15));
  CHECK(shrink_estimate(vec({3, 4}), 0.0) == vec({3, 4}));
  CHECK(shrink_estimate(vec({0, 0}), 2.0) == vec({0, 0}));
  // Factor 1 - 10/5 = -1 is kept, no positive part.
  CHECK(shrink_estimate(vec({3, 4}), 10.0).isApprox(vec({-3, -4}), 1e-15));
}

TEST_CASE("shrink estimate output is collinear with its input") {
  Engine rng = substream(7, 0);
  for (int k = 0; k < 200; ++k) {
    Vector y(4);
    for (int i = 0; i < 4; ++i) y[i] = standard_normal(rng);
    const Vector out = shrink_estimate(y, 0.8);
    const double cosine = out.dot(y) / (out.norm() * y.norm());
    CHECK(std::abs(std::abs(cosine) - 1.0) <= 1e-12);
  }
}

TEST_CASE("James-Stein and least-squares arithmetic") {
  CHECK(james_stein_estimate(vec({3, 4}), 5.0).isApprox(vec({2.4, 3.2}), 1e-15));
  CHECK(james_stein_estimate(vec({3, 4}), 0.0) == vec({3, 4}));
  CHECK(james_stein_estimate(vec({0, 0, 0}), 1.0) == vec({0, 0, 0}));
  CHECK(ls_estimate(vec({1, -2})) == vec({1, -2}));
}

TEST_CASE("optimal constant and risk bound") {
  CHECK(optimal_c_theorem21(2, 1.0, 0.3) == doctest::Approx(0.3));
  CHECK(optimal_c_theorem21(5, 0.5, 0.2) == doctest::Approx(0.4));
  CHECK(risk_difference_bound(2, 1.0, 0.3) == doctest::Approx(-0.09));
  const double c = optimal_c_theorem21(7, 0.3, 0.12);
  CHECK(risk_difference_bound(7, 0.3, 0.12) == doctest::Approx(-c * c));
  CHECK(risk_difference_bound(3, 2.0, 0.01) < 0.0);
  CHECK_THROWS(optimal_c_theorem21(1, 1.0, 0.3));
  CHECK_THROWS(optimal_c_theorem21(3, 0.0, 0.3));
  CHECK_THROWS(optimal_c_theorem21(3, 1.0, -0.1));

  const auto cfg = ShrinkageConfig::theorem21(5, 2.0, 0.5, 0.5);
  CHECK(cfg.gamma_p == doctest::Approx(gamma_p_quadrature(GammaPInputs(5, 2.0, 0.5))));
  CHECK(cfg.c == doctest::Approx(4 * 0.5 * cfg.gamma_p));
  CHECK(cfg.bound() == doctest::Approx(-cfg.c * cfg.c));
}

TEST_CASE("covariance sources reject non-SPD input") {
  Matrix asym(2, 2);
  asym << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(CovarianceSource::fixed(asym), ModelError);
  Matrix indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(CovarianceSource::fixed(indefinite), ModelError);
  const auto bad = CovarianceSource::random(2, [](Engine&) { return Matrix(-Matrix::Identity(2, 2)); });
  Engine rng = substream(1, 0);
  CHECK_THROWS_AS(bad.draw_noise(rng), ModelError);
}

TEST_CASE("observation moments under identity covariance") {
  const int p = 4;
  const Vector theta = Vector::Ones(p);
  const CondGaussModel model = identity_model(p, theta);
  const auto m = accumulate_trials(
      100000, p + 1,
      [&](std::uint64_t i, std::span<double> out) {
        Engine rng = substream(11, i);
        const auto obs = model.sample_observation(rng);
        for (int j = 0; j < p; ++j) out[j] = obs.y[j];
        out[p] = (obs.y - theta).squaredNorm();
      },
      Execution::Serial);
  for (int j = 0; j < p; ++j) CHECK(std::abs(m[j].mean() - 1.0) <= m[j].half_width());
  CHECK(std::abs(m[p].mean() - p) <= m[p].half_width());
}

TEST_CASE("Monte Carlo risks: LSE, James-Stein and shrinkage at the origin") {
  const auto lse = mc_risk({EstimatorKind::LeastSquares, 0.0}, identity_model(5, Vector::Zero(5)),
                           200000, 3);
  CHECK(std::abs(lse.empirical_risk - 5.0) <= lse.half_width);
  CHECK(lse.estimator_name == "lse");

  for (int p : {3, 5, 10}) {
    const auto js = mc_risk({EstimatorKind::JamesStein, p - 2.0}, identity_model(p, Vector::Zero(p)),
                            100000, 5);
    CAPTURE(p);
    CHECK(std::abs(js.empirical_risk - 2.0) <= js.half_width);
  }
  for (int p : {2, 4, 8}) {
    const double c = (p - 1) * gamma_p_origin_limit(p, 1.0);
    const auto shrink = mc_risk({EstimatorKind::Shrinkage, c}, identity_model(p, Vector::Zero(p)),
                                100000, 9);
    CAPTURE(p);
    CHECK(std::abs(shrink.empirical_risk - risk_at_zero_rp(p)) <= shrink.half_width);
  }

  // tr D for an arbitrary fixed D and theta.
  Matrix d(3, 3);
  d << 2.0, 0.3, 0.0, 0.3, 1.0, -0.2, 0.0, -0.2, 0.5;
  const auto r = mc_risk({EstimatorKind::LeastSquares, 0.0},
                         CondGaussModel(vec({1, -1, 0.5}), CovarianceSource::fixed(d)), 100000, 4);
  CHECK(std::abs(r.empirical_risk - 3.5) <= r.half_width);
  CHECK_THROWS(mc_risk({EstimatorKind::LeastSquares, 0.0}, identity_model(2, Vector::Zero(2)), 999, 1));
}

TEST_CASE("risk reports do not depend on the execution mode or worker count") {
  const auto model = CondGaussModel(Vector::Zero(4), wishart_perturbed_source(4, 0.5));
  const Estimator est{EstimatorKind::Shrinkage, 0.4};
  const auto serial = mc_risk(est, model, 10000, 21, Execution::Serial);
  set_worker_count(3);
  const auto parallel = mc_risk(est, model, 10000, 21, Execution::Parallel);
  set_worker_count(0);
  CHECK(same_report(serial, parallel));

  const auto cfg = ShrinkageConfig::theorem21(4, 1.0, 0.5, 4.5);
  const auto grid = ball_grid(4, 1.0);
  const auto a = sup_delta_over_grid(model.covariance(), cfg, grid, 5000, 2, Execution::Serial);
  set_worker_count(2);
  const auto b = sup_delta_over_grid(model.covariance(), cfg, grid, 5000, 2, Execution::Parallel);
  set_worker_count(0);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].delta == b.points[i].delta);
    CHECK(a.points[i].half_width == b.points[i].half_width);
  }
}

TEST_CASE("fixed and point-mass random covariance give the same risks") {
  Matrix d(2, 2);
  d << 1.5, 0.4, 0.4, 0.8;
  const auto fixed = CondGaussModel(vec({0.5, 0.2}), CovarianceSource::fixed(d));
  const auto point = CondGaussModel(vec({0.5, 0.2}), CovarianceSource::random(2, [d](Engine&) { return d; }));
  const Estimator est{EstimatorKind::Shrinkage, 0.3};
  const auto a = mc_risk(est, fixed, 50000, 8);
  const auto b = mc_risk(est, point, 50000, 8);
  CHECK(std::abs(a.empirical_risk - b.empirical_risk) <= a.half_width + b.half_width);
}

TEST_CASE("paired sweep: origin value and preconditions") {
  const int p = 4;
  const double c = (p - 1) * gamma_p_origin_limit(p, 1.0);
  const auto model = identity_model(p, Vector::Zero(p));
  const auto sweep = paired_delta_sweep(model.noise_draw(), c, {Vector::Zero(p)}, 1.0, 100000, 6);
  CHECK(std::abs(sweep.points[0].delta - (risk_at_zero_rp(p) - p)) <= sweep.points[0].half_width);
  CHECK(sweep.worst_delta == sweep.points[0].delta);

  CHECK_THROWS(paired_delta_sweep(model.noise_draw(), c, {Vector::Zero(p)}, 1.0, 0, 6));
  CHECK_THROWS(paired_delta_sweep(model.noise_draw(), c, {Vector::Constant(p, 1.0)}, 1.0, 1000, 6));
}

TEST_CASE("domination with a random covariance") {
  const int p = 5;
  const auto source = wishart_perturbed_source(p, 0.5);
  const auto cfg = ShrinkageConfig::theorem21(p, 2.0, 0.5, 0.5 + p);
  const auto sweep = sup_delta_over_grid(source, cfg, ball_grid(p, 2.0), 20000, 12);
  for (const auto& pt : sweep.points) {
    CHECK(pt.delta + pt.half_width < 0.0);
    CHECK(pt.delta <= cfg.bound() + pt.half_width);
  }
  const auto cond = check_conditions(source, 0.5, 0.5 + p, 5000, 13);
  CHECK(cond.c1_holds);
  CHECK(cond.c2_holds);
  CHECK(cond.min_lambda_min >= 0.5);
}

TEST_CASE("ball grid stays inside the ball") {
  const auto grid = ball_grid(6, 1.5);
  CHECK(grid.size() == 9);
  for (const auto& g : grid) CHECK(g.norm() <= 1.5 + 1e-12);
  CHECK(grid.front().norm() == 0.0);
}
