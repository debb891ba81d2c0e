#include "levyshrink/experiments.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "levyshrink/ar1.hpp"
#include "levyshrink/condgauss.hpp"
#include "levyshrink/regression.hpp"
#include "levyshrink/special.hpp"

namespace levyshrink {
namespace {

constexpr std::uint64_t kFrozenJumpStream = 0x6a756d7073ULL;
constexpr std::uint64_t kUnconditionalStream = 2;
constexpr std::uint64_t kConditionalStream = 1;
constexpr std::uint64_t kEigenStream = 3;

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::string label_ij(int i, int j) { return std::to_string(i + 1) + "," + std::to_string(j + 1); }

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

const std::vector<std::string> kSweepColumns = {"theta",  "theta_norm", "shrink_risk",
                                                "lse_risk", "delta",    "half_width",
                                                "bound",  "dominates",  "within_bound"};

// Appends one row per grid point; returns whether every point passed.
bool add_sweep_rows(Table& table, const DeltaSweep& sweep, double bound) {
  bool all = true;
  for (const auto& pt : sweep.points) {
    const bool dominates = pt.delta + pt.half_width < 0.0;
    const bool within = pt.delta <= bound + pt.half_width;
    all = all && dominates && within;
    table.add_row({format_vector(to_std(pt.theta)), format_number(pt.theta.norm()),
                   format_number(pt.shrink_risk), format_number(pt.lse_risk), format_number(pt.delta),
                   format_number(pt.half_width), format_number(bound), verdict(dominates),
                   verdict(within)});
  }
  return all;
}

std::vector<Vector> grid_or_theta(const ExperimentConfig& cfg, int p, std::vector<Vector> grid) {
  if (!cfg.theta) return grid;
  require(static_cast<int>(cfg.theta->size()) == p,
          "theta: expected " + std::to_string(p) + " components, got " + std::to_string(cfg.theta->size()));
  return {Eigen::Map<const Vector>(cfg.theta->data(), p)};
}

void echo_common(Table& t, const std::string& command, std::uint64_t seed) {
  t.echo("command", command);
  t.echo("seed", std::to_string(seed));
}

NoiseParams noise_from(const ExperimentConfig& cfg, double a, double rho1, double rho2, double lambda) {
  NoiseParams params{cfg.a.value_or(a), cfg.rho1.value_or(rho1), cfg.rho2.value_or(rho2),
                     cfg.lambda.value_or(lambda)};
  require(params.a <= 0.0, "a: must be <= 0");
  require(params.rho1 > 0.0, "rho1: must be > 0");
  require(params.rho2 >= 0.0, "rho2: must be >= 0");
  require(params.lambda > 0.0, "lambda: must be > 0");
  return params;
}

void echo_noise(Table& t, const NoiseParams& params) {
  t.echo("a", format_number(params.a));
  t.echo("rho1", format_number(params.rho1));
  t.echo("rho2", format_number(params.rho2));
  t.echo("lambda", format_number(params.lambda));
  t.echo("rho_star", format_number(params.rho_star()));
}

double checked_step(const ExperimentConfig& cfg) {
  const double step = cfg.step.value_or(1e-3);
  require(step > 0.0 && step <= 1e-2, "step: must lie in (0, 0.01]");
  return step;
}

std::uint64_t checked_trials(const ExperimentConfig& cfg, std::uint64_t fallback) {
  const std::uint64_t trials = cfg.trials.value_or(fallback);
  require(trials >= kMinTrials, "trials: must be >= " + std::to_string(kMinTrials));
  return trials;
}

}  // namespace

std::vector<CheckRow> verify_second_moments(const TrigBasis& basis, const NoiseParams& params,
                                            int n, double step, std::uint64_t paths,
                                            std::uint64_t seed, Execution exec) {
  const int p = basis.size();
  const auto m = accumulate_trials(
      paths, static_cast<std::size_t>(p * p),
      [&](std::uint64_t i, std::span<double> out) {
        Engine rng = substream(seed, i);
        const Vector integrals = basis_integrals(params, basis, n, step, rng);
        for (int r = 0; r < p; ++r)
          for (int c = 0; c < p; ++c) out[r * p + c] = integrals[r] * integrals[c];
      },
      exec);

  Matrix reference(p, p);
  for (int r = 0; r < p; ++r)
    for (int c = r; c < p; ++c)
      reference(r, c) = reference(c, r) =
          second_moment_unconditional(basis.function(r), basis.function(c), params, n);

  std::vector<CheckRow> rows;
  for (int r = 0; r < p; ++r) {
    for (int c = 0; c < p; ++c) {
      const auto& mm = m[r * p + c];
      rows.push_back({"second_moment", label_ij(r, c), mm.mean(), mm.half_width(),
                      reference(r, c), std::abs(mm.mean() - reference(r, c)) <= mm.half_width()});
    }
  }
  const double cap = 3.0 * params.rho_star() * n;  // 3 rho* int_0^n phi_j^2
  for (int j = 0; j < p; ++j) {
    const auto& mm = m[j * p + j];
    rows.push_back({"second_moment_bound", std::to_string(j + 1), mm.mean(), mm.half_width(), cap,
                    reference(j, j) <= cap && mm.mean() - mm.half_width() <= cap});
  }
  return rows;
}

std::vector<CheckRow> verify_conditional_moments(const TrigBasis& basis, const NoiseParams& params,
                                                 const JumpRecord& jumps, int n, double step,
                                                 std::uint64_t paths, std::uint64_t seed,
                                                 Execution exec) {
  const int p = basis.size();
  const double root_n = std::sqrt(static_cast<double>(n));
  const auto m = accumulate_trials(
      paths, static_cast<std::size_t>(p + p * p),
      [&](std::uint64_t i, std::span<double> out) {
        Engine rng = substream(seed, i);
        const JumpRecord given = resample_marks(jumps, rng);
        const Vector integrals = basis_integrals(params, basis, n, step, rng, &given);
        const Vector zeta = integrals / root_n;
        for (int r = 0; r < p; ++r) {
          out[r] = integrals[r];
          for (int c = 0; c < p; ++c) out[p + r * p + c] = zeta[r] * zeta[c];
        }
      },
      exec);
  const auto v = conditional_covariance(basis, params, jumps, n);

  std::vector<CheckRow> rows;
  for (int j = 0; j < p; ++j) {
    rows.push_back({"conditional_mean", std::to_string(j + 1), m[j].mean(), m[j].half_width(),
                    0.0, std::abs(m[j].mean()) <= m[j].half_width()});
  }
  for (int r = 0; r < p; ++r) {
    for (int c = 0; c < p; ++c) {
      const auto& mm = m[p + r * p + c];
      rows.push_back({"conditional_covariance", label_ij(r, c), mm.mean(), mm.half_width(),
                      v.matrix(r, c), std::abs(mm.mean() - v.matrix(r, c)) <= mm.half_width()});
    }
  }
  return rows;
}

MinEigenvalueSweep sweep_min_eigenvalue(const TrigBasis& basis, const NoiseParams& params, int n,
                            std::uint64_t samples, std::uint64_t seed, Execution exec) {
  const auto results = map_indices<Lemma54Result>(
      samples,
      [&](std::size_t i) {
        Engine rng = substream(seed, i);
        const JumpRecord jumps = sample_jumps(params, n, rng);
        return check_lemma_54(conditional_covariance(basis, params, jumps, n), params);
      },
      exec);
  MinEigenvalueSweep sweep;
  sweep.samples = samples;
  sweep.min_eigenvalue = std::numeric_limits<double>::infinity();
  sweep.threshold = params.rho1 * params.rho1 - 1e-6;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].pass) ++sweep.failures;
    if (results[i].min_eigenvalue < sweep.min_eigenvalue) {
      sweep.min_eigenvalue = results[i].min_eigenvalue;
      sweep.worst_sample = i;
      sweep.worst_jumps = results[i].jumps;
    }
  }
  return sweep;
}

JumpRecord frozen_jumps(const NoiseParams& params, int n, std::uint64_t seed) {
  Engine rng = substream(seed, kFrozenJumpStream);
  return sample_jumps(params, n, rng);
}

Table cmd_figure1(const ExperimentConfig& cfg, Execution exec) {
  const int p_min = cfg.p_min.value_or(2);
  const int p_max = cfg.p_max.value_or(20);
  const std::uint64_t trials = cfg.trials.value_or(0);
  const std::uint64_t seed = cfg.seed.value_or(1);
  require(p_min >= 2, "p_min: must be >= 2");
  require(p_max >= p_min, "p_max: must be >= p_min");
  require(trials == 0 || trials >= kMinTrials,
          "trials: must be 0 (no Monte Carlo) or >= " + std::to_string(kMinTrials));

  Table t;
  echo_common(t, "figure1", seed);
  t.echo("p_min", std::to_string(p_min));
  t.echo("p_max", std::to_string(p_max));
  t.echo("trials", std::to_string(trials));
  t.echo("theta", "0");
  t.echo("covariance", "identity");
  t.columns = {"p", "r_p", "js_risk", "lse_risk"};
  if (trials > 0) {
    for (const char* c : {"mc_shrink_risk", "mc_shrink_half_width", "mc_js_risk", "mc_js_half_width", "status"})
      t.columns.emplace_back(c);
  }
  for (int p = p_min; p <= p_max; ++p) {
    const double rp = risk_at_zero_rp(p);
    std::vector<std::string> row = {std::to_string(p), format_number(rp), format_number(2.0),
                                    format_number(p)};
    if (trials > 0) {
      const CondGaussModel model(Vector::Zero(p), CovarianceSource::fixed(Matrix::Identity(p, p)));
      const double c = (p - 1) * gamma_p_origin_limit(p, 1.0);
      const auto shrink = mc_risk({EstimatorKind::Shrinkage, c}, model, trials, seed, exec);
      const auto js = mc_risk({EstimatorKind::JamesStein, p - 2.0}, model, trials, seed, exec);
      const bool ok = std::abs(shrink.empirical_risk - rp) <= shrink.half_width &&
                      std::abs(js.empirical_risk - 2.0) <= js.half_width;
      t.pass = t.pass && ok;
      for (double x : {shrink.empirical_risk, shrink.half_width, js.empirical_risk, js.half_width})
        row.push_back(format_number(x));
      row.push_back(verdict(ok));
    }
    t.add_row(std::move(row));
  }
  return t;
}

std::string figure1_svg(const ExperimentConfig& cfg) {
  const int p_min = cfg.p_min.value_or(2);
  const int p_max = cfg.p_max.value_or(20);
  require(p_min >= 2, "p_min: must be >= 2");
  require(p_max >= p_min, "p_max: must be >= p_min");
  Series shrink{"shrinkage r_p", "#1f77b4", {}};
  Series js{"James-Stein", "#d62728", {}};
  Series lse{"LSE", "#2ca02c", {}};
  for (int p = p_min; p <= p_max; ++p) {
    shrink.points.emplace_back(p, risk_at_zero_rp(p));
    js.points.emplace_back(p, 2.0);
    lse.points.emplace_back(p, p);
  }
  return line_chart_svg("Risk at theta = 0", "p", "risk", {shrink, js, lse});
}

Table cmd_gamma_p(const ExperimentConfig& cfg) {
  const int p_max = cfg.p.value_or(20);
  const double d = cfg.d.value_or(2.0);
  const double a_star = cfg.a_star.value_or(4.0);
  require(p_max >= 2, "p: must be >= 2");
  require(d > 0.0, "d: must be > 0");
  require(a_star > 0.0, "a_star: must be > 0");
  Table t;
  echo_common(t, "gamma-p", cfg.seed.value_or(1));
  t.echo("p", std::to_string(p_max));
  t.echo("d", format_number(d));
  t.echo("a_star", format_number(a_star));
  t.columns = {"p", "mu", "gamma_closed", "gamma_quadrature", "abs_diff", "status"};
  for (int p = 2; p <= p_max; ++p) {
    const GammaPInputs in(p, d, a_star);
    const double closed = gamma_p_closed(in);
    const double quad = gamma_p_quadrature(in);
    const double diff = std::abs(closed - quad);
    // The alternating sum is only trusted up to p = 20.
    std::string status = "SKIP";
    if (p <= 20) {
      const bool ok = diff <= 1e-8 && quad > 0.0;
      t.pass = t.pass && ok;
      status = verdict(ok);
    }
    t.add_row({std::to_string(p), format_number(in.mu()), format_number(closed), format_number(quad),
               format_number(diff), status});
  }
  return t;
}

Table cmd_risk_cond_gauss(const ExperimentConfig& cfg, Execution exec) {
  const int p = cfg.p.value_or(5);
  const double d = cfg.d.value_or(2.0);
  const double lambda_star = cfg.lambda_star.value_or(0.5);
  const std::string mode = cfg.covariance.value_or("scaled-identity");
  const std::uint64_t trials = checked_trials(cfg, 100000);
  const std::uint64_t seed = cfg.seed.value_or(1);
  require(p >= 2, "p: must be >= 2");
  require(d > 0.0, "d: must be > 0");
  require(lambda_star > 0.0, "lambda_star: must be > 0");
  require(mode == "scaled-identity" || mode == "random",
          "covariance: expected 'scaled-identity' or 'random', got '" + mode + "'");
  const bool random = mode == "random";
  const double a_star = cfg.a_star.value_or(random ? lambda_star + p : lambda_star);
  require(a_star > 0.0, "a_star: must be > 0");

  const CovarianceSource source = random ? wishart_perturbed_source(p, lambda_star)
                                         : CovarianceSource::fixed(lambda_star * Matrix::Identity(p, p));
  const auto config = ShrinkageConfig::theorem21(p, d, lambda_star, a_star);
  const auto grid = grid_or_theta(cfg, p, ball_grid(p, d));

  Table t;
  echo_common(t, "risk-cond-gauss", seed);
  t.echo("p", std::to_string(p));
  t.echo("d", format_number(d));
  t.echo("covariance", mode);
  t.echo("lambda_star", format_number(lambda_star));
  t.echo("a_star", format_number(a_star));
  t.echo("trials", std::to_string(trials));
  t.echo("gamma_p", format_number(config.gamma_p));
  t.echo("c", format_number(config.c));
  t.echo("bound", format_number(config.bound()));
  if (random) {
    const auto cond = check_conditions(source, lambda_star, a_star, 10000, substream_seed(seed, kEigenStream));
    t.echo("c1_min_lambda_min", format_number(cond.min_lambda_min));
    t.echo("c1_status", verdict(cond.c1_holds));
    t.echo("c2_mean_lambda_max", format_number(cond.mean_lambda_max));
    t.echo("c2_status", verdict(cond.c2_holds));
    t.pass = cond.c1_holds && cond.c2_holds;
  }
  t.columns = kSweepColumns;
  const auto sweep = sup_delta_over_grid(source, config, grid, trials, seed, exec);
  t.pass = add_sweep_rows(t, sweep, config.bound()) && t.pass;
  return t;
}

Table cmd_risk_ou(const ExperimentConfig& cfg, Execution exec) {
  RegressionExperiment exp;
  const int p = cfg.p.value_or(3);
  require(p >= 2, "p: must be >= 2");
  exp.basis = TrigBasis(p);
  exp.noise = noise_from(cfg, -1.0, 1.0, 0.5, 1.0);
  exp.n = cfg.n.value_or(10);
  require(exp.n >= 1, "n: must be >= 1");
  exp.d = cfg.d.value_or(2.0);
  require(exp.d > 0.0, "d: must be > 0");
  exp.trials = checked_trials(cfg, 100000);
  exp.seed = cfg.seed.value_or(1);
  exp.step = checked_step(cfg);
  const std::string scaling = cfg.gamma_scaling.value_or("per-horizon");
  require(scaling == "per-horizon" || scaling == "unscaled",
          "gamma_scaling: expected 'per-horizon' or 'unscaled', got '" + scaling + "'");
  exp.scaling = scaling == "per-horizon" ? GammaScaling::PerHorizon : GammaScaling::Unscaled;
  exp.theta = Vector::Zero(p);
  const auto grid = grid_or_theta(cfg, p, ray_grid(p, exp.d));

  const auto report = mc_risk_thm31(exp, grid, exec);
  Table t;
  echo_common(t, "risk-ou", exp.seed);
  t.echo("p", std::to_string(p));
  t.echo("n", std::to_string(exp.n));
  echo_noise(t, exp.noise);
  t.echo("d", format_number(exp.d));
  t.echo("step", format_number(exp.step));
  t.echo("trials", std::to_string(exp.trials));
  t.echo("gamma_scaling", scaling);
  t.echo("a_star", format_number(report.a_star));
  t.echo("gamma_p", format_number(report.gamma_p));
  t.echo("c", format_number(report.c));
  t.echo("bound", format_number(report.bound));
  t.columns = kSweepColumns;
  t.pass = add_sweep_rows(t, report.sweep, report.bound);
  return t;
}

Table cmd_risk_ar1(const ExperimentConfig& cfg, Execution exec) {
  Ar1Noise noise;
  noise.p = cfg.p.value_or(8);
  noise.alpha = cfg.alpha.value_or(0.5);
  require(noise.alpha > 0.0 && noise.alpha < 1.0, "alpha: must lie in (0, 1)");
  noise.a = cfg.a.value_or(noise.alpha);
  require(std::abs(noise.a) <= noise.alpha, "a: |a| must not exceed alpha");
  require(noise.p > lambda_max_bound(noise.alpha),
          "p: must exceed 1/(1-alpha)^2 = " + format_number(lambda_max_bound(noise.alpha)));
  const double d = cfg.d.value_or(2.0);
  require(d > 0.0, "d: must be > 0");
  const std::uint64_t trials = checked_trials(cfg, 100000);
  const std::uint64_t seed = cfg.seed.value_or(1);
  const auto grid = grid_or_theta(cfg, noise.p, ball_grid(noise.p, d));

  const auto sweep = eigen_sweep(noise.p, noise.alpha, 101);
  const auto report = mc_risk_prop41(noise, d, grid, trials, seed, exec);
  Table t;
  echo_common(t, "risk-ar1", seed);
  t.echo("p", std::to_string(noise.p));
  t.echo("alpha", format_number(noise.alpha));
  t.echo("a", format_number(noise.a));
  t.echo("d", format_number(d));
  t.echo("trials", std::to_string(trials));
  t.echo("a_star", format_number(report.a_star));
  t.echo("gamma_p", format_number(report.gamma_p));
  t.echo("c", format_number(report.c));
  t.echo("bound", format_number(report.bound));
  t.echo("eigen_max_lambda_max", format_number(sweep.max_lambda_max));
  t.echo("eigen_min_trace_gap", format_number(sweep.min_trace_gap));
  t.echo("eigen_status", verdict(sweep.pass));
  t.columns = kSweepColumns;
  t.pass = add_sweep_rows(t, report.sweep, report.bound) && sweep.pass;
  return t;
}

Table cmd_verify_appendix(const ExperimentConfig& cfg, Execution exec) {
  const int p = cfg.p.value_or(3);
  require(p >= 1, "p: must be >= 1");
  const int n = cfg.n.value_or(5);
  require(n >= 1, "n: must be >= 1");
  const NoiseParams params = noise_from(cfg, -1.0, 1.0, 0.7, 1.0);
  const double step = checked_step(cfg);
  const std::uint64_t paths = checked_trials(cfg, 100000);
  const std::uint64_t samples = cfg.samples.value_or(100);
  require(samples >= 2, "samples: must be >= 2");
  const std::uint64_t seed = cfg.seed.value_or(1);
  const TrigBasis basis(p);

  Table t;
  echo_common(t, "verify-appendix", seed);
  t.echo("p", std::to_string(p));
  t.echo("n", std::to_string(n));
  echo_noise(t, params);
  t.echo("step", format_number(step));
  t.echo("trials", std::to_string(paths));
  t.echo("samples", std::to_string(samples));
  const JumpRecord jumps = frozen_jumps(params, n, seed);
  std::vector<double> times = jumps.times;
  t.echo("frozen_jump_times", times.empty() ? "none" : format_vector(times));
  

  t.columns = {"check", "case", "estimate", "half_width", "reference", "status"};
  auto emit = [&t](const std::vector<CheckRow>& rows) {
    for (const auto& r : rows) {
      t.pass = t.pass && r.pass;
      t.add_row({r.check, r.label, format_number(r.estimate), format_number(r.half_width),
                 format_number(r.reference), verdict(r.pass)});
    }
  };
  emit(verify_second_moments(basis, params, n, step, paths, substream_seed(seed, kUnconditionalStream), exec));
  emit(verify_conditional_moments(basis, params, jumps, n, step, paths,
                                  substream_seed(seed, kConditionalStream), exec));

  const std::uint64_t eigen_seed = substream_seed(seed, kEigenStream);
  const auto lower = sweep_min_eigenvalue(basis, params, n, samples, eigen_seed, exec);
  const bool lower_ok = lower.failures == 0;
  t.pass = t.pass && lower_ok;
  t.add_row({"min_eigenvalue_lower_bound",
             "failures=" + std::to_string(lower.failures) + "/" + std::to_string(lower.samples) +
                 " worst_sample=" + std::to_string(lower.worst_sample) + " jump_times=" +
                 (lower.worst_jumps.empty() ? "none" : format_vector(lower.worst_jumps.times)),
             format_number(lower.min_eigenvalue), "", format_number(lower.threshold), verdict(lower_ok)});

  const auto upper = check_lemma_55(basis, params, n, samples, eigen_seed, exec);
  t.pass = t.pass && upper.pass;
  t.add_row({"mean_max_eigenvalue_bound", "samples=" + std::to_string(upper.samples),
             format_number(upper.mean_lambda_max), format_number(upper.half_width), format_number(upper.bound),
             verdict(upper.pass)});
  return t;
}

}  // namespace levyshrink
