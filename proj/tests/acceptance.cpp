// Acceptance suite: one PASS/FAIL line per criterion, then a summary.
// Every tolerance, seed and trial count is pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "levyshrink/ar1.hpp"
#include "levyshrink/condgauss.hpp"
#include "levyshrink/experiments.hpp"
#include "levyshrink/regression.hpp"
#include "levyshrink/report.hpp"
#include "levyshrink/special.hpp"

using namespace levyshrink;

namespace {

constexpr std::uint64_t kSeed = 20240601;
constexpr double kClosedFormTol = 1e-9;
constexpr double kLimitTol = 0.002;
constexpr std::uint64_t kRiskTrials = 1000000;
constexpr std::uint64_t kPaths = 100000;
constexpr double kStep = 1e-3;
constexpr double kLemma54Slack = 1e-6;  // applied inside check_lemma_54
constexpr std::uint64_t kLemma54Configs = 100;
constexpr std::uint64_t kLemma55Configs = 1000;
constexpr std::uint64_t kOuTrials = 100000;
constexpr std::uint64_t kDeterminismOuTrials = 10000;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void note(bool ok, std::string line) {
    pass = pass && ok;
    details.push_back(fmt::format("    [{}] {}", ok ? "ok" : "FAIL", line));
  }
};

int failures = 0;

void criterion(const std::string& id, const std::string& title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  const Outcome out = body();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(), secs);
  for (const auto& line : out.details) std::printf("%s\n", line.c_str());
  std::fflush(stdout);
  if (!out.pass) ++failures;
}

std::string sweep_line(const DeltaPoint& pt, double bound) {
  return fmt::format("|theta|={:.3g} delta={:.6g} +-{:.3g} bound={:.6g}", pt.theta.norm(), pt.delta,
                     pt.half_width, bound);
}

Outcome risk_at_origin_closed_form() {
  Outcome out;
  const double r2 = risk_at_zero_rp(2), r3 = risk_at_zero_rp(3);
  out.note(std::abs(r2 - (2.0 - std::numbers::pi / 2.0)) <= kClosedFormTol, fmt::format("r_2={:.15g}", r2));
  out.note(std::abs(r3 - (3.0 - 8.0 / std::numbers::pi)) <= kClosedFormTol, fmt::format("r_3={:.15g}", r3));
  bool increasing = true;
  for (int p = 3; p <= 100; ++p) increasing = increasing && risk_at_zero_rp(p) > risk_at_zero_rp(p - 1);
  out.note(increasing, "r_p strictly increasing on p=2..100");
  const double r100 = risk_at_zero_rp(100);
  out.note(std::abs(r100 - 0.5) <= kLimitTol, fmt::format("r_100={:.9g}", r100));
  return out;
}

Outcome figure1_reproduction() {
  Outcome out;
  ExperimentConfig cfg;
  cfg.p_min = 2;
  cfg.p_max = 20;
  const auto table = cmd_figure1(cfg);
  bool curves = table.rows.size() == 19;
  for (const auto& row : table.rows) {
    const int p = std::stoi(row[0]);
    curves = curves && row[1] == format_number(risk_at_zero_rp(p)) && row[2] == "2" && row[3] == row[0];
  }
  out.note(curves, "figure1 table: r_p, js_risk=2, lse_risk=p for p=2..20");
  out.note(figure1_svg(cfg).find("<polyline") != std::string::npos, "figure1 SVG has polylines");

  for (int p : {2, 3, 5, 10}) {
    const CondGaussModel model(Vector::Zero(p), CovarianceSource::fixed(Matrix::Identity(p, p)));
    const double c = (p - 1) * gamma_p_origin_limit(p, 1.0);
    const auto r = mc_risk({EstimatorKind::Shrinkage, c}, model, kRiskTrials, kSeed + p);
    out.note(std::abs(r.empirical_risk - risk_at_zero_rp(p)) <= r.half_width,
             fmt::format("p={} shrink risk {:.6g} +-{:.3g} vs r_p={:.6g}", p, r.empirical_risk, r.half_width,
                         risk_at_zero_rp(p)));
    if (p >= 3) {
      const auto js = mc_risk({EstimatorKind::JamesStein, p - 2.0}, model, kRiskTrials, kSeed + 100 + p);
      out.note(std::abs(js.empirical_risk - 2.0) <= js.half_width,
               fmt::format("p={} James-Stein risk {:.6g} +-{:.3g} vs 2", p, js.empirical_risk, js.half_width));
    }
  }
  return out;
}

Outcome cond_gauss_domination() {
  Outcome out;
  const int p = 5;
  const auto cfg = ShrinkageConfig::theorem21(p, 2.0, 0.5, 0.5);
  const auto source = CovarianceSource::fixed(0.5 * Matrix::Identity(p, p));
  const auto sweep = sup_delta_over_grid(source, cfg, ball_grid(p, 2.0), kRiskTrials, kSeed);
  out.note(sweep.points.size() == 9, "9-point grid in the ball of radius 2");
  for (const auto& pt : sweep.points) out.note(pt.delta <= cfg.bound() + pt.half_width, sweep_line(pt, cfg.bound()));
  return out;
}

Outcome isometry() {
  Outcome out;
  const TrigBasis basis(3);
  for (double a : {0.0, -0.5, -2.0}) {
    const NoiseParams params{a, 1.0, 0.7, 1.0};
    for (const auto& row : verify_second_moments(basis, params, 5, kStep, kPaths, kSeed, Execution::Parallel)) {
      out.note(row.pass, fmt::format("a={} {} ({}) mc={:.6g} +-{:.3g} ref={:.6g}", a, row.check, row.label,
                                     row.estimate, row.half_width, row.reference));
    }
  }
  return out;
}

Outcome conditional_covariance_check() {
  Outcome out;
  const NoiseParams params{-1.0, 1.0, 0.7, 1.0};
  const auto jumps = frozen_jumps(params, 5, kSeed);
  out.note(true, "frozen jump times: " + (jumps.empty() ? std::string("none") : format_vector(jumps.times)));
  for (const auto& row : verify_conditional_moments(TrigBasis(3), params, jumps, 5, kStep, kPaths, kSeed + 1,
                                                    Execution::Parallel)) {
    out.note(row.pass, fmt::format("{} ({}) mc={:.6g} +-{:.3g} ref={:.6g}", row.check, row.label, row.estimate,
                                   row.half_width, row.reference));
  }
  return out;
}

Outcome eigenvalue_lemmas() {
  Outcome out;
  const TrigBasis basis(5);
  for (double a : {0.0, -1.0}) {
    const NoiseParams params{a, 1.0, 0.7, 1.0};
    const auto s = sweep_min_eigenvalue(basis, params, 10, kLemma54Configs, kSeed, Execution::Parallel);
    out.note(s.failures == 0,
             fmt::format("lower bound a={}: {}/{} configurations fail, min eigenvalue {:.6g} vs {:.6g} "
                         "(worst sample {}, {} jumps)",
                         a, s.failures, s.samples, s.min_eigenvalue, 1.0 - kLemma54Slack, s.worst_sample,
                         s.worst_jumps.size()));
  }
  const NoiseParams params{-1.0, 1.0, 0.7, 2.0};
  const auto r = check_lemma_55(basis, params, 10, kLemma55Configs, kSeed);
  out.note(r.pass, fmt::format("upper bound: mean lambda_max {:.6g} +-{:.3g} vs 3 p rho* = {:.6g}",
                               r.mean_lambda_max, r.half_width, r.bound));
  return out;
}

RegressionExperiment ou_experiment(std::uint64_t trials) {
  RegressionExperiment exp;
  exp.basis = TrigBasis(3);
  exp.noise = {-1.0, 1.0, 0.5, 1.0};
  exp.n = 10;
  exp.d = 2.0;
  exp.trials = trials;
  exp.seed = kSeed;
  exp.step = kStep;
  exp.theta = Vector::Zero(3);
  return exp;
}

Outcome ou_domination() {
  Outcome out;
  const auto exp = ou_experiment(kOuTrials);
  const auto report = mc_risk_thm31(exp, ray_grid(3, exp.d));
  out.note(true, fmt::format("gamma scaling per-horizon: a*={:.6g} gamma_p={:.6g} c={:.6g}", report.a_star,
                             report.gamma_p, report.c));
  for (const auto& pt : report.sweep.points) out.note(pt.delta + pt.half_width < 0.0, sweep_line(pt, report.bound));
  return out;
}

Outcome ar1_domination() {
  Outcome out;
  const Ar1Noise noise{0.5, 0.5, 8};
  const auto report = mc_risk_prop41(noise, 2.0, ball_grid(8, 2.0), kRiskTrials, kSeed);
  for (const auto& pt : report.sweep.points) out.note(pt.delta <= report.bound + pt.half_width, sweep_line(pt, report.bound));
  const auto sweep = eigen_sweep(8, 0.5, 201);
  out.note(sweep.max_lambda_max <= 4.0, fmt::format("max lambda_max over |a|<=0.5: {:.9g}", sweep.max_lambda_max));
  out.note(sweep.min_trace_gap >= 4.0, fmt::format("min tr - lambda_max: {:.9g}", sweep.min_trace_gap));
  return out;
}

Outcome determinism() {
  Outcome out;
  ExperimentConfig cg;
  cg.trials = kRiskTrials;
  cg.seed = kSeed;
  ExperimentConfig ou;
  ou.trials = kDeterminismOuTrials;
  ou.seed = kSeed;
  for (const auto& [name, run] :
       std::vector<std::pair<std::string, std::function<Table()>>>{
           {"risk-cond-gauss", [&] { return cmd_risk_cond_gauss(cg); }},
           {"risk-ou", [&] { return cmd_risk_ou(ou); }}}) {
    set_worker_count(1);
    const auto one = to_csv(run());
    set_worker_count(4);
    const auto four = to_csv(run());
    const auto again = to_csv(run());
    set_worker_count(0);
    out.note(one == four && four == again, fmt::format("{}: 1 vs 4 workers and rerun byte-identical ({} bytes)",
                                                      name, one.size()));
  }
  const auto serial = to_csv(cmd_risk_cond_gauss(cg, Execution::Serial));
  out.note(serial == to_csv(cmd_risk_cond_gauss(cg)), "risk-cond-gauss: serial reference equals parallel");
  return out;
}

}  // namespace

int main() {
  criterion("C1", "closed-form risk at the origin", risk_at_origin_closed_form);
  criterion("C2", "figure 1 curves and Monte Carlo risks at the origin", figure1_reproduction);
  criterion("C3", "conditionally Gaussian domination bound, D = 0.5 I_5", cond_gauss_domination);
  criterion("C4", "second-moment isometry and its 3 rho* n bound", isometry);
  criterion("C5", "conditional mean and covariance with frozen jump times", conditional_covariance_check);
  criterion("C6", "eigenvalue bounds of the conditional covariance", eigenvalue_lemmas);
  criterion("C7", "OU Levy regression: shrinkage dominates least squares", ou_domination);
  criterion("C8", "AR(1) domination bound and eigenvalue sweep", ar1_domination);
  criterion("C9", "byte-identical CSV across reruns and worker counts", determinism);
  std::printf("SUMMARY: %d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
