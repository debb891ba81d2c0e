#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "levyshrink/config.hpp"
#include "levyshrink/experiments.hpp"
#include "levyshrink/report.hpp"
#include "levyshrink/trials.hpp"

namespace {

using levyshrink::ExperimentConfig;

enum ExitCode { kPass = 0, kFail = 1, kConfigError = 2, kIoError = 3 };

template <class T>
void bind_option(CLI::App* app, const std::string& flag, std::optional<T>& field, const std::string& help) {
  app->add_option_function<T>(flag, [&field](const T& v) { field = v; }, help);
}

void add_common_flags(CLI::App* app, ExperimentConfig& cfg, std::string& theta_text,
                      std::string& config_path) {
  bind_option(app, "--p", cfg.p, "dimension (number of basis functions)");
  bind_option(app, "--n", cfg.n, "observation horizon");
  bind_option(app, "--trials", cfg.trials, "Monte Carlo trials");
  bind_option(app, "--seed", cfg.seed, "master seed");
  app->add_option("--theta", theta_text, "single parameter point, comma separated");
  bind_option(app, "--d", cfg.d, "radius of the parameter ball");
  bind_option(app, "--rho1", cfg.rho1, "Brownian scale");
  bind_option(app, "--rho2", cfg.rho2, "jump scale");
  bind_option(app, "--lambda", cfg.lambda, "jump intensity");
  bind_option(app, "--a", cfg.a, "mean reversion (AR(1) coefficient for risk-ar1)");
  bind_option(app, "--alpha", cfg.alpha, "AR(1) coefficient bound");
  bind_option(app, "--step", cfg.step, "path grid step");
  bind_option(app, "--out", cfg.out, "output file (stdout if omitted)");
  app->add_option_function<std::string>(
         "--format", [&cfg](const std::string& v) { cfg.format = v; }, "csv or svg")
      ->check(CLI::IsMember({"csv", "svg"}));
  bind_option(app, "--p-min", cfg.p_min, "smallest p (figure1)");
  bind_option(app, "--p-max", cfg.p_max, "largest p (figure1)");
  bind_option(app, "--samples", cfg.samples, "jump configurations for the eigenvalue checks");
  bind_option(app, "--lambda-star", cfg.lambda_star, "lower eigenvalue bound of the noise covariance");
  bind_option(app, "--a-star", cfg.a_star, "upper bound on E lambda_max");
  app->add_option_function<std::string>(
         "--covariance", [&cfg](const std::string& v) { cfg.covariance = v; },
         "scaled-identity or random")
      ->check(CLI::IsMember({"scaled-identity", "random"}));
  app->add_option_function<std::string>(
         "--gamma-scaling", [&cfg](const std::string& v) { cfg.gamma_scaling = v; },
         "per-horizon or unscaled")
      ->check(CLI::IsMember({"per-horizon", "unscaled"}));
  bind_option(app, "--threads", cfg.threads, "worker threads (results do not depend on it)");
  app->add_option("--config", config_path, "JSON config file; flags override it");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shrinkage estimation for regression with Ornstein-Uhlenbeck Levy noise"};
  app.require_subcommand(1);

  ExperimentConfig flags;
  std::string theta_text;
  std::string config_path;

  using Runner = std::function<levyshrink::Table(const ExperimentConfig&)>;
  const std::map<std::string, std::pair<std::string, Runner>> commands = {
      {"figure1", {"risk at the origin against p", [](const auto& c) { return levyshrink::cmd_figure1(c); }}},
      {"gamma-p", {"closed form against quadrature for gamma_p", levyshrink::cmd_gamma_p}},
      {"risk-cond-gauss",
       {"shrinkage against LSE, conditionally Gaussian model",
        [](const auto& c) { return levyshrink::cmd_risk_cond_gauss(c); }}},
      {"risk-ou",
       {"shrinkage against LSE, OU Levy regression", [](const auto& c) { return levyshrink::cmd_risk_ou(c); }}},
      {"risk-ar1",
       {"shrinkage against LSE, AR(1) noise", [](const auto& c) { return levyshrink::cmd_risk_ar1(c); }}},
      {"verify-appendix",
       {"moment identities and eigenvalue bounds of the stochastic integrals",
        [](const auto& c) { return levyshrink::cmd_verify_appendix(c); }}},
  };
  for (const auto& [name, entry] : commands)
    add_common_flags(app.add_subcommand(name, entry.first), flags, theta_text, config_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  ExperimentConfig cfg;
  try {
    if (!theta_text.empty()) flags.theta = levyshrink::parse_vector(theta_text);
    cfg = config_path.empty() ? flags : levyshrink::load_config_file(config_path).merged_with(flags);
    if (cfg.threads) {
      if (*cfg.threads < 1) throw levyshrink::ConfigError("threads: must be >= 1");
      levyshrink::set_worker_count(*cfg.threads);
    }
  } catch (const levyshrink::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::runtime_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  }

  const std::string format = cfg.format.value_or("csv");
  std::string output;
  bool pass = true;
  try {
    if (format == "svg") {
      if (name != "figure1") throw levyshrink::ConfigError("format: svg is only available for figure1");
      output = levyshrink::figure1_svg(cfg);
    } else {
      const auto table = commands.at(name).second(cfg);
      output = levyshrink::to_csv(table);
      pass = table.pass;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }

  try {
    if (cfg.out) {
      levyshrink::write_file(*cfg.out, output);
    } else {
      std::cout << output;
      std::cout.flush();
      if (!std::cout) throw std::runtime_error("failed writing to stdout");
    }
  } catch (const std::exception& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  }
  if (!pass) std::cerr << name << ": at least one check FAILED\n";
  return pass ? kPass : kFail;
}
