#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "levyshrink/config.hpp"
#include "levyshrink/experiments.hpp"
#include "levyshrink/report.hpp"
#include "levyshrink/special.hpp"

using namespace levyshrink;

namespace {

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_vector({1.0, -2.5}) == "1;-2.5");
}

TEST_CASE("csv layout: comments, header, quoting") {
  Table t;
  t.echo("seed", "7");
  t.columns = {"name", "value"};
  t.add_row({"a,b", "1"});
  t.add_row({"say \"hi\"", "2"});
  const std::string csv = to_csv(t);
  CHECK(csv == "# seed=7\r\nname,value\r\n\"a,b\",1\r\n\"say \"\"hi\"\"\",2\r\n");
  CHECK_THROWS(t.add_row({"only one"}));
}

TEST_CASE("svg chart is a self-contained document") {
  const auto svg = line_chart_svg("t", "x", "y", {{"s", "#000", {{0, 0}, {1, 1}}}});
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("viewBox=\"0 0 640 400\"") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("config json parsing and merging") {
  const auto cfg = parse_config_json(R"({"p": 4, "rho1": 0.5, "p-min": 3, "gamma_scaling": "unscaled",
                                          "theta": [1, 0.5, 0, 0], "seed": 9})");
  CHECK(*cfg.p == 4);
  CHECK(*cfg.rho1 == 0.5);
  CHECK(*cfg.p_min == 3);
  CHECK(*cfg.gamma_scaling == "unscaled");
  CHECK(cfg.theta->size() == 4);
  ExperimentConfig flags;
  flags.p = 6;
  const auto merged = cfg.merged_with(flags);
  CHECK(*merged.p == 6);
  CHECK(*merged.seed == 9);
  CHECK_THROWS_WITH_AS(parse_config_json(R"({"bogus": 1})"), doctest::Contains("bogus"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"p": "five"})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/levyshrink.json"), std::runtime_error);
  CHECK(parse_vector("1, -0.5,2") == std::vector<double>{1.0, -0.5, 2.0});
  CHECK_THROWS_AS(parse_vector("1,x"), ConfigError);
}

TEST_CASE("figure1 table columns and values") {
  ExperimentConfig cfg;
  cfg.p_max = 5;
  const auto t = cmd_figure1(cfg);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.columns == std::vector<std::string>{"p", "r_p", "js_risk", "lse_risk"});
  CHECK(t.rows[0][1] == format_number(risk_at_zero_rp(2)));
  for (const auto& row : t.rows) {
    CHECK(row[2] == "2");
    CHECK(row[3] == row[0]);
  }
  CHECK(figure1_svg(cfg).find("James-Stein") != std::string::npos);
  cfg.p_min = 1;
  CHECK_THROWS_WITH_AS(cmd_figure1(cfg), doctest::Contains("p_min"), ConfigError);
}

TEST_CASE("gamma-p table cross-checks the two methods") {
  ExperimentConfig cfg;
  cfg.p = 24;
  const auto t = cmd_gamma_p(cfg);
  CHECK(t.pass);
  CHECK(t.rows.size() == 23);
  CHECK(t.rows.back().back() == "SKIP");
  CHECK(t.rows.front().back() == "PASS");
}

TEST_CASE("validation errors name the field") {
  ExperimentConfig cfg;
  cfg.trials = 10;
  CHECK_THROWS_WITH_AS(cmd_risk_cond_gauss(cfg), doctest::Contains("trials"), ConfigError);
  cfg = {};
  cfg.covariance = "diagonal";
  CHECK_THROWS_WITH_AS(cmd_risk_cond_gauss(cfg), doctest::Contains("covariance"), ConfigError);
  cfg = {};
  cfg.theta = std::vector<double>{1.0, 2.0};
  CHECK_THROWS_WITH_AS(cmd_risk_cond_gauss(cfg), doctest::Contains("theta"), ConfigError);
  cfg = {};
  cfg.a = 0.5;
  CHECK_THROWS_WITH_AS(cmd_risk_ou(cfg), doctest::Contains("a"), ConfigError);
  cfg = {};
  cfg.p = 4;
  CHECK_THROWS_WITH_AS(cmd_risk_ar1(cfg), doctest::Contains("p"), ConfigError);
  cfg = {};
  cfg.step = 0.1;
  CHECK_THROWS_WITH_AS(cmd_verify_appendix(cfg), doctest::Contains("step"), ConfigError);
}

TEST_CASE("risk tables are byte-identical across runs and worker counts") {
  ExperimentConfig cfg;
  cfg.trials = 4000;
  cfg.seed = 17;
  const auto a = to_csv(cmd_risk_cond_gauss(cfg, Execution::Serial));
  set_worker_count(4);
  const auto b = to_csv(cmd_risk_cond_gauss(cfg, Execution::Parallel));
  const auto c = to_csv(cmd_risk_cond_gauss(cfg, Execution::Parallel));
  set_worker_count(0);
  CHECK(a == b);
  CHECK(b == c);
  CHECK(a.find("# seed=17\r\n") != std::string::npos);
  CHECK(a.find("threads") == std::string::npos);
}

TEST_CASE("verify-appendix emits one summary row per eigenvalue lemma") {
  ExperimentConfig cfg;
  cfg.p = 2;
  cfg.n = 2;
  cfg.trials = 2000;
  cfg.samples = 10;
  cfg.step = 5e-3;
  cfg.a = 0.0;
  const auto t = cmd_verify_appendix(cfg);
  int lower = 0, upper = 0;
  for (const auto& row : t.rows) {
    lower += row[0] == "min_eigenvalue_lower_bound";
    upper += row[0] == "mean_max_eigenvalue_bound";
  }
  CHECK(lower == 1);
  CHECK(upper == 1);
}

#ifdef LEVYSHRINK_CLI_PATH
TEST_CASE("command line: exit codes and file output") {
  const auto dir = std::filesystem::temp_directory_path() / "levyshrink_cli_test";
  std::filesystem::create_directories(dir);
  const std::string cli = LEVYSHRINK_CLI_PATH;
  auto run = [&](const std::string& args) {
    const int status = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  const auto out1 = (dir / "a.csv").string();
  const auto out2 = (dir / "b.csv").string();
  CHECK(run("gamma-p --p 8 --out " + out1) == 0);
  CHECK(run("gamma-p --p 8 --out " + out2) == 0);
  CHECK(read_all(out1) == read_all(out2));
  CHECK(read_all(out1).rfind("# command=gamma-p", 0) == 0);

  const auto svg = (dir / "f.svg").string();
  CHECK(run("figure1 --format svg --out " + svg) == 0);
  CHECK(read_all(svg).find("<svg") != std::string::npos);

  const auto json = (dir / "cfg.json").string();
  std::ofstream(json) << R"({"trials": 2000, "seed": 4, "p": 3})";
  const auto from_file = (dir / "c.csv").string();
  const auto overridden = (dir / "d.csv").string();
  CHECK(run("risk-cond-gauss --config " + json + " --out " + from_file) == 0);
  CHECK(run("risk-cond-gauss --config " + json + " --p 4 --out " + overridden) == 0);
  CHECK(read_all(from_file).find("# p=3") != std::string::npos);
  CHECK(read_all(overridden).find("# p=4") != std::string::npos);

  CHECK(run("risk-cond-gauss --trials 5") == 2);
  CHECK(run("risk-ou --format svg") == 2);
  CHECK(run("gamma-p --out /nonexistent-dir/x.csv") == 3);
  CHECK(run("risk-cond-gauss --config /nonexistent.json") == 3);
  CHECK(run("no-such-command") == 2);
  std::filesystem::remove_all(dir);
}
#endif
