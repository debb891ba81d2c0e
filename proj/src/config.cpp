#include "levyshrink/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace levyshrink {
namespace {

template <class T>
void take(std::optional<T>& dst, const std::optional<T>& src) {
  if (src) dst = src;
}

template <class T>
std::optional<T> read(const nlohmann::json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::merged_with(const ExperimentConfig& over) const {
  ExperimentConfig c = *this;
  take(c.p, over.p);
  take(c.p_min, over.p_min);
  take(c.p_max, over.p_max);
  take(c.n, over.n);
  take(c.threads, over.threads);
  take(c.trials, over.trials);
  take(c.samples, over.samples);
  take(c.seed, over.seed);
  take(c.theta, over.theta);
  take(c.d, over.d);
  take(c.rho1, over.rho1);
  take(c.rho2, over.rho2);
  take(c.lambda, over.lambda);
  take(c.a, over.a);
  take(c.alpha, over.alpha);
  take(c.lambda_star, over.lambda_star);
  take(c.a_star, over.a_star);
  take(c.step, over.step);
  take(c.out, over.out);
  take(c.format, over.format);
  take(c.covariance, over.covariance);
  take(c.gamma_scaling, over.gamma_scaling);
  return c;
}

ExperimentConfig parse_config_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
  ExperimentConfig c;
  for (const auto& [raw_key, value] : doc.items()) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '-', '_');
    if (key == "p") c.p = read<int>(value, key);
    else if (key == "p_min") c.p_min = read<int>(value, key);
    else if (key == "p_max") c.p_max = read<int>(value, key);
    else if (key == "n") c.n = read<int>(value, key);
    else if (key == "threads") c.threads = read<int>(value, key);
    else if (key == "trials") c.trials = read<std::uint64_t>(value, key);
    else if (key == "samples") c.samples = read<std::uint64_t>(value, key);
    else if (key == "seed") c.seed = read<std::uint64_t>(value, key);
    else if (key == "theta") {
      if (value.is_string()) c.theta = parse_vector(value.get<std::string>());
      else c.theta = read<std::vector<double>>(value, key);
    }
    else if (key == "d") c.d = read<double>(value, key);
    else if (key == "rho1") c.rho1 = read<double>(value, key);
    else if (key == "rho2") c.rho2 = read<double>(value, key);
    else if (key == "lambda") c.lambda = read<double>(value, key);
    else if (key == "a") c.a = read<double>(value, key);
    else if (key == "alpha") c.alpha = read<double>(value, key);
    else if (key == "lambda_star") c.lambda_star = read<double>(value, key);
    else if (key == "a_star") c.a_star = read<double>(value, key);
    else if (key == "step") c.step = read<double>(value, key);
    else if (key == "out") c.out = read<std::string>(value, key);
    else if (key == "format") c.format = read<std::string>(value, key);
    else if (key == "covariance") c.covariance = read<std::string>(value, key);
    else if (key == "gamma_scaling") c.gamma_scaling = read<std::string>(value, key);
    else throw ConfigError("unknown config key '" + raw_key + "'");
  }
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("theta: cannot parse '" + item + "' as a number");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw ConfigError("theta: trailing characters in '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("theta: empty vector");
  return out;
}

}  // namespace levyshrink
