#include "levyshrink/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "levyshrink/quadrature.hpp"

namespace levyshrink {
namespace {

constexpr double kQuadTol = 1e-10;
constexpr double kTailRadius = 9.0;

void require_dimension(int p, const char* who) {
  if (p < 2) throw std::domain_error(std::string(who) + ": p must be >= 2, got " + std::to_string(p));
}

// log of 2^{p/2-1} Gamma(p/2), the chi_p normalising constant.
double log_chi_norm(int p) {
  return (0.5 * p - 1.0) * std::numbers::ln2 + std::lgamma(0.5 * p);
}

// Ratio Gamma((p-1)/2) / Gamma(p/2).
double half_gamma_ratio(int p) {
  if (p <= 170) return gamma_fn(0.5 * (p - 1)) / gamma_fn(0.5 * p);
  return std::exp(std::lgamma(0.5 * (p - 1)) - std::lgamma(0.5 * p));
}

}  // namespace

GammaPInputs::GammaPInputs(int p, double d, double a_star) : p_(p), d_(d), a_star_(a_star) {
  require_dimension(p, "GammaPInputs");
  if (!(d > 0.0)) throw std::domain_error("GammaPInputs: d must be > 0");
  if (!(a_star > 0.0)) throw std::domain_error("GammaPInputs: a_star must be > 0");
}

double GammaPInputs::mu() const { return d_ / std::sqrt(a_star_); }

double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_fn: x must be > 0, got " + std::to_string(x));
  return std::tgamma(x);
}

double integral_I(double a) {
  if (!(a > 0.0)) {
    throw std::domain_error("integral_I: a must be > 0 (the integral diverges at a = 0)");
  }
  const auto f = [a](double r) { return std::exp(-0.5 * r * r) / (a + r); };
  return quad::integrate(f, 0.0, kTailRadius, kQuadTol).value;
}

double gamma_p_closed(const GammaPInputs& inp) {
  const int p = inp.p();
  const double mu = inp.mu();
  double sum = 0.0;
  for (int j = 0; j <= p - 2; ++j) {
    const double sign = ((p - j) % 2 == 0) ? 1.0 : -1.0;
    sum += std::pow(2.0, 0.5 * (j - 1)) * sign * std::pow(mu, p - 1 - j) *
           gamma_fn(0.5 * (j + 1));
  }
  sum -= std::pow(-mu, p) * integral_I(mu);
  return sum / (std::pow(2.0, 0.5 * p - 1.0) * gamma_fn(0.5 * p) * inp.d());
}

double gamma_p_quadrature(const GammaPInputs& inp) {
  const int p = inp.p();
  const double mu = inp.mu();
  const double log_norm = log_chi_norm(p);
  const auto f = [p, mu, log_norm](double r) {
    if (r == 0.0) return p == 1 ? 1.0 / mu : 0.0;
    return std::exp((p - 1) * std::log(r) - 0.5 * r * r - log_norm) / (mu + r);
  };
  // The chi_p density is concentrated near sqrt(p - 1); 10 units past that
  // the tail is far below the tolerance.
  const double radius = std::max(kTailRadius, std::sqrt(p - 1.0) + 10.0);
  const double scaled = quad::integrate(f, 0.0, radius, kQuadTol).value;
  return mu / inp.d() * scaled;
}

double gamma_p_origin_limit(int p, double a_star) {
  require_dimension(p, "gamma_p_origin_limit");
  if (!(a_star > 0.0)) throw std::domain_error("gamma_p_origin_limit: a_star must be > 0");
  return half_gamma_ratio(p) / std::sqrt(2.0 * a_star);
}

double risk_at_zero_rp(int p) {
  require_dimension(p, "risk_at_zero_rp");
  const double ratio = (p - 1) * half_gamma_ratio(p) / std::numbers::sqrt2;
  return p - ratio * ratio;
}

}  // namespace levyshrink
