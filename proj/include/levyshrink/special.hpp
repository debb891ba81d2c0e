#pragma once

// Special functions and the lower-bound constant gamma_p for E(1/|Y|).

namespace levyshrink {

/// Inputs of gamma_p: dimension, radius d of the parameter ball and the
/// bound a* on the expected largest noise-covariance eigenvalue.
class GammaPInputs {
 public:
  /// Throws std::domain_error unless p >= 2, d > 0 and a_star > 0.
  GammaPInputs(int p, double d, double a_star);

  int p() const { return p_; }
  double d() const { return d_; }
  double a_star() const { return a_star_; }
  /// d / sqrt(a*), recomputed on every call.
  double mu() const;

 private:
  int p_;
  double d_;
  double a_star_;
};

/// Gamma function for x > 0 (std::domain_error otherwise).
double gamma_fn(double x);

/// I(a) = integral_0^inf exp(-r^2/2) / (a + r) dr for a > 0.
///
/// The integral diverges logarithmically at a = 0, so a <= 0 is a
/// std::domain_error. The range is cut at r = 9, where the neglected tail is
/// below exp(-40.5) / 81 < 1e-16; the rest is adaptive Gauss-Kronrod at
/// absolute tolerance 1e-10.
double integral_I(double a);

/// gamma_p via the alternating sum
///   [sum_{j=0}^{p-2} 2^{(j-1)/2} (-1)^{p-j} mu^{p-1-j} Gamma((j+1)/2) - (-mu)^p I(mu)]
///   / (2^{p/2-1} Gamma(p/2) d).
/// Loses precision quickly beyond p ~ 20; kept as a cross-check.
double gamma_p_closed(const GammaPInputs& inp);

/// gamma_p = mu / (2^{p/2-1} Gamma(p/2) d) * integral_0^inf r^{p-1} e^{-r^2/2} / (mu + r) dr.
/// Canonical route. The normalisation is folded into the integrand in log
/// space, so large p neither overflows nor cancels.
double gamma_p_quadrature(const GammaPInputs& inp);

/// Limit of gamma_p as d -> 0 (parameter set {0}):
///   Gamma((p-1)/2) / (sqrt(2 a*) Gamma(p/2)) = E(1/|Y|) for Y ~ N(0, a* I_p).
double gamma_p_origin_limit(int p, double a_star);

/// r_p = p - [(p-1) Gamma((p-1)/2) / (sqrt(2) Gamma(p/2))]^2, the risk at
/// theta = 0 of the shrinkage estimator under N(0, I_p) noise.
double risk_at_zero_rp(int p);

}  // namespace levyshrink
