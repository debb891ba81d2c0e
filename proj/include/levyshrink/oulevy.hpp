#pragma once

// Ornstein-Uhlenbeck noise driven by u = rho1 w + rho2 z, with z a compound
// Poisson process of N(0,1) marks: simulation, stochastic integrals, and the
// first and second conditional moments of those integrals given the jumps.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "levyshrink/condgauss.hpp"
#include "levyshrink/rng.hpp"
#include "levyshrink/trials.hpp"

namespace levyshrink {

using Function = std::function<double(double)>;

struct NoiseParams {
  double a = 0.0;       // mean reversion, a <= 0
  double rho1 = 1.0;    // Brownian scale, > 0
  double rho2 = 0.0;    // jump scale, >= 0
  double lambda = 1.0;  // jump intensity, > 0

  /// rho1^2 + lambda rho2^2, the variance rate of u.
  double rho_star() const { return rho1 * rho1 + lambda * rho2 * rho2; }
  /// std::domain_error naming the offending field.
  void validate() const;
};

/// phi_1 = 1, phi_{2k}(t) = sqrt(2) cos(2 pi k t), phi_{2k+1}(t) = sqrt(2) sin(2 pi k t).
/// Indices here are zero-based: index j is phi_{j+1}.
class TrigBasis {
 public:
  explicit TrigBasis(int p);

  int size() const { return p_; }
  double operator()(int j, double t) const;
  /// All p values at t, through one sincos and the angle-addition recurrence.
  void evaluate_all(double t, std::span<double> out) const;
  Function function(int j) const;
  /// Largest angular frequency 2 pi floor(p/2).
  double max_frequency() const;

 private:
  int p_;
};

/// Jump times of the Poisson process on [0, n] and their marks. Together
/// they are the conditioning information G.
struct JumpRecord {
  std::vector<double> times;  // strictly increasing
  std::vector<double> marks;  // standard normal

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

/// Discretised path. A jump at T appears as two grid entries with the same
/// time T holding the values just before and after the jump, so a left-point
/// sum weighs the jump with f(T).
struct SimulatedPath {
  std::vector<double> grid;
  std::vector<double> xi;
  std::vector<double> u_increments;  // one per cell, empty unless recorded
  JumpRecord jumps;
};

struct PathOptions {
  double step = 1e-3;
  bool record_u = true;  // draws one extra normal per cell for exact u increments
};

/// K ~ Poisson(lambda n) sorted uniform times on [0, n], then K N(0,1) marks.
JumpRecord sample_jumps(const NoiseParams& params, int n, Engine& rng);

/// Same jump times with fresh N(0,1) marks. G holds only the times, so
/// paths conditioned on G redraw the marks.
JumpRecord resample_marks(const JumpRecord& jumps, Engine& rng);

/// Exact Gaussian OU transitions between grid points, xi_0 = 0, jumps of
/// rho2 Y_l inserted at T_l. With `jumps` given the path is conditioned on
/// them; otherwise they are sampled first from `rng`.
SimulatedPath simulate_path(const NoiseParams& params, int n, const PathOptions& options,
                            Engine& rng, const std::optional<JumpRecord>& jumps = std::nullopt);

/// Left-point sum sum_k f(t_k) (xi_{k+1} - xi_k) over the path grid.
double stochastic_integral(const SimulatedPath& path, const Function& f);

/// I_n(phi_j) for every basis function without storing the path. Consumes
/// `rng` exactly like simulate_path with record_u = false.
Vector basis_integrals(const NoiseParams& params, const TrigBasis& basis, int n, double step,
                       Engine& rng, const JumpRecord* jumps = nullptr);

/// a integral_0^t exp(a (t - v)) f(v) (1 + exp(2 a v)) dv.
double epsilon_f(const Function& f, double a, double t);

/// 1/2 integral_0^t (2 f g + f eps_g + eps_f g) ds.
double tau_fg(const Function& f, const Function& g, double a, double t);

/// a exp(a x) (f(z) + a integral_0^x exp(a v) f(v + z) dv).
double L_transform(const Function& f, double a, double x, double z);

/// E I_t(f) I_t(g) = rho* tau_fg(t).
double second_moment_unconditional(const Function& f, const Function& g,
                                   const NoiseParams& params, double t);

struct ConditionalCovariance {
  Matrix matrix;
  int n = 0;
  int p = 0;
  JumpRecord jumps;
};

/// V_n(G) = cov(zeta(n) | G), zeta_j(n) = n^{-1/2} I_n(phi_j), from the four
/// terms: orthonormality, the deterministic eps correction, jump outer
/// products, and the jump-OU interaction integrals over [T_l, n].
ConditionalCovariance conditional_covariance(const TrigBasis& basis, const NoiseParams& params,
                                             const JumpRecord& jumps, int n);

struct Lemma54Result {
  bool pass = false;
  double min_eigenvalue = 0.0;
  double threshold = 0.0;  // rho1^2 - 1e-6
  JumpRecord jumps;        // kept for reproducing failures
};

/// lambda_min(V) >= rho1^2 - 1e-6.
Lemma54Result check_lemma_54(const ConditionalCovariance& v, const NoiseParams& params);

struct Lemma55Result {
  double mean_lambda_max = 0.0;
  double half_width = 0.0;
  double bound = 0.0;  // 3 p rho*
  std::uint64_t samples = 0;
  bool pass = false;   // mean - 3 sigma <= bound
};

/// Averages lambda_max(V_n(G)) over `samples` jump records drawn from
/// substreams of `seed`.
Lemma55Result check_lemma_55(const TrigBasis& basis, const NoiseParams& params, int n,
                             std::uint64_t samples, std::uint64_t seed,
                             Execution exec = Execution::Parallel);

}  // namespace levyshrink
