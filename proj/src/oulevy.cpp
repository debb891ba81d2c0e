#include "levyshrink/oulevy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/random/poisson_distribution.hpp>

#include "levyshrink/quadrature.hpp"

namespace levyshrink {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInnerTol = 1e-10;

void require_horizon(int n, const char* who) {
  if (n < 1) throw std::domain_error(std::string(who) + ": horizon n must be >= 1");
}

void validate_jumps(const JumpRecord& jumps) {
  if (jumps.times.size() != jumps.marks.size()) {
    throw std::invalid_argument("JumpRecord: times and marks differ in length");
  }
  for (std::size_t l = 1; l < jumps.times.size(); ++l) {
    if (!(jumps.times[l] > jumps.times[l - 1])) {
      throw std::invalid_argument("JumpRecord: jump times must be strictly increasing");
    }
  }
  if (!jumps.empty() && jumps.times.front() < 0.0) {
    throw std::invalid_argument("JumpRecord: negative jump time");
  }
}

// Exact transition of d xi = a xi dt + rho1 dw over a cell of width dt, and
// the regression of the Brownian increment on the OU innovation.
struct Transition {
  double decay = 1.0;
  double sd = 0.0;
  double w_on_z1 = 0.0;
  double w_residual = 0.0;
};

Transition make_transition(const NoiseParams& params, double dt, bool joint_u) {
  Transition tr;
  const double a = params.a;
  const double var = a == 0.0 ? dt : std::expm1(2.0 * a * dt) / (2.0 * a);
  tr.decay = std::exp(a * dt);
  tr.sd = params.rho1 * std::sqrt(var);
  if (joint_u && var > 0.0) {
    const double cov = a == 0.0 ? dt : std::expm1(a * dt) / a;
    tr.w_on_z1 = cov / std::sqrt(var);
    tr.w_residual = std::sqrt(std::max(0.0, dt - cov * cov / var));
  }
  return tr;
}

// Walks the discretised path and calls
//   visit(t_left, uniform_index_of_left_or_-1, xi_left, xi_right, t_right, du)
// once per cell, jump cells included. Random draws happen here only.
template <class Visitor>
void walk_path(const NoiseParams& params, int n, double step, const JumpRecord& jumps,
               bool joint_u, Engine& rng, Visitor&& visit) {
  const double horizon = n;
  long cells = std::lround(horizon / step);
  if (std::abs(cells * step - horizon) > 1e-9 * horizon) {
    cells = static_cast<long>(std::ceil(horizon / step));
  }
  const Transition uniform = make_transition(params, step, joint_u);

  auto advance = [&](const Transition& tr, double xi, double& du) {
    const double z1 = standard_normal(rng);
    if (joint_u) {
      const double z2 = standard_normal(rng);
      du = params.rho1 * (tr.w_on_z1 * z1 + tr.w_residual * z2);
    } else {
      du = 0.0;
    }
    return tr.decay * xi + tr.sd * z1;
  };

  double xi = 0.0;
  double t = 0.0;
  long left_index = 0;
  std::size_t l = 0;
  double du = 0.0;
  for (long k = 0; k < cells; ++k) {
    const double t_right = (k + 1 == cells) ? horizon : std::min(horizon, (k + 1) * step);
    while (l < jumps.size() && jumps.times[l] <= t_right) {
      const double jump_time = jumps.times[l];
      if (jump_time > t) {
        const double next = advance(make_transition(params, jump_time - t, joint_u), xi, du);
        visit(t, left_index, xi, next, jump_time, du);
        xi = next;
        t = jump_time;
        left_index = -1;
      }
      const double jump = params.rho2 * jumps.marks[l];
      visit(jump_time, -1L, xi, xi + jump, jump_time, jump);
      xi += jump;
      left_index = -1;
      ++l;
    }
    if (t_right > t) {
      const bool full_cell = left_index == k && k + 1 < cells;
      const double next =
          full_cell ? advance(uniform, xi, du)
                    : advance(make_transition(params, t_right - t, joint_u), xi, du);
      visit(t, left_index, xi, next, t_right, du);
      xi = next;
    }
    t = t_right;
    left_index = k + 1;
  }
}

void require_step(double step) {
  if (!(step > 0.0) || step > 1e-2) {
    throw std::domain_error("path step must lie in (0, 1e-2], got " + std::to_string(step));
  }
}

}  // namespace

void NoiseParams::validate() const {
  if (!(a <= 0.0)) throw std::domain_error("NoiseParams: a must be <= 0, got " + std::to_string(a));
  if (!(rho1 > 0.0)) throw std::domain_error("NoiseParams: rho1 must be > 0");
  if (!(rho2 >= 0.0)) throw std::domain_error("NoiseParams: rho2 must be >= 0");
  if (!(lambda > 0.0)) throw std::domain_error("NoiseParams: lambda must be > 0");
}

TrigBasis::TrigBasis(int p) : p_(p) {
  if (p < 1) throw std::invalid_argument("TrigBasis: p must be >= 1");
}

double TrigBasis::operator()(int j, double t) const {
  if (j < 0 || j >= p_) throw std::out_of_range("TrigBasis: index out of range");
  if (j == 0) return 1.0;
  const int m = j + 1;  // one-based index
  const int k = m / 2;
  const double arg = kTwoPi * k * t;
  return std::numbers::sqrt2 * (m % 2 == 0 ? std::cos(arg) : std::sin(arg));
}

void TrigBasis::evaluate_all(double t, std::span<double> out) const {
  out[0] = 1.0;
  if (p_ == 1) return;
  const double c1 = std::cos(kTwoPi * t);
  const double s1 = std::sin(kTwoPi * t);
  double ck = c1, sk = s1;
  for (int k = 1;; ++k) {
    const int cos_idx = 2 * k - 1;
    if (cos_idx >= p_) break;
    out[cos_idx] = std::numbers::sqrt2 * ck;
    if (cos_idx + 1 < p_) out[cos_idx + 1] = std::numbers::sqrt2 * sk;
    const double next_c = ck * c1 - sk * s1;
    sk = sk * c1 + ck * s1;
    ck = next_c;
  }
}

Function TrigBasis::function(int j) const {
  if (j < 0 || j >= p_) throw std::out_of_range("TrigBasis: index out of range");
  return [basis = *this, j](double t) { return basis(j, t); };
}

double TrigBasis::max_frequency() const { return kTwoPi * (p_ / 2); }

JumpRecord sample_jumps(const NoiseParams& params, int n, Engine& rng) {
  params.validate();
  require_horizon(n, "sample_jumps");
  JumpRecord rec;
  const double mean = params.lambda * n;
  const long count = boost::random::poisson_distribution<long, double>(mean)(rng);
  rec.times.resize(count);
  for (auto& t : rec.times) t = n * uniform01(rng);
  std::sort(rec.times.begin(), rec.times.end());
  rec.marks.resize(count);
  for (auto& y : rec.marks) y = standard_normal(rng);
  return rec;
}

JumpRecord resample_marks(const JumpRecord& jumps, Engine& rng) {
  JumpRecord rec;
  rec.times = jumps.times;
  rec.marks.resize(jumps.size());
  for (auto& y : rec.marks) y = standard_normal(rng);
  return rec;
}

SimulatedPath simulate_path(const NoiseParams& params, int n, const PathOptions& options,
                            Engine& rng, const std::optional<JumpRecord>& jumps) {
  params.validate();
  require_horizon(n, "simulate_path");
  require_step(options.step);
  SimulatedPath path;
  if (jumps) {
    validate_jumps(*jumps);
    path.jumps = *jumps;
  } else {
    path.jumps = sample_jumps(params, n, rng);
  }
  const std::size_t expected = static_cast<std::size_t>(n / options.step) + 2 * path.jumps.size() + 2;
  path.grid.reserve(expected);
  path.xi.reserve(expected);
  if (options.record_u) path.u_increments.reserve(expected);
  path.grid.push_back(0.0);
  path.xi.push_back(0.0);
  walk_path(params, n, options.step, path.jumps, options.record_u, rng,
            [&](double, long, double, double xi_right, double t_right, double du) {
              path.grid.push_back(t_right);
              path.xi.push_back(xi_right);
              if (options.record_u) path.u_increments.push_back(du);
            });
  return path;
}

double stochastic_integral(const SimulatedPath& path, const Function& f) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < path.grid.size(); ++k) {
    sum += f(path.grid[k]) * (path.xi[k + 1] - path.xi[k]);
  }
  return sum;
}

Vector basis_integrals(const NoiseParams& params, const TrigBasis& basis, int n, double step,
                       Engine& rng, const JumpRecord* jumps) {
  params.validate();
  require_horizon(n, "basis_integrals");
  require_step(step);
  JumpRecord sampled;
  if (jumps) {
    validate_jumps(*jumps);
  } else {
    sampled = sample_jumps(params, n, rng);
    jumps = &sampled;
  }
  const int p = basis.size();
  // Tabulate one period when the step divides it.
  const long period = std::lround(1.0 / step);
  const bool tabulated = period > 0 && std::abs(period * step - 1.0) < 1e-12;
  std::vector<double> table;
  if (tabulated) {
    table.resize(static_cast<std::size_t>(period) * p);
    for (long k = 0; k < period; ++k)
      basis.evaluate_all(k * step, std::span<double>(table.data() + k * p, p));
  }
  std::vector<double> scratch(p);
  Vector acc = Vector::Zero(p);
  walk_path(params, n, step, *jumps, false, rng,
            [&](double t_left, long left_index, double xi_left, double xi_right, double, double) {
              const double dxi = xi_right - xi_left;
              const double* phi;
              if (tabulated && left_index >= 0) {
                phi = table.data() + (left_index % period) * p;
              } else {
                basis.evaluate_all(t_left, scratch);
                phi = scratch.data();
              }
              for (int j = 0; j < p; ++j) acc[j] += phi[j] * dxi;
            });
  return acc;
}

double epsilon_f(const Function& f, double a, double t) {
  if (a == 0.0 || t == 0.0) return 0.0;
  const auto integrand = [&](double v) {
    return std::exp(a * (t - v)) * f(v) * (1.0 + std::exp(2.0 * a * v));
  };
  return a * quad::integrate(integrand, 0.0, t, kInnerTol).value;
}

double tau_fg(const Function& f, const Function& g, double a, double t) {
  const auto integrand = [&](double s) {
    const double fs = f(s), gs = g(s);
    return 2.0 * fs * gs + fs * epsilon_f(g, a, s) + epsilon_f(f, a, s) * gs;
  };
  return 0.5 * quad::integrate(integrand, 0.0, t, 1e-9).value;
}

double L_transform(const Function& f, double a, double x, double z) {
  if (x < 0.0 || z < 0.0) throw std::domain_error("L_transform: x and z must be >= 0");
  if (a == 0.0) return 0.0;
  const double inner =
      x == 0.0 ? 0.0
               : quad::integrate([&](double v) { return std::exp(a * v) * f(v + z); }, 0.0, x,
                                 kInnerTol)
                     .value;
  return a * std::exp(a * x) * (f(z) + a * inner);
}

double second_moment_unconditional(const Function& f, const Function& g,
                                   const NoiseParams& params, double t) {
  params.validate();
  return params.rho_star() * tau_fg(f, g, params.a, t);
}

ConditionalCovariance conditional_covariance(const TrigBasis& basis, const NoiseParams& params,
                                             const JumpRecord& jumps, int n) {
  params.validate();
  require_horizon(n, "conditional_covariance");
  validate_jumps(jumps);
  const int p = basis.size();
  const double a = params.a;
  const double r1 = params.rho1 * params.rho1;
  const double r2 = params.rho2 * params.rho2;
  // Panels narrow enough that every integrand varies by O(1) per panel.
  const int per_unit =
      std::max(4, static_cast<int>(std::ceil(std::max(basis.max_frequency(), std::abs(a)))));

  auto eval_basis = [&basis](double v, std::span<double> out) { basis.evaluate_all(v, out); };

  Matrix first = Matrix::Zero(p, p);
  Matrix second = Matrix::Zero(p, p);
  {
    const quad::CompositeRule rule(0.0, n, n * per_unit);
    const auto nodes = rule.nodes();
    const auto weights = rule.weights();
    std::vector<double> phi(nodes.size() * p);
    for (std::size_t k = 0; k < nodes.size(); ++k)
      basis.evaluate_all(nodes[k], std::span<double>(phi.data() + k * p, p));

    std::vector<double> eps;
    if (a != 0.0) {
      // eps_f(t) = a [ int_0^t e^{a(t-v)} f dv + e^{at} int_0^t e^{av} f dv ]
      const auto decayed = quad::running_decay_integral(eval_basis, p, a, rule);
      const auto grown = quad::running_decay_integral(
          [&](double v, std::span<double> out) {
            basis.evaluate_all(v, out);
            const double e = std::exp(a * v);
            for (auto& x : out) x *= e;
          },
          p, 0.0, rule);
      eps.resize(nodes.size() * p);
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double eat = std::exp(a * nodes[k]);
        for (int j = 0; j < p; ++j)
          eps[k * p + j] = a * (decayed[k * p + j] + eat * grown[k * p + j]);
      }
    }
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double* f = phi.data() + k * p;
      for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
          first(i, j) += weights[k] * f[i] * f[j];
          if (!eps.empty()) second(i, j) += weights[k] * (f[i] * eps[k * p + j] + f[j] * eps[k * p + i]);
        }
      }
    }
  }

  Matrix jump_outer = Matrix::Zero(p, p);
  Matrix interaction = Matrix::Zero(p, p);
  std::vector<double> phi_z(p), phi_t(p), el(p);
  for (const double z : jumps.times) {
    if (z > n) break;
    basis.evaluate_all(z, phi_z);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) jump_outer(i, j) += phi_z[i] * phi_z[j];
    if (a == 0.0 || z >= n) continue;

    const int panels = std::max(1, static_cast<int>(std::ceil((n - z) * per_unit)));
    const quad::CompositeRule rule(z, n, panels);
    const auto nodes = rule.nodes();
    const auto weights = rule.weights();
    // C_j(t) = int_z^t e^{a(r-z)} phi_j(r) dr
    const auto running = quad::running_decay_integral(
        [&](double r, std::span<double> out) {
          basis.evaluate_all(r, out);
          const double e = std::exp(a * (r - z));
          for (auto& x : out) x *= e;
        },
        p, 0.0, rule);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double t = nodes[k];
      basis.evaluate_all(t, phi_t);
      const double pre = a * std::exp(a * (t - z));
      for (int j = 0; j < p; ++j) el[j] = pre * (phi_z[j] + a * running[k * p + j]);
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) interaction(i, j) += weights[k] * (phi_t[i] * el[j] + phi_t[j] * el[i]);
    }
  }

  ConditionalCovariance out;
  out.n = n;
  out.p = p;
  out.jumps = jumps;
  out.matrix = (r1 / n) * first + (r1 / (2.0 * n)) * second + (r2 / n) * (jump_outer + interaction);
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
  return out;
}

Lemma54Result check_lemma_54(const ConditionalCovariance& v, const NoiseParams& params) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(v.matrix, Eigen::EigenvaluesOnly);
  Lemma54Result r;
  r.min_eigenvalue = solver.eigenvalues().minCoeff();
  r.threshold = params.rho1 * params.rho1 - 1e-6;
  r.pass = r.min_eigenvalue >= r.threshold;
  r.jumps = v.jumps;
  return r;
}

Lemma55Result check_lemma_55(const TrigBasis& basis, const NoiseParams& params, int n,
                             std::uint64_t samples, std::uint64_t seed, Execution exec) {
  if (samples < 2) throw std::invalid_argument("check_lemma_55: samples must be >= 2");
  const auto lmax = map_indices<double>(
      samples,
      [&](std::size_t i) {
        Engine rng = substream(seed, i);
        const JumpRecord jumps = sample_jumps(params, n, rng);
        const auto v = conditional_covariance(basis, params, jumps, n);
        Eigen::SelfAdjointEigenSolver<Matrix> solver(v.matrix, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().maxCoeff();
      },
      exec);
  Moments m;
  for (double x : lmax) m.add(x);
  Lemma55Result r;
  r.samples = samples;
  r.mean_lambda_max = m.mean();
  r.half_width = m.half_width();
  r.bound = 3.0 * basis.size() * params.rho_star();
  r.pass = r.mean_lambda_max - r.half_width <= r.bound;
  return r;
}

}  // namespace levyshrink
