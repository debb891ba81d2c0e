#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace levyshrink::quad {

using Integrand = std::function<double(double)>;

struct Estimate {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration of `f` over
/// [lo, hi]. The interval with the largest local error estimate |K15 - G7|
/// is bisected until the summed estimate is at most `abs_tol`.
///
/// Throws std::runtime_error when `max_intervals` is exhausted first, or when
/// the integrand produces a non-finite value.
Estimate integrate(const Integrand& f, double lo, double hi, double abs_tol,
                   int max_intervals = 20000);

/// Fixed composite rule: [lo, hi] split into equal panels, each carrying the
/// 15-point Kronrod nodes. Used where many integrals share one set of nodes.
class CompositeRule {
 public:
  CompositeRule(double lo, double hi, int panels);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int panels() const { return panels_; }
  double panel_width() const { return width_; }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  /// Index of the panel holding node `k`.
  int panel_of(std::size_t k) const { return static_cast<int>(k / kNodesPerPanel); }
  double panel_left(int panel) const { return lo_ + panel * width_; }

  template <class F>
  double apply(F&& f) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) sum += weights_[k] * f(nodes_[k]);
    return sum;
  }

  static constexpr std::size_t kNodesPerPanel = 15;

 private:
  double lo_, hi_, width_;
  int panels_;
  std::vector<double> nodes_, weights_;
};

/// 7-point Gauss rule on [lo, hi].
template <class F>
double gauss7(F&& f, double lo, double hi);

/// Values of x -> integral_{rule.lo()}^{x} exp(rate (x - v)) g(v) dv at every
/// node of `rule`, for a vector-valued g of size `dim`: g(v, out) fills `out`.
/// The result is node-major, out[node * dim + j]. Panel prefixes come from the
/// rule itself and are carried forward panel by panel, so exp(-rate v) never
/// appears on its own; the partial panel [left, x] uses a 7-point Gauss rule.
template <class G>
std::vector<double> running_decay_integral(G&& g, std::size_t dim, double rate,
                                           const CompositeRule& rule);

/// Scalar forms. `rate` = 0 gives the plain running integral.
std::vector<double> running_integral(const Integrand& g, const CompositeRule& rule);
std::vector<double> running_decay_integral(const Integrand& g, double rate,
                                           const CompositeRule& rule);

namespace detail {
inline constexpr double kGaussNodes7[4] = {
    0.949107912342758524526189684047851, 0.741531185599394439863864773280788,
    0.405845151377397166906606412076961, 0.0};
inline constexpr double kGaussWeights7[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace detail

template <class F>
double gauss7(F&& f, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = detail::kGaussWeights7[3] * f(mid);
  for (int i = 0; i < 3; ++i) {
    const double dx = half * detail::kGaussNodes7[i];
    sum += detail::kGaussWeights7[i] * (f(mid - dx) + f(mid + dx));
  }
  return sum * half;
}

template <class G>
std::vector<double> running_decay_integral(G&& g, std::size_t dim, double rate,
                                           const CompositeRule& rule) {
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  std::vector<double> out(nodes.size() * dim, 0.0);
  std::vector<double> carried(dim, 0.0), panel_sum(dim), local(dim), gv(dim);
  const auto decay = [rate](double dt) { return rate == 0.0 ? 1.0 : std::exp(rate * dt); };
  for (int panel = 0; panel < rule.panels(); ++panel) {
    const double left = rule.panel_left(panel);
    const double right = left + rule.panel_width();
    const std::size_t base = panel * CompositeRule::kNodesPerPanel;
    std::fill(panel_sum.begin(), panel_sum.end(), 0.0);
    for (std::size_t i = 0; i < CompositeRule::kNodesPerPanel; ++i) {
      const double x = nodes[base + i];
      // 7-point Gauss on [left, x].
      std::fill(local.begin(), local.end(), 0.0);
      const double half = 0.5 * (x - left);
      const double mid = 0.5 * (x + left);
      for (int q = -3; q <= 3; ++q) {
        const int idx = q < 0 ? -q - 1 : (q == 0 ? 3 : q - 1);
        const double node = q < 0 ? -detail::kGaussNodes7[idx]
                                  : (q == 0 ? 0.0 : detail::kGaussNodes7[idx]);
        const double v = mid + half * node;
        const double w = half * detail::kGaussWeights7[idx] * decay(x - v);
        g(v, std::span<double>(gv));
        for (std::size_t j = 0; j < dim; ++j) local[j] += w * gv[j];
      }
      const double carry = decay(x - left);
      double* dst = out.data() + (base + i) * dim;
      for (std::size_t j = 0; j < dim; ++j) dst[j] = carry * carried[j] + local[j];
      g(x, std::span<double>(gv));
      const double w = weights[base + i] * decay(right - x);
      for (std::size_t j = 0; j < dim; ++j) panel_sum[j] += w * gv[j];
    }
    const double carry = decay(right - left);
    for (std::size_t j = 0; j < dim; ++j) carried[j] = carry * carried[j] + panel_sum[j];
  }
  return out;
}

}  // namespace levyshrink::quad
