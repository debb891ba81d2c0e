#include "levyshrink/quadrature.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

namespace levyshrink::quad {
namespace {

// QUADPACK qk15 abscissae (descending, last is the midpoint) and weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the midpoint.
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const Integrand& f, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  const double fc = f(mid);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += kWgk[i] * pair;
    if (i % 2 == 1) gauss += kWg[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) {
    throw std::runtime_error("quad::integrate: non-finite integrand on [" +
                             std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

Estimate integrate(const Integrand& f, double lo, double hi, double abs_tol,
                   int max_intervals) {
  if (lo == hi) return {};
  if (hi < lo) {
    Estimate flipped = integrate(f, hi, lo, abs_tol, max_intervals);
    flipped.value = -flipped.value;
    return flipped;
  }
  std::priority_queue<Segment> work;
  Segment first = kronrod15(f, lo, hi);
  double total = first.value;
  double error = first.error;
  work.push(first);
  int intervals = 1;
  while (error > abs_tol) {
    if (intervals >= max_intervals) {
      throw std::runtime_error("quad::integrate: no convergence after " +
                               std::to_string(intervals) + " intervals (error " +
                               std::to_string(error) + ")");
    }
    const Segment worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Segment left = kronrod15(f, worst.lo, mid);
    const Segment right = kronrod15(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    ++intervals;
    // Rounding in the running sums can drift; resum once the heap says so.
    if (error <= abs_tol || intervals % 512 == 0) {
      auto copy = work;
      double v = 0.0, e = 0.0;
      while (!copy.empty()) {
        v += copy.top().value;
        e += copy.top().error;
        copy.pop();
      }
      total = v;
      error = e;
    }
  }
  return {total, error, intervals};
}

CompositeRule::CompositeRule(double lo, double hi, int panels)
    : lo_(lo), hi_(hi), width_(0.0), panels_(panels) {
  if (panels < 1) throw std::invalid_argument("CompositeRule: panels must be >= 1");
  if (!(hi >= lo)) throw std::invalid_argument("CompositeRule: hi < lo");
  width_ = (hi - lo) / panels;
  nodes_.reserve(panels * kNodesPerPanel);
  weights_.reserve(panels * kNodesPerPanel);
  const double half = 0.5 * width_;
  for (int k = 0; k < panels; ++k) {
    const double mid = lo + (k + 0.5) * width_;
    // Ascending order inside each panel.
    for (int i = 0; i < 7; ++i) {
      nodes_.push_back(mid - half * kXgk[i]);
      weights_.push_back(half * kWgk[i]);
    }
    nodes_.push_back(mid);
    weights_.push_back(half * kWgk[7]);
    for (int i = 6; i >= 0; --i) {
      nodes_.push_back(mid + half * kXgk[i]);
      weights_.push_back(half * kWgk[i]);
    }
  }
}

std::vector<double> running_integral(const Integrand& g, const CompositeRule& rule) {
  return running_decay_integral(g, 0.0, rule);
}

std::vector<double> running_decay_integral(const Integrand& g, double rate,
                                           const CompositeRule& rule) {
  return running_decay_integral([&g](double v, std::span<double> out) { out[0] = g(v); }, 1,
                                rate, rule);
}

}  // namespace levyshrink::quad
