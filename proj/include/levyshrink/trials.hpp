#pragma once

// Monte Carlo trial kernels: an OpenMP version and the serial reference it is
// tested against. Both reduce in the same fixed order, so their outputs are
// bitwise identical for any worker count.

#include <cstdint>
#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

namespace levyshrink {

enum class Execution { Serial, Parallel };

/// Count, mean and centred second moment of a stream of values.
class Moments {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  /// Chan et al. pairwise merge; `other` comes after `*this` in trial order.
  void merge(const Moments& other);

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance (0 for fewer than two values).
  double variance() const;
  double std_error() const;
  /// Three standard errors of the mean.
  double half_width() const { return 3.0 * std_error(); }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Trials per reduction block. Part of the determinism contract: changing it
/// changes the summation order.
inline constexpr std::size_t kTrialBlock = 2048;

/// Sets the OpenMP worker count used by Execution::Parallel (<= 0 restores the
/// runtime default).
void set_worker_count(int workers);
int worker_count();

namespace detail {
void parallel_blocks(std::size_t blocks, const std::function<void(std::size_t)>& body);
}

/// Runs `kernel(trial, out)` for trial = 0..trials-1; `out` has `width` slots
/// the kernel fills with that trial's values. Returns per-slot moments.
template <class Kernel>
std::vector<Moments> accumulate_trials(std::size_t trials, std::size_t width, Kernel&& kernel,
                                       Execution exec = Execution::Parallel) {
  const std::size_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<std::vector<Moments>> partial(blocks, std::vector<Moments>(width));

  auto run_block = [&](std::size_t b) {
    std::vector<double> values(width);
    const std::size_t end = std::min(trials, (b + 1) * kTrialBlock);
    for (std::size_t i = b * kTrialBlock; i < end; ++i) {
      kernel(static_cast<std::uint64_t>(i), std::span<double>(values));
      for (std::size_t k = 0; k < width; ++k) partial[b][k].add(values[k]);
    }
  };

  if (exec == Execution::Serial) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    detail::parallel_blocks(blocks, run_block);
  }

  std::vector<Moments> total(width);
  for (const auto& block : partial)
    for (std::size_t k = 0; k < width; ++k) total[k].merge(block[k]);
  return total;
}

/// Maps `fn(i)` over i = 0..count-1 into a vector; results are independent of
/// scheduling because each index is computed in isolation.
template <class T, class Fn>
std::vector<T> map_indices(std::size_t count, Fn&& fn, Execution exec = Execution::Parallel) {
  std::vector<T> out(count);
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
  } else {
    detail::parallel_blocks(count, [&](std::size_t i) { out[i] = fn(i); });
  }
  return out;
}

}  // namespace levyshrink
