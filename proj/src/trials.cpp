#include "levyshrink/trials.hpp"

#include <cmath>
#include <functional>

#include <omp.h>

namespace levyshrink {
namespace {
int g_default_workers = -1;
}

void Moments::merge(const Moments& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  count_ += other.count_;
}

double Moments::variance() const {
  return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double Moments::std_error() const {
  return count_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
}

void set_worker_count(int workers) {
  if (g_default_workers < 0) g_default_workers = omp_get_max_threads();
  omp_set_num_threads(workers > 0 ? workers : g_default_workers);
}

int worker_count() { return omp_get_max_threads(); }

namespace detail {

void parallel_blocks(std::size_t blocks, const std::function<void(std::size_t)>& body) {
  std::exception_ptr failure;
  std::mutex guard;
  const auto n = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < n; ++b) {
    try {
      body(static_cast<std::size_t>(b));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail
}  // namespace levyshrink
