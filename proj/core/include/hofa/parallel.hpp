#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace hofa {

namespace detail {
inline unsigned g_workers = 0;  // 0 = use hardware concurrency
inline bool g_deterministic = false;
}  // namespace detail

/// Worker count used by data-parallel loops. Defaults to the hardware
/// concurrency; a value of 1 runs everything inline.
inline unsigned worker_count() {
  if (detail::g_workers != 0) return detail::g_workers;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}
inline void set_worker_count(unsigned n) { detail::g_workers = n; }

/// When set, all reductions use the serial pairwise scheme so repeated runs
/// are bit-identical regardless of worker count.
inline bool deterministic_mode() { return detail::g_deterministic; }
inline void set_deterministic_mode(bool on) { detail::g_deterministic = on; }

/// Runs fn(begin, end) over a partition of [0, n). With one worker (or in
/// deterministic mode) this is a single inline call fn(0, n).
inline void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  unsigned w = deterministic_mode() ? 1 : worker_count();
  if (w <= 1 || n < 2 * w) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  std::size_t chunk = (n + w - 1) / w;
  for (unsigned i = 0; i < w; ++i) {
    std::size_t b = i * chunk;
    std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fn, b, e);
  }
  for (auto& t : pool) t.join();
}

/// Pairwise (cascade) summation; associativity-fixed so results do not depend
/// on worker count. Also better conditioned than naive left-to-right sums.
template <class T>
T pairwise_sum_range(const T* data, std::size_t n) {
  if (n == 0) return T{};
  if (n <= 8) {
    T acc = data[0];
    for (std::size_t i = 1; i < n; ++i) acc += data[i];
    return acc;
  }
  std::size_t half = n / 2;
  return pairwise_sum_range(data, half) + pairwise_sum_range(data + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum_range(v.data(), v.size());
}
inline std::complex<double> pairwise_sum(const std::vector<std::complex<double>>& v) {
  return pairwise_sum_range(v.data(), v.size());
}

}  // namespace hofa
