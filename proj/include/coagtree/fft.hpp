#pragma once

// FFTW-backed transform engine with a shared plan cache and a call counter.

#include <atomic>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "coagtree/errors.hpp"

namespace coagtree {

class FftEngine {
 public:
  /// e^{+2 pi i j k / n} and e^{-2 pi i j k / n} respectively.
  enum class Sign { positive, negative };

  /// Plans and the node-offset phase table for one transform length.
  struct Plan {
    fftw_plan positive = nullptr;
    fftw_plan negative = nullptr;
    std::vector<std::complex<double>> roots;  // e^{2 pi i k / n}
  };

  FftEngine() = default;
  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

  ~FftEngine() {
    std::unique_lock lock(mutex_);
    std::lock_guard planner(planner_mutex());
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p->positive);
      fftw_destroy_plan(p->negative);
    }
  }

  /// Looks up or creates the plan pair for length n; inserted at most once.
  const Plan& plan(std::size_t n) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = plans_.find(n); it != plans_.end()) return *it->second;
    }
    std::unique_lock lock(mutex_);
    if (auto it = plans_.find(n); it != plans_.end()) return *it->second;
    // The FFTW planner is not reentrant, even across engines.
    std::lock_guard planner(planner_mutex());
    auto p = std::make_unique<Plan>();
    std::vector<std::complex<double>> in(n);
    std::vector<std::complex<double>> out(n);
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p->positive = fftw_plan_dft_1d(len, as_fftw(in.data()), as_fftw(out.data()), FFTW_BACKWARD, flags);
    p->negative = fftw_plan_dft_1d(len, as_fftw(in.data()), as_fftw(out.data()), FFTW_FORWARD, flags);
    if (p->positive == nullptr || p->negative == nullptr) throw resource_limit("FFTW plan creation failed");
    p->roots.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      p->roots[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    }
    const Plan& ref = *p;
    plans_.emplace(n, std::move(p));
    return ref;
  }

  /// Unnormalized out-of-place DFT. Counts one transform.
  void execute(Sign sign, const std::complex<double>* in, std::complex<double>* out, std::size_t n) {
    const Plan& p = plan(n);
    // new-array execution is thread-safe; FFTW does not write the input of an
    // out-of-place 1-D complex transform.
    fftw_execute_dft(sign == Sign::positive ? p.positive : p.negative,
                     as_fftw(const_cast<std::complex<double>*>(in)), as_fftw(out));
    count_.fetch_add(1, std::memory_order_relaxed);
  }

  std::uint64_t count() const noexcept { return count_.load(std::memory_order_relaxed); }

  /// Process-wide engine used when callers do not pass their own.
  static FftEngine& shared() {
    static FftEngine engine;
    return engine;
  }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

  static fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

  std::shared_mutex mutex_;
  std::map<std::size_t, std::unique_ptr<Plan>> plans_;
  std::atomic<std::uint64_t> count_{0};
};

}  // namespace coagtree
