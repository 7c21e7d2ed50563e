#pragma once

// Time-step convergence sweeps over (order, step count) cells.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "coagtree/exact.hpp"
#include "coagtree/grid.hpp"
#include "coagtree/solver.hpp"

namespace coagtree {

enum class ReferenceKind { exact, self };

struct SweepConfig {
  SolverConfig base;
  std::vector<int> orders;
  std::vector<int> steps;
  ReferenceKind reference = ReferenceKind::exact;
  int reference_order = 6;
  int reference_steps = 512;
  /// Cells with error below this multiple of the sweep floor are excluded from fits.
  double floor_factor = 2.0;
  unsigned workers = 0;
};

struct SweepCell {
  int order = 0;
  int steps = 0;
  double error = std::numeric_limits<double>::quiet_NaN();
  bool ok = false;
  std::string failure;
};

struct SlopeFit {
  int order = 0;
  std::optional<double> slope;
  std::vector<int> steps_used;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<SlopeFit> fits;
  double floor = 0.0;
  double reference_norm = 0.0;
};

/// Least-squares slope of -log(error) against log(M).
inline std::optional<double> fit_slope(const std::vector<std::pair<int, double>>& points) {
  if (points.size() < 2) return std::nullopt;
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [m, e] : points) {
    const double x = std::log(static_cast<double>(m));
    const double y = -std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(points.size());
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / den;
}

/// Slopes per order over the cells lying at least floor_factor above the
/// smallest error in the sweep.
inline void fit_sweep(SweepResult& r, const std::vector<int>& orders, double floor_factor) {
  r.floor = std::numeric_limits<double>::infinity();
  for (const auto& c : r.cells) {
    if (c.ok && c.error > 0.0) r.floor = std::min(r.floor, c.error);
  }
  r.fits.clear();
  for (int n : orders) {
    SlopeFit f;
    f.order = n;
    std::vector<std::pair<int, double>> pts;
    for (const auto& c : r.cells) {
      if (c.order == n && c.ok && c.error >= floor_factor * r.floor) {
        pts.emplace_back(c.steps, c.error);
        f.steps_used.push_back(c.steps);
      }
    }
    f.slope = fit_slope(pts);
    r.fits.push_back(std::move(f));
  }
}

inline GridFunction sweep_reference(const SweepConfig& cfg) {
  if (cfg.reference == ReferenceKind::exact) return multiplicative_bessel(cfg.base.grid, cfg.base.horizon);
  SolverConfig ref = cfg.base;
  ref.order = cfg.reference_order;
  ref.steps = cfg.reference_steps;
  ref.snapshot_every = 0;
  return run(ref).final_state;
}

/// Runs every cell in a worker pool. Failed cells are recorded, not thrown.
inline SweepResult run_sweep(const SweepConfig& cfg) {
  if (cfg.orders.empty() || cfg.steps.empty()) throw config_error("convergence", "orders and steps must be nonempty");
  if (cfg.reference == ReferenceKind::exact) {
    const auto* p = std::get_if<kernels::SeparablePower>(&cfg.base.kernel);
    if (p == nullptr || p->lambda != 2.0 || cfg.base.data != InitialData::exp_over_x) {
      throw config_error("convergence.reference", "exact reference needs lambda = 2 and exp_over_x data");
    }
  }
  const GridFunction reference = sweep_reference(cfg);
  SweepResult result;
  result.reference_norm = l2_norm(reference);
  for (int n : cfg.orders) {
    for (int m : cfg.steps) result.cells.push_back(SweepCell{n, m, std::numeric_limits<double>::quiet_NaN(), false, {}});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < result.cells.size(); i = next.fetch_add(1)) {
      auto& cell = result.cells[i];
      try {
        SolverConfig c = cfg.base;
        c.order = cell.order;
        c.steps = cell.steps;
        c.snapshot_every = 0;
        cell.error = l2_distance(run(c).final_state, reference);
        cell.ok = std::isfinite(cell.error);
        if (!cell.ok) cell.failure = "non-finite error";
      } catch (const std::exception& e) {
        cell.failure = e.what();
      }
    }
  };
  unsigned threads = cfg.workers != 0 ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(result.cells.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  fit_sweep(result, cfg.orders, cfg.floor_factor);
  return result;
}

inline void write_cells_csv(std::ostream& os, const SweepResult& r) {
  os << "N,M,error,status\n";
  os.precision(17);
  for (const auto& c : r.cells) {
    os << c.order << ',' << c.steps << ',';
    if (c.ok) {
      os << c.error << ",ok\n";
    } else {
      os << ",failed\n";
    }
  }
}

inline void write_slopes_csv(std::ostream& os, const SweepResult& r) {
  os << "N,slope,points\n";
  os.precision(6);
  for (const auto& f : r.fits) {
    os << f.order << ',';
    if (f.slope) os << *f.slope;
    os << ',' << f.steps_used.size() << '\n';
  }
}

}  // namespace coagtree
