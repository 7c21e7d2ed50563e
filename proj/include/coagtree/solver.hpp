#pragma once

// Order-N time stepping by the truncated non-planar tree expansion.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coagtree/errors.hpp"
#include "coagtree/fft.hpp"
#include "coagtree/grid.hpp"
#include "coagtree/kernel.hpp"
#include "coagtree/plan.hpp"
#include "coagtree/series.hpp"
#include "coagtree/spectral.hpp"

namespace coagtree {

/// One step of the truncated expansion over an abstract product algebra.
///
/// Algebra supplies: element, prepared, product, scalar; prepare(element),
/// multiply(prepared, prepared) -> product, realize(product) -> element,
/// zero(element), zero_product(element), axpy(element&, scalar, element),
/// axpy(product&, scalar, product), scalar_of(Rational).
template <class Algebra>
typename Algebra::element advance(Algebra& alg, const typename Algebra::element& g,
                                  const typename Algebra::scalar& dt, const EvaluationPlan& plan) {
  using element = typename Algebra::element;
  using prepared = typename Algebra::prepared;
  std::unordered_map<std::string, element> intermediates;
  std::unordered_map<std::string, prepared> cache;
  intermediates.emplace(Tree::leaf().word(), g);

  auto prepared_for = [&](const Tree& t) -> const prepared& {
    const auto key = t.word();
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, alg.prepare(intermediates.at(key))).first;
    return it->second;
  };

  element result = g;
  typename Algebra::scalar power = dt;
  for (int d = 1; d <= plan.order; ++d) {
    const auto steps = plan.grade(d);
    if (d < plan.order) {
      // Intermediates of lower grades are needed as children later, so the
      // grade sum is assembled from them in physical space.
      element sum = alg.zero(g);
      for (const auto* s : steps) {
        element v = alg.realize(alg.multiply(prepared_for(s->left), prepared_for(s->right)));
        alg.axpy(sum, alg.scalar_of(s->coefficient), v);
        intermediates.emplace(s->code.word(), std::move(v));
      }
      alg.axpy(result, power, sum);
    } else {
      auto acc = alg.zero_product(g);
      for (const auto* s : steps) {
        alg.axpy(acc, alg.scalar_of(s->coefficient), alg.multiply(prepared_for(s->left), prepared_for(s->right)));
      }
      alg.axpy(result, power, alg.realize(acc));
    }
    power = power * dt;
  }
  return result;
}

/// FFT star-product algebra on a grid.
class SpectralAlgebra {
 public:
  using element = GridFunction;
  using prepared = FactorTransforms;
  using product = SpectralFunction;
  using scalar = double;

  SpectralAlgebra(const KernelSpec& kernel, const GridSpec& grid, FftEngine& engine)
      : form_(separable_form(kernel, grid)), engine_(&engine) {}

  prepared prepare(const element& g) { return transform_factors(g, form_, *engine_); }
  product multiply(const prepared& a, const prepared& b) { return star_from_transforms(a, b, form_); }
  element realize(const product& p) { return physical_from_spectral(p, *engine_); }
  element zero(const element& like) { return GridFunction::zeros(like.grid); }
  product zero_product(const element& like) { return SpectralFunction::zeros(like.grid); }
  scalar scalar_of(const Rational& r) { return static_cast<double>(r); }

  static void axpy(element& y, scalar a, const element& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y.values[i] += a * x.values[i];
  }
  static void axpy(product& y, scalar a, const product& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y.values[i] += a * x.values[i];
  }

 private:
  SeparableForm form_;
  FftEngine* engine_;
};

/// Projection of a plain-basis series onto non-planar representatives.
inline SeriesVector project_nonplanar(const SeriesVector& plain) {
  SeriesVector out(plain.max_grade());
  for (const auto& [t, c] : plain.coeffs()) out.add(canonical_nonplanar(t), c);
  return out;
}

/// Formal algebra: the product is root grafting projected onto non-planar
/// representatives; elements are plain-basis series.
class FormalGraftAlgebra {
 public:
  using element = SeriesVector;
  using prepared = SeriesVector;
  using product = SeriesVector;
  using scalar = Rational;

  explicit FormalGraftAlgebra(int max_grade) : max_grade_(max_grade) {}

  prepared prepare(const element& g) { return g; }
  product multiply(const prepared& a, const prepared& b) {
    return project_nonplanar(graft_plain(a, b, max_grade_));
  }
  element realize(const product& p) { return p; }
  element zero(const element&) { return SeriesVector(max_grade_); }
  product zero_product(const element&) { return SeriesVector(max_grade_); }
  scalar scalar_of(const Rational& r) { return r; }
  static void axpy(SeriesVector& y, const Rational& a, const SeriesVector& x) { y += x.scaled(a); }

 private:
  int max_grade_;
};

enum class InitialData { exp_over_x, exp };

inline std::string initial_data_name(InitialData d) { return d == InitialData::exp ? "exp" : "exp_over_x"; }

/// e^{-x}/x or e^{-x} sampled at the nodes.
inline GridFunction sample_initial(InitialData d, const GridSpec& grid) {
  if (d == InitialData::exp) return GridFunction::sample(grid, [](double x) { return std::exp(-x); });
  return GridFunction::sample(grid, [](double x) { return std::exp(-x) / x; });
}

struct SolverConfig {
  GridSpec grid{100.0, 1u << 14};
  KernelSpec kernel = kernels::SeparablePower{2.0};
  int order = 3;
  int steps = 64;
  double horizon = 0.5;
  InitialData data = InitialData::exp_over_x;
  /// Snapshot every this many steps; 0 disables snapshots.
  int snapshot_every = 0;
  /// Reject runs reaching the gelation time 1/M2(0) of the multiplicative kernel.
  bool gelation_guard = true;

  double dt() const { return horizon / steps; }
};

/// Config-level checks, including the multiplicative-kernel gelation guard.
inline void validate(const SolverConfig& c) {
  if (c.steps < 1) throw config_error("steps", "must be at least 1");
  if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) throw config_error("horizon", "must be positive");
  if (c.order < 1 || c.order > default_grade_cap) {
    throw config_error("order", "must lie in 1.." + std::to_string(default_grade_cap));
  }
  const auto* p = std::get_if<kernels::SeparablePower>(&c.kernel);
  if (c.gelation_guard && p != nullptr && p->lambda == 2.0) {
    const double m2 = moment(sample_initial(c.data, c.grid), 2);
    if (c.horizon * m2 >= 1.0) {
      throw config_error("horizon", "reaches the gelation time 1/M2 = " + std::to_string(1.0 / m2));
    }
  }
}

inline GridFunction step(const GridFunction& g, double dt, const EvaluationPlan& plan, const KernelSpec& kernel,
                         FftEngine& engine = FftEngine::shared()) {
  if (dt < 0.0 || !std::isfinite(dt)) throw domain_error("time step must be non-negative");
  if (dt == 0.0) return g;
  SpectralAlgebra alg(kernel, g.grid, engine);
  return advance(alg, g, dt, plan);
}

struct StepRecord {
  int step = 0;
  double t = 0.0;
  double m0 = 0.0;
  double m1 = 0.0;
  std::uint64_t fft_count = 0;
  double max_value = 0.0;
};

struct Trajectory {
  std::vector<StepRecord> records;
  GridFunction final_state;
  std::vector<std::pair<double, GridFunction>> snapshots;
  /// Steps at which M0 grew by more than 1e-6 relative; diagnostic only.
  std::vector<int> m0_increases;
};

namespace detail {

inline StepRecord record_of(int step, double t, const GridFunction& g, std::uint64_t ffts) {
  StepRecord r{step, t, moment(g, 0), moment(g, 1), ffts, 0.0};
  for (double v : g.values) r.max_value = std::max(r.max_value, std::abs(v));
  return r;
}

}  // namespace detail

/// Runs M uniform steps. Transforms are counted on a run-local engine.
inline Trajectory run(const SolverConfig& config, const GridFunction* initial = nullptr) {
  validate(config);
  FftEngine engine;
  const auto plan = build_plan(config.order);
  GridFunction g = initial != nullptr ? *initial : sample_initial(config.data, config.grid);
  require_same_grid(g.grid, config.grid);
  const double dt = config.dt();
  Trajectory tr;
  tr.records.push_back(detail::record_of(0, 0.0, g, 0));
  if (config.snapshot_every > 0) tr.snapshots.emplace_back(0.0, g);
  SpectralAlgebra alg(config.kernel, config.grid, engine);
  for (int m = 1; m <= config.steps; ++m) {
    g = advance(alg, g, dt, plan);
    if (!g.all_finite()) {
      throw non_finite_value("non-finite state after step " + std::to_string(m), static_cast<std::size_t>(m));
    }
    const double t = m * dt;
    tr.records.push_back(detail::record_of(m, t, g, engine.count()));
    const auto& prev = tr.records[tr.records.size() - 2];
    if (tr.records.back().m0 > prev.m0 * (1.0 + 1e-6)) tr.m0_increases.push_back(m);
    if (config.snapshot_every > 0 && m % config.snapshot_every == 0) tr.snapshots.emplace_back(t, g);
  }
  tr.final_state = std::move(g);
  return tr;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << "t,M0,M1,fft_count\n";
  os.precision(17);
  for (const auto& r : tr.records) os << r.t << ',' << r.m0 << ',' << r.m1 << ',' << r.fft_count << '\n';
}

}  // namespace coagtree
