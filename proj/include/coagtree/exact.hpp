#pragma once

// Closed-form and characteristics oracles for the constant, additive and
// multiplicative kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "coagtree/errors.hpp"
#include "coagtree/grid.hpp"

namespace coagtree {

/// Argument above which I1 switches to the large-argument expansion.
inline constexpr double bessel_crossover = 20.0;

namespace detail {

/// I1(z) / z by its power series; all terms positive.
inline double bessel_i1_over_z_series(double z) {
  const double q = 0.25 * z * z;
  double term = 0.5;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + 1));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

/// e^{-z} I1(z) sqrt(2 pi z) from the asymptotic series, truncated at the
/// smallest term.
inline double bessel_i1_asymptotic_factor(double z) {
  double term = 1.0;
  double sum = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(4.0 - odd * odd) / (8.0 * k * z);
    if (std::abs(term) >= prev) break;
    sum += term;
    prev = std::abs(term);
    if (prev < 1e-17) break;
  }
  return sum;
}

}  // namespace detail

/// e^{-|z|} I1(z).
inline double bessel_i1_scaled(double z) {
  const double a = std::abs(z);
  double v;
  if (a <= bessel_crossover) {
    v = std::exp(-a) * a * detail::bessel_i1_over_z_series(a);
  } else {
    v = detail::bessel_i1_asymptotic_factor(a) / std::sqrt(2.0 * std::numbers::pi * a);
  }
  return z < 0 ? -v : v;
}

inline double bessel_i1(double z) {
  const double a = std::abs(z);
  if (a <= bessel_crossover) return z * detail::bessel_i1_over_z_series(a);
  return std::exp(a) * bessel_i1_scaled(z);
}

/// exp(-(1+t)x) I1(2x sqrt t) / (x^2 sqrt t); t = 0 gives e^{-x}/x.
inline double multiplicative_bessel(double x, double t) {
  if (!(x > 0.0)) throw domain_error("mass must be positive");
  if (t < 0.0 || !std::isfinite(t)) throw domain_error("time must be non-negative");
  if (t == 0.0) return std::exp(-x) / x;
  const double z = 2.0 * x * std::sqrt(t);
  // I1(z)/(x^2 sqrt t) = 2 (I1(z)/z) / x.
  if (z <= bessel_crossover) return std::exp(-(1.0 + t) * x) * 2.0 * detail::bessel_i1_over_z_series(z) / x;
  return std::exp(-(1.0 + t) * x + z) * 2.0 * bessel_i1_scaled(z) / (z * x);
}

inline GridFunction multiplicative_bessel(const GridSpec& grid, double t) {
  return GridFunction::sample(grid, [t](double x) { return multiplicative_bessel(x, t); });
}

using BernsteinFunction = std::function<double(double)>;

/// s -> xi(s) / (1 + t xi(s) / 2).
inline BernsteinFunction constant_kernel_solution(BernsteinFunction xi, double t) {
  if (t < 0.0) throw domain_error("time must be non-negative");
  return [xi = std::move(xi), t](double s) {
    const double v = xi(s);
    return v / (1.0 + 0.5 * t * v);
  };
}

/// Transform-side solution as a function of (s, t).
using TransformSolution = std::function<double(double, double)>;

/// (s, t) -> gf(s, -log(1 - t)) / (1 - t) for 0 <= t < 1: maps an
/// additive-kernel solution to the multiplicative-kernel one.
inline TransformSolution multiplicative_from_additive(TransformSolution gf) {
  return [gf = std::move(gf)](double s, double t) {
    if (t < 0.0 || t >= 1.0) throw domain_error("time change requires 0 <= t < 1");
    return gf(s, -std::log1p(-t)) / (1.0 - t);
  };
}

/// Inverse map: (s, tau) -> e^{-tau} h(s, 1 - e^{-tau}) for tau >= 0.
inline TransformSolution additive_from_multiplicative(TransformSolution h) {
  return [h = std::move(h)](double s, double tau) {
    if (tau < 0.0) throw domain_error("time must be non-negative");
    return std::exp(-tau) * h(s, -std::expm1(-tau));
  };
}

struct DifferentiableFunction {
  std::function<double(double)> value;
  /// Optional; without it the solver uses fixed-point iteration only.
  std::function<double(double)> derivative;
};

inline constexpr int characteristics_max_iterations = 200;

/// Solves h = s + t xi(h) and returns xi(h).
inline double burgers_characteristics(const DifferentiableFunction& xi, double t, double s) {
  if (t == 0.0) return xi.value(s);
  double h = s + t * xi.value(s);
  for (int it = 0; it < characteristics_max_iterations; ++it) {
    const double residual = h - s - t * xi.value(h);
    double next = h - residual;
    if (xi.derivative) {
      const double slope = 1.0 - t * xi.derivative(h);
      if (slope > 0.0) next = h - residual / slope;
    }
    if (!std::isfinite(next)) break;
    const double change = std::abs(next - h);
    h = next;
    if (change <= 1e-13 * std::max(1.0, std::abs(h))) return xi.value(h);
  }
  throw no_convergence("characteristics did not converge at t = " + std::to_string(t) +
                       ", s = " + std::to_string(s));
}

/// x, exact density columns on a grid at time t.
inline void write_oracle_csv(std::ostream& os, const GridSpec& grid, double t) {
  os << "x,exact\n";
  os.precision(17);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << grid.node(i) << ',' << multiplicative_bessel(grid.node(i), t) << '\n';
  }
}

}  // namespace coagtree
