#pragma once

// Discrete transform F_k = h * sum_nu exp(2 pi i s_k x_nu) f_nu on the node
// positions x_nu = (nu + 1) h, its inverse, and the FFT star product.

#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "coagtree/errors.hpp"
#include "coagtree/fft.hpp"
#include "coagtree/grid.hpp"
#include "coagtree/kernel.hpp"

namespace coagtree {

namespace detail {

inline SpectralFunction forward_complex(const GridSpec& grid, const std::vector<std::complex<double>>& in,
                                        FftEngine& engine) {
  const std::size_t n = grid.size();
  SpectralFunction out{grid, std::vector<std::complex<double>>(n)};
  engine.execute(FftEngine::Sign::positive, in.data(), out.values.data(), n);
  const auto& roots = engine.plan(n).roots;
  const double h = grid.spacing();
  for (std::size_t k = 0; k < n; ++k) out.values[k] *= h * roots[k];
  return out;
}

}  // namespace detail

inline SpectralFunction forward_transform(const GridFunction& f, FftEngine& engine = FftEngine::shared()) {
  std::vector<std::complex<double>> in(f.values.begin(), f.values.end());
  return detail::forward_complex(f.grid, in, engine);
}

/// Complex samples of the inverse transform; exact inverse of forward_transform.
inline std::vector<std::complex<double>> inverse_transform_complex(const SpectralFunction& F,
                                                                   FftEngine& engine = FftEngine::shared()) {
  const std::size_t n = F.grid.size();
  if (F.values.size() != n) throw grid_mismatch("spectral sample count does not match the grid");
  const auto& roots = engine.plan(n).roots;
  std::vector<std::complex<double>> in(n);
  for (std::size_t k = 0; k < n; ++k) in[k] = F.values[k] * std::conj(roots[k]);
  std::vector<std::complex<double>> out(n);
  engine.execute(FftEngine::Sign::negative, in.data(), out.data(), n);
  const double scale = 1.0 / (static_cast<double>(n) * F.grid.spacing());
  for (auto& v : out) v *= scale;
  return out;
}

/// Real part of the inverse transform.
inline GridFunction inverse_transform(const SpectralFunction& F, FftEngine& engine = FftEngine::shared()) {
  const auto c = inverse_transform_complex(F, engine);
  std::vector<double> v(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) v[i] = c[i].real();
  return {F.grid, std::move(v)};
}

/// Transforms F(k_a g) and F(x k_a g) for every kernel factor a.
struct FactorTransforms {
  std::vector<SpectralFunction> plain;
  std::vector<SpectralFunction> moment;
};

inline FactorTransforms transform_factors(const GridFunction& g, const SeparableForm& form,
                                          FftEngine& engine = FftEngine::shared()) {
  const std::size_t n = g.grid.size();
  FactorTransforms t;
  std::vector<std::complex<double>> buf(n);
  for (const auto& k : form.factors) {
    if (k.size() != n) throw grid_mismatch("kernel factor length does not match the grid");
    for (std::size_t i = 0; i < n; ++i) buf[i] = k[i] * g.values[i];
    t.plain.push_back(detail::forward_complex(g.grid, buf, engine));
    for (std::size_t i = 0; i < n; ++i) buf[i] = g.grid.node(i) * k[i] * g.values[i];
    t.moment.push_back(detail::forward_complex(g.grid, buf, engine));
  }
  return t;
}

/// 1/2 sum_ab c_ab [F(x k_a g)(F(k_b f) - F_0(k_b f)) + (F(k_a g) - F_0(k_a g)) F(x k_b f)].
inline SpectralFunction star_from_transforms(const FactorTransforms& g, const FactorTransforms& f,
                                             const SeparableForm& form) {
  const GridSpec grid = g.plain.at(0).grid;
  require_same_grid(grid, f.plain.at(0).grid);
  const std::size_t n = grid.size();
  SpectralFunction out = SpectralFunction::zeros(grid);
  const std::size_t m = form.factors.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const double c = form.c[a][b];
      if (c == 0.0) continue;
      const auto& ga = g.plain[a].values;
      const auto& lga = g.moment[a].values;
      const auto& fb = f.plain[b].values;
      const auto& lfb = f.moment[b].values;
      const auto ga0 = ga[0];
      const auto fb0 = fb[0];
      const double w = 0.5 * c;
      for (std::size_t k = 0; k < n; ++k) {
        out.values[k] += w * (lga[k] * (fb[k] - fb0) + (ga[k] - ga0) * lfb[k]);
      }
    }
  }
  return out;
}

inline SpectralFunction star_product(const GridFunction& g, const GridFunction& f, const KernelSpec& kernel,
                                     FftEngine& engine = FftEngine::shared()) {
  require_same_grid(g.grid, f.grid);
  const auto form = separable_form(kernel, g.grid);
  return star_from_transforms(transform_factors(g, form, engine), transform_factors(f, form, engine), form);
}

/// Largest n accepted by the O(n^3) oracle.
inline constexpr std::size_t direct_oracle_max_nodes = 4096;

/// h^2 sum_mu sum_nu H(s_k, x_mu, x_nu) K(x_mu, x_nu) g_mu f_nu with
/// H(s, y, z) = 1/2 [y e(sy)(e(sz) - 1) + (e(sy) - 1) z e(sz)], e(u) = exp(2 pi i u).
inline SpectralFunction direct_star_oracle(const GridFunction& g, const GridFunction& f, const KernelSpec& kernel) {
  require_same_grid(g.grid, f.grid);
  const GridSpec grid = g.grid;
  const std::size_t n = grid.size();
  if (n > direct_oracle_max_nodes) {
    throw resource_limit("direct product oracle is limited to n <= " + std::to_string(direct_oracle_max_nodes));
  }
  std::vector<double> weight(n * n);
  for (std::size_t mu = 0; mu < n; ++mu) {
    for (std::size_t nu = 0; nu < n; ++nu) {
      weight[mu * n + nu] = kernel_value(kernel, grid, mu, nu) * g.values[mu] * f.values[nu];
    }
  }
  std::vector<std::complex<double>> roots(n);
  for (std::size_t j = 0; j < n; ++j) {
    roots[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
  }
  const double h = grid.spacing();
  SpectralFunction out = SpectralFunction::zeros(grid);
  std::vector<std::complex<double>> e(n);
  for (std::size_t k = 0; k < n; ++k) {
    // s_k x_nu = k (nu + 1) / n modulo integers.
    for (std::size_t nu = 0; nu < n; ++nu) e[nu] = roots[(k * (nu + 1)) % n];
    std::complex<double> acc = 0.0;
    for (std::size_t mu = 0; mu < n; ++mu) {
      const double y = grid.node(mu);
      const auto ey = e[mu];
      for (std::size_t nu = 0; nu < n; ++nu) {
        const double z = grid.node(nu);
        const auto ez = e[nu];
        const auto H = 0.5 * (y * ey * (ez - 1.0) + (ey - 1.0) * z * ez);
        acc += H * weight[mu * n + nu];
      }
    }
    out.values[k] = h * h * acc;
  }
  return out;
}

/// h * sum_nu x_nu^k g(x_nu).
inline double moment(const GridFunction& g, int k) {
  if (k < 0) throw domain_error("moment order must be non-negative");
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double xk = 1.0;
    const double x = g.grid.node(i);
    for (int j = 0; j < k; ++j) xk *= x;
    s += xk * g.values[i];
  }
  return g.grid.spacing() * s;
}

/// Physical-space function behind a spectral product value: inverse transform over x.
inline GridFunction physical_from_spectral(const SpectralFunction& S, FftEngine& engine = FftEngine::shared()) {
  GridFunction r = inverse_transform(S, engine);
  for (std::size_t i = 0; i < r.size(); ++i) r.values[i] /= r.grid.node(i);
  return r;
}

}  // namespace coagtree
