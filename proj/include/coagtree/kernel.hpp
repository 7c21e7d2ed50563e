#pragma once

// Separable-family coagulation kernels K(y, z) = sum_ab c_ab k_a(y) k_b(z).

#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "coagtree/errors.hpp"
#include "coagtree/grid.hpp"

namespace coagtree {

namespace kernels {

struct Constant {};

/// k(x) = x^{lambda/2}, so K(y, z) = (y z)^{lambda/2}.
struct SeparablePower {
  double lambda = 0.0;
};

struct SeparableGeneral {
  GridFunction k;
};

/// K(y, z) = sum_ab c[a][b] k_a(y) k_b(z) with c symmetric.
struct SeparableSum {
  std::vector<GridFunction> factors;
  std::vector<std::vector<double>> c;
};

/// K(y, z) = k(y) + k(z).
struct GeneralAdditive {
  GridFunction k;
};

}  // namespace kernels

using KernelSpec = std::variant<kernels::Constant, kernels::SeparablePower, kernels::SeparableGeneral,
                                kernels::SeparableSum, kernels::GeneralAdditive>;

inline std::string kernel_name(const KernelSpec& k) {
  switch (k.index()) {
    case 0: return "constant";
    case 1: return "power";
    case 2: return "general";
    case 3: return "sum";
    default: return "additive";
  }
}

/// Factor samples and coupling matrix on a concrete grid.
struct SeparableForm {
  std::vector<std::vector<double>> factors;
  std::vector<std::vector<double>> c;
};

namespace detail {

inline void check_factor(const GridFunction& k, const GridSpec& grid) {
  require_same_grid(k.grid, grid);
  for (double v : k.values) {
    if (!std::isfinite(v) || v <= 0.0) throw domain_error("kernel factor samples must be positive and finite");
  }
}

}  // namespace detail

inline SeparableForm separable_form(const KernelSpec& spec, const GridSpec& grid) {
  SeparableForm f;
  const std::size_t n = grid.size();
  if (std::holds_alternative<kernels::Constant>(spec)) {
    f.factors.emplace_back(n, 1.0);
    f.c = {{1.0}};
  } else if (const auto* p = std::get_if<kernels::SeparablePower>(&spec)) {
    if (!std::isfinite(p->lambda)) throw domain_error("kernel exponent must be finite");
    std::vector<double> k(n);
    for (std::size_t i = 0; i < n; ++i) k[i] = std::pow(grid.node(i), p->lambda / 2.0);
    f.factors.push_back(std::move(k));
    f.c = {{1.0}};
  } else if (const auto* g = std::get_if<kernels::SeparableGeneral>(&spec)) {
    detail::check_factor(g->k, grid);
    f.factors.push_back(g->k.values);
    f.c = {{1.0}};
  } else if (const auto* s = std::get_if<kernels::SeparableSum>(&spec)) {
    const std::size_t m = s->factors.size();
    if (m == 0 || s->c.size() != m) throw unsupported_kernel("coupling matrix must be square over the factors");
    for (std::size_t a = 0; a < m; ++a) {
      if (s->c[a].size() != m) throw unsupported_kernel("coupling matrix must be square over the factors");
      for (std::size_t b = 0; b < m; ++b) {
        if (s->c[a][b] != s->c[b][a]) throw unsupported_kernel("coupling matrix must be symmetric");
      }
      detail::check_factor(s->factors[a], grid);
      f.factors.push_back(s->factors[a].values);
    }
    f.c = s->c;
  } else {
    const auto& a = std::get<kernels::GeneralAdditive>(spec);
    detail::check_factor(a.k, grid);
    f.factors.push_back(a.k.values);
    f.factors.emplace_back(n, 1.0);
    f.c = {{0.0, 1.0}, {1.0, 0.0}};
  }
  return f;
}

/// K(x_mu, x_nu) evaluated from the kernel definition, not the factorization.
inline double kernel_value(const KernelSpec& spec, const GridSpec& grid, std::size_t mu, std::size_t nu) {
  const double y = grid.node(mu);
  const double z = grid.node(nu);
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, kernels::Constant>) {
          return 1.0;
        } else if constexpr (std::is_same_v<K, kernels::SeparablePower>) {
          return std::pow(y * z, k.lambda / 2.0);
        } else if constexpr (std::is_same_v<K, kernels::SeparableGeneral>) {
          return k.k.values[mu] * k.k.values[nu];
        } else if constexpr (std::is_same_v<K, kernels::SeparableSum>) {
          double s = 0.0;
          for (std::size_t a = 0; a < k.factors.size(); ++a) {
            for (std::size_t b = 0; b < k.factors.size(); ++b) {
              s += k.c[a][b] * k.factors[a].values[mu] * k.factors[b].values[nu];
            }
          }
          return s;
        } else {
          return k.k.values[mu] + k.k.values[nu];
        }
      },
      spec);
}

}  // namespace coagtree
