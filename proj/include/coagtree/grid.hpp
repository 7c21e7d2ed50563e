#pragma once

// Equispaced positive mass grid x_nu = (nu + 1) h, h = L / n, and sampled
// functions on it in physical and transform space.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "coagtree/errors.hpp"

namespace coagtree {

class GridSpec {
 public:
  GridSpec() = default;

  /// Throws domain_error unless L > 0 and n >= 2 is a power of two.
  GridSpec(double length, std::size_t n) : length_(length), n_(n) {
    if (!(length > 0.0) || !std::isfinite(length)) throw domain_error("grid length must be positive");
    if (n < 2 || (n & (n - 1)) != 0) {
      throw domain_error("node count must be a power of two >= 2, got " + std::to_string(n));
    }
  }

  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return length_ / static_cast<double>(n_); }
  double node(std::size_t nu) const noexcept { return static_cast<double>(nu + 1) * spacing(); }

  /// Signed frequency index of native position k: k for k < n/2, else k - n.
  long signed_index(std::size_t k) const noexcept {
    return k < n_ / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n_);
  }

  /// s_k = (signed index) / (n h).
  double frequency(std::size_t k) const noexcept {
    return static_cast<double>(signed_index(k)) / length_;
  }

  std::vector<double> nodes() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
    return x;
  }

  friend bool operator==(const GridSpec& a, const GridSpec& b) noexcept {
    return a.length_ == b.length_ && a.n_ == b.n_;
  }

 private:
  double length_ = 1.0;
  std::size_t n_ = 2;
};

struct GridFunction {
  GridSpec grid;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(GridSpec g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw grid_mismatch("sample count does not match the grid");
  }

  static GridFunction zeros(const GridSpec& g) { return {g, std::vector<double>(g.size(), 0.0)}; }

  static GridFunction sample(const GridSpec& g, const std::function<double(double)>& f) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.node(i));
    return {g, std::move(v)};
  }

  std::size_t size() const noexcept { return values.size(); }

  bool all_finite() const noexcept {
    for (double v : values) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }
};

struct SpectralFunction {
  GridSpec grid;
  /// Native transform order; see GridSpec::signed_index for the mapping.
  std::vector<std::complex<double>> values;

  static SpectralFunction zeros(const GridSpec& g) {
    return {g, std::vector<std::complex<double>>(g.size())};
  }

  std::size_t size() const noexcept { return values.size(); }
  std::complex<double> zero_frequency() const { return values.at(0); }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw grid_mismatch("operands live on different grids");
}

/// sqrt(h * sum |f|^2), the discrete L2 norm used for every error report.
inline double l2_norm(const GridFunction& f) {
  double s = 0.0;
  for (double v : f.values) s += v * v;
  return std::sqrt(f.grid.spacing() * s);
}

inline double l2_distance(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a.grid, b.grid);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return std::sqrt(a.grid.spacing() * s);
}

inline double l2_norm(const SpectralFunction& f) {
  double s = 0.0;
  for (const auto& v : f.values) s += std::norm(v);
  return std::sqrt(s);
}

inline double l2_distance(const SpectralFunction& a, const SpectralFunction& b) {
  require_same_grid(a.grid, b.grid);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(s);
}

inline void write_csv(std::ostream& os, const GridFunction& f) {
  os << "x,value\n";
  os.precision(17);
  for (std::size_t i = 0; i < f.size(); ++i) os << f.grid.node(i) << ',' << f.values[i] << '\n';
}

inline void write_csv(std::ostream& os, const SpectralFunction& f) {
  os << "k,s,re,im\n";
  os.precision(17);
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << f.grid.signed_index(i) << ',' << f.grid.frequency(i) << ',' << f.values[i].real() << ','
       << f.values[i].imag() << '\n';
  }
}

}  // namespace coagtree
