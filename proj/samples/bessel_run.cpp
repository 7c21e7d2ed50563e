// Multiplicative kernel from e^{-x}/x: one run per order against the closed form.

#include <cstdio>

#include "coagtree/coagtree.hpp"

int main() {
  using namespace coagtree;
  SolverConfig c;
  c.grid = GridSpec(100.0, 1u << 12);
  c.kernel = kernels::SeparablePower{2.0};
  c.horizon = 0.5;
  c.steps = 32;
  const auto exact = multiplicative_bessel(c.grid, c.horizon);
  std::printf("%-3s %-12s %-12s %s\n", "N", "error", "M1(T)", "transforms");
  for (int n = 1; n <= 4; ++n) {
    c.order = n;
    const auto tr = run(c);
    std::printf("%-3d %-12.4e %-12.8f %llu\n", n, l2_distance(tr.final_state, exact), tr.records.back().m1,
                static_cast<unsigned long long>(tr.records.back().fft_count));
  }
}
