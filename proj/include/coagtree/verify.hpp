#pragma once

// Invariant suite shared by the `verify` command and the test binaries.

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coagtree/exact.hpp"
#include "coagtree/forest_io.hpp"
#include "coagtree/oracle.hpp"
#include "coagtree/plan.hpp"
#include "coagtree/series.hpp"
#include "coagtree/solver.hpp"
#include "coagtree/spectral.hpp"
#include "coagtree/tree.hpp"

namespace coagtree {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw error("cannot open " + p.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

inline int max_grade_of(const std::vector<std::string>& csv) {
  int g = 0;
  for (std::size_t i = 1; i < csv.size(); ++i) g = std::max(g, std::stoi(csv[i].substr(0, csv[i].find(','))));
  return g;
}

}  // namespace detail

/// Compares generated CSV against a golden file covering the same grades.
inline CheckResult compare_golden(const std::string& name, const std::filesystem::path& golden,
                                  const std::function<std::string(int)>& generate) {
  CheckResult r{name, false, ""};
  try {
    const auto expected = detail::read_lines(golden);
    if (expected.size() < 2) {
      r.detail = golden.string() + " is empty";
      return r;
    }
    const auto actual = detail::split_lines(generate(detail::max_grade_of(expected)));
    for (std::size_t i = 0; i < std::max(expected.size(), actual.size()); ++i) {
      const std::string e = i < expected.size() ? expected[i] : "<missing>";
      const std::string a = i < actual.size() ? actual[i] : "<missing>";
      if (e != a) {
        r.detail = golden.filename().string() + " line " + std::to_string(i + 1) + ": expected '" + e +
                   "', generated '" + a + "'";
        return r;
      }
    }
    r.passed = true;
    r.detail = std::to_string(expected.size() - 1) + " rows";
  } catch (const std::exception& ex) {
    r.detail = ex.what();
  }
  return r;
}

namespace detail {

inline CheckResult check(const std::string& name, const std::function<std::string()>& body) {
  CheckResult r{name, false, ""};
  try {
    r.detail = body();
    r.passed = r.detail.empty() || r.detail.rfind("ok", 0) == 0;
  } catch (const std::exception& e) {
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

}  // namespace detail

/// Combinatorial and exact-algebra invariants.
inline std::vector<CheckResult> combinatorial_checks() {
  std::vector<CheckResult> out;
  out.push_back(detail::check("catalan_counts_n<=10", [] {
    for (int n = 0; n <= 10; ++n) {
      if (BigInt(enumerate_planar(n).size()) != catalan(n)) return "grade " + std::to_string(n);
    }
    return std::string("ok");
  }));
  out.push_back(detail::check("wedderburn_etherington_counts_n<=6", [] {
    const int expected[] = {1, 1, 1, 2, 3, 6, 11};
    for (int n = 0; n <= 6; ++n) {
      if (enumerate_nonplanar(n).size() != static_cast<std::size_t>(expected[n])) return "grade " + std::to_string(n);
    }
    return std::string("ok");
  }));
  for (int n = 0; n <= 8; ++n) {
    out.push_back(detail::check("weight_sum_factorial_n=" + std::to_string(n), [n] {
      BigInt s = 0;
      for (const auto& tt : enumerate_planar(n).trees) s += tt.weight;
      return s == factorial(n) ? "ok " + s.str() : "sum " + s.str();
    }));
  }
  out.push_back(detail::check("branch_compatibility_n<=7", [] {
    for (int n = 0; n <= 7; ++n) {
      std::map<Tree, BigInt, TreeOrder> acc;
      for (const auto& tt : enumerate_planar(n).trees) {
        for (const auto& child : branch(tt.tree)) acc[child] += tt.weight;
      }
      for (const auto& tt : enumerate_planar(n + 1).trees) {
        if (acc[tt.tree] != tt.weight) return "tree " + tt.tree.word();
      }
    }
    return std::string("ok");
  }));
  out.push_back(detail::check("branch_matches_derivation_rule_n<=7", [] {
    for (int n = 0; n <= 7; ++n) {
      for (const auto& tt : enumerate_planar(n).trees) {
        auto a = branch(tt.tree);
        auto b = oracle::branch_by_derivation(tt.tree);
        std::sort(b.begin(), b.end(), TreeOrder{});
        if (a != b || a.size() != static_cast<std::size_t>(n + 1)) return "tree " + tt.tree.word();
      }
    }
    return std::string("ok");
  }));
  out.push_back(detail::check("weight_twist_invariance_grade<=8", [] {
    auto by_grade = detail::planar_by_grade(7);
    for (int ga = 0; ga <= 7; ++ga) {
      for (int gb = 0; ga + gb + 1 <= 8; ++gb) {
        for (const auto& a : by_grade[static_cast<std::size_t>(ga)]) {
          for (const auto& b : by_grade[static_cast<std::size_t>(gb)]) {
            if (weight(graft(a, b)) != weight(graft(b, a))) return "pair " + a.word() + "," + b.word();
          }
        }
      }
    }
    return std::string("ok");
  }));
  out.push_back(detail::check("canonical_matches_orbit_minimum_n<=7", [] {
    for (int n = 0; n <= 7; ++n) {
      for (const auto& tt : enumerate_planar(n).trees) {
        const auto orbit = oracle::twist_orbit(tt.tree);
        if (canonical_nonplanar(tt.tree) != *orbit.begin()) return "tree " + tt.tree.word();
        if (orbit.size() != (std::size_t{1} << tt.symmetry)) return "orbit size of " + tt.tree.word();
      }
    }
    return std::string("ok");
  }));
  out.push_back(detail::check("orbit_sizes_partition_planar_n<=8", [] {
    for (int n = 0; n <= 8; ++n) {
      BigInt s = 0;
      for (const auto& tt : enumerate_nonplanar(n).trees) s += BigInt(1) << tt.symmetry;
      if (s != catalan(n)) return "grade " + std::to_string(n);
    }
    return std::string("ok");
  }));
  out.push_back(detail::check("three_solution_forms_N<=7", [] {
    for (int n = 0; n <= 7; ++n) {
      for (const Rational& t : {Rational(1), Rational(1, 2), Rational(1, 3)}) {
        const auto closed = solution_coefficients(t, n);
        if (!(exponential_form(t, n) == closed)) return "exponential form N=" + std::to_string(n);
        if (!(resolvent_solve(t, n) == closed)) return "resolvent N=" + std::to_string(n);
      }
    }
    return std::string("ok");
  }));
  out.push_back(detail::check("grafting_identity_n<=6", [] {
    for (int n = 0; n <= 6; ++n) {
      if (!check_grafting_identity(n).holds) return "n=" + std::to_string(n);
    }
    return std::string("ok");
  }));
  out.push_back(detail::check("derivative_identity_N<=6", [] {
    for (int n = 1; n <= 6; ++n) {
      const Rational t(2, 5);
      const auto m = build_branch_matrix(n);
      if (!(solution_derivative(t, n) == m.apply_ungraded(solution_coefficients(t, n)))) {
        return "N=" + std::to_string(n);
      }
    }
    return std::string("ok");
  }));
  out.push_back(detail::check("quadratic_identity_n<=6", [] {
    for (int n = 0; n <= 6; ++n) {
      if (!check_quadratic_identity(Rational(3, 7), n).holds) return "n=" + std::to_string(n);
    }
    return std::string("ok");
  }));
  out.push_back(detail::check("plan_step_matches_series_N<=6", [] {
    for (int n = 1; n <= 6; ++n) {
      const Rational dt(1, 3);
      FormalGraftAlgebra alg(n);
      const auto stepped = advance(alg, SeriesVector::unit(n), dt, build_plan(n));
      if (!(stepped == project_nonplanar(to_plain(solution_coefficients(dt, n))))) return "N=" + std::to_string(n);
    }
    return std::string("ok");
  }));
  return out;
}

/// Floating-point checks on small grids.
inline std::vector<CheckResult> numerical_checks() {
  std::vector<CheckResult> out;
  out.push_back(detail::check("transform_round_trip", [] {
    const GridSpec grid(20.0, 1024);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GridFunction f = GridFunction::zeros(grid);
    for (auto& v : f.values) v = u(rng);
    FftEngine engine;
    const double err = l2_distance(inverse_transform(forward_transform(f, engine), engine), f) / l2_norm(f);
    return err <= 1e-12 ? "ok " + std::to_string(err) : "relative error " + std::to_string(err);
  }));
  out.push_back(detail::check("star_product_matches_direct_sum", [] {
    const GridSpec grid(20.0, 64);
    const auto g = GridFunction::sample(grid, [](double x) { return std::exp(-x) / x; });
    const auto f = GridFunction::sample(grid, [](double x) { return std::exp(-0.5 * x); });
    const KernelSpec k = kernels::SeparablePower{1.5};
    FftEngine engine;
    const auto fast = star_product(g, f, k, engine);
    const double err = l2_distance(fast, direct_star_oracle(g, f, k)) / l2_norm(fast);
    return err <= 1e-10 ? "ok " + std::to_string(err) : "relative error " + std::to_string(err);
  }));
  out.push_back(detail::check("bessel_small_time_limit", [] {
    for (double x = 0.01; x <= 100.0; x *= 1.5) {
      const double rel = std::abs(multiplicative_bessel(x, 1e-15) / (std::exp(-x) / x) - 1.0);
      if (rel > 1e-10) return "x=" + std::to_string(x);
    }
    return std::string("ok");
  }));
  return out;
}

/// Golden tables under `golden_dir` (planar.csv, nonplanar.csv).
inline std::vector<CheckResult> golden_checks(const std::filesystem::path& golden_dir) {
  return {compare_golden("golden_planar_tables", golden_dir / "planar.csv",
                         [](int g) { return planar_csv(g); }),
          compare_golden("golden_nonplanar_table", golden_dir / "nonplanar.csv",
                         [](int g) { return nonplanar_csv(g); })};
}

inline std::vector<CheckResult> run_all_checks(const std::filesystem::path& golden_dir) {
  auto all = golden_checks(golden_dir);
  for (auto& c : combinatorial_checks()) all.push_back(std::move(c));
  for (auto& c : numerical_checks()) all.push_back(std::move(c));
  return all;
}

}  // namespace coagtree
