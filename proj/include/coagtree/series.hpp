#pragma once

// Exponential tree series as exact coefficient vectors in tree order.
//
// A SeriesVector with coefficients h_tau stands for sum h_tau / |tau|! * tau.
// Functions named *_plain work in the plain tree basis sum c_tau * tau.

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "coagtree/errors.hpp"
#include "coagtree/tree.hpp"

namespace coagtree {

using Rational = boost::multiprecision::cpp_rational;

class SeriesVector {
 public:
  using Map = std::map<Tree, Rational, TreeOrder>;

  explicit SeriesVector(int max_grade = 0) : max_grade_(max_grade) {}

  int max_grade() const noexcept { return max_grade_; }
  const Map& coeffs() const noexcept { return coeffs_; }

  Rational at(const Tree& t) const {
    auto it = coeffs_.find(t);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }

  /// Sets a coefficient; zero erases. Trees above max_grade are dropped.
  void set(const Tree& t, const Rational& value) {
    if (t.grade() > max_grade_) return;
    if (value == 0) {
      coeffs_.erase(t);
    } else {
      coeffs_[t] = value;
    }
  }

  void add(const Tree& t, const Rational& value) { set(t, at(t) + value); }

  static SeriesVector unit(int max_grade) {
    SeriesVector v(max_grade);
    v.set(Tree::leaf(), 1);
    return v;
  }

  SeriesVector& operator+=(const SeriesVector& o) {
    for (const auto& [t, c] : o.coeffs_) add(t, c);
    return *this;
  }

  SeriesVector scaled(const Rational& s) const {
    SeriesVector out(max_grade_);
    for (const auto& [t, c] : coeffs_) out.set(t, c * s);
    return out;
  }

  /// Coefficients of one grade only.
  SeriesVector restricted_to_grade(int n) const {
    SeriesVector out(max_grade_);
    for (const auto& [t, c] : coeffs_) {
      if (t.grade() == n) out.set(t, c);
    }
    return out;
  }

  friend bool operator==(const SeriesVector& a, const SeriesVector& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  int max_grade_;
  Map coeffs_;
};

/// The grade-n slice g_n = sum over |tau| = n of w(tau) * tau, as coefficients.
inline SeriesVector grade_slice(int n, int cap = default_grade_cap) {
  const auto forest = enumerate_planar(n, cap);
  SeriesVector v(n);
  for (const auto& tt : forest.trees) v.set(tt.tree, Rational(tt.weight));
  return v;
}

/// Sparse multiplicity matrix of the graded branching operator up to max_grade.
class BranchMatrix {
 public:
  struct Entry {
    std::size_t row;
    int multiplicity;
  };

  static BranchMatrix build(int max_grade, int cap = default_grade_cap) {
    if (max_grade < 0) throw domain_error("max grade must be non-negative");
    if (max_grade > cap) {
      throw resource_limit("grade " + std::to_string(max_grade) + " exceeds the grade cap " +
                           std::to_string(cap));
    }
    BranchMatrix m;
    m.max_grade_ = max_grade;
    for (const auto& grade : detail::planar_by_grade(max_grade)) {
      for (const auto& t : grade) {
        m.index_.emplace(t.word(), m.trees_.size());
        m.trees_.push_back(t);
      }
    }
    m.columns_.resize(m.trees_.size());
    for (std::size_t j = 0; j < m.trees_.size(); ++j) {
      if (m.trees_[j].grade() == max_grade) continue;
      std::map<std::size_t, int> counts;
      for (const auto& child : branch(m.trees_[j])) ++counts[m.index_of(child)];
      for (const auto& [row, mult] : counts) m.columns_[j].push_back({row, mult});
    }
    return m;
  }

  int max_grade() const noexcept { return max_grade_; }
  std::size_t dimension() const noexcept { return trees_.size(); }
  const std::vector<Tree>& trees() const noexcept { return trees_; }

  std::size_t index_of(const Tree& t) const {
    auto it = index_.find(t.word());
    if (it == index_.end()) throw invalid_code("tree " + t.word() + " outside the matrix");
    return it->second;
  }

  int entry(std::size_t row, std::size_t col) const {
    for (const auto& e : columns_.at(col)) {
      if (e.row == row) return e.multiplicity;
    }
    return 0;
  }

  /// Dense view, rows and columns in tree order.
  std::vector<std::vector<int>> dense() const {
    std::vector<std::vector<int>> d(dimension(), std::vector<int>(dimension(), 0));
    for (std::size_t j = 0; j < dimension(); ++j) {
      for (const auto& e : columns_[j]) d[e.row][j] = e.multiplicity;
    }
    return d;
  }

  /// Graded action: multiplicities only.
  SeriesVector apply(const SeriesVector& v) const { return apply_impl(v, false); }

  /// Non-graded action: the graded result scaled by the grade of each target tree.
  SeriesVector apply_ungraded(const SeriesVector& v) const { return apply_impl(v, true); }

 private:
  SeriesVector apply_impl(const SeriesVector& v, bool scale_by_grade) const {
    SeriesVector out(max_grade_);
    for (const auto& [t, c] : v.coeffs()) {
      if (t.grade() >= max_grade_) continue;
      for (const auto& e : columns_[index_of(t)]) {
        Rational term = c * e.multiplicity;
        if (scale_by_grade) term *= trees_[e.row].grade();
        out.add(trees_[e.row], term);
      }
    }
    return out;
  }

  int max_grade_ = 0;
  std::vector<Tree> trees_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<Entry>> columns_;
};

inline BranchMatrix build_branch_matrix(int max_grade, int cap = default_grade_cap) {
  return BranchMatrix::build(max_grade, cap);
}

inline SeriesVector apply_matrix_power(const BranchMatrix& m, int k, SeriesVector v) {
  if (k < 0) throw domain_error("matrix power must be non-negative");
  for (int i = 0; i < k; ++i) v = m.apply(v);
  return v;
}

inline Rational rational_pow(const Rational& t, int n) {
  Rational r = 1;
  for (int i = 0; i < n; ++i) r *= t;
  return r;
}

/// Closed form h_tau = w(tau) t^|tau| for all trees of grade <= n.
inline SeriesVector solution_coefficients(const Rational& t, int n, int cap = default_grade_cap) {
  if (n > cap) throw resource_limit("grade " + std::to_string(n) + " exceeds the grade cap");
  SeriesVector v(n);
  for (int g = 0; g <= n; ++g) {
    const Rational tg = rational_pow(t, g);
    for (const auto& tt : enumerate_planar(g, cap).trees) v.set(tt.tree, Rational(tt.weight) * tg);
  }
  return v;
}

/// Termwise time derivative of the closed form.
inline SeriesVector solution_derivative(const Rational& t, int n, int cap = default_grade_cap) {
  SeriesVector v(n);
  for (int g = 1; g <= n; ++g) {
    const Rational tg = rational_pow(t, g - 1) * g;
    for (const auto& tt : enumerate_planar(g, cap).trees) v.set(tt.tree, Rational(tt.weight) * tg);
  }
  return v;
}

/// Truncated exponential sum_k t^k / k! * B_m^k e_0 with the non-graded matrix.
inline SeriesVector exponential_form(const Rational& t, int n, int cap = default_grade_cap) {
  const auto m = build_branch_matrix(n, cap);
  SeriesVector term = SeriesVector::unit(n);
  SeriesVector sum = term;
  Rational factor = 1;
  for (int k = 1; k <= n; ++k) {
    term = m.apply_ungraded(term);
    factor = factor * t / k;
    sum += term.scaled(factor);
  }
  return sum;
}

/// Solves (I - t B^m) x = e_0 by forward substitution over grades.
inline SeriesVector resolvent_solve(const Rational& t, int n, int cap = default_grade_cap) {
  const auto m = build_branch_matrix(n, cap);
  SeriesVector x = SeriesVector::unit(n);
  SeriesVector level = x;
  for (int g = 1; g <= n; ++g) {
    // Rows of grade g only see columns of grade g - 1, so each grade is one
    // substitution step.
    level = m.apply(level).scaled(t);
    x += level;
  }
  return x;
}

/// Plain-basis coefficients c_tau = h_tau / |tau|!.
inline SeriesVector to_plain(const SeriesVector& v) {
  SeriesVector out(v.max_grade());
  for (const auto& [t, c] : v.coeffs()) out.set(t, c / Rational(factorial(t.grade())));
  return out;
}

inline SeriesVector from_plain(const SeriesVector& v) {
  SeriesVector out(v.max_grade());
  for (const auto& [t, c] : v.coeffs()) out.set(t, c * Rational(factorial(t.grade())));
  return out;
}

/// Bilinear root graft of two plain-basis series.
inline SeriesVector graft_plain(const SeriesVector& a, const SeriesVector& b, int max_grade) {
  SeriesVector out(max_grade);
  for (const auto& [ta, ca] : a.coeffs()) {
    for (const auto& [tb, cb] : b.coeffs()) {
      if (ta.grade() + tb.grade() + 1 > max_grade) continue;
      out.add(graft(ta, tb), ca * cb);
    }
  }
  return out;
}

struct IdentityReport {
  bool holds = false;
  int grade = 0;
  SeriesVector lhs;
  SeriesVector rhs;
};

/// g_{n+1} = sum_k C(n,k) graft(g_{n-k}, g_k), as exact plain-basis equality.
inline IdentityReport check_grafting_identity(int n, int cap = default_grade_cap) {
  if (n < 0) throw domain_error("grade must be non-negative");
  if (n + 1 > cap) throw resource_limit("grade " + std::to_string(n + 1) + " exceeds the grade cap");
  IdentityReport r;
  r.grade = n + 1;
  r.lhs = grade_slice(n + 1, cap);
  r.rhs = SeriesVector(n + 1);
  for (int k = 0; k <= n; ++k) {
    const auto term = graft_plain(grade_slice(n - k, cap), grade_slice(k, cap), n + 1);
    r.rhs += term.scaled(Rational(detail::binomial(n, k)));
  }
  r.holds = r.lhs == r.rhs;
  return r;
}

/// Grade-(n+1) slice of graft(g, g) against the grade-(n+1) slice of dg/dt,
/// both in the plain basis, for the solution series at time t.
inline IdentityReport check_quadratic_identity(const Rational& t, int n, int cap = default_grade_cap) {
  const auto sol = to_plain(solution_coefficients(t, n, cap));
  IdentityReport r;
  r.grade = n + 1;
  r.lhs = graft_plain(sol, sol, n + 1).restricted_to_grade(n + 1);
  r.rhs = to_plain(solution_derivative(t, n + 1, cap)).restricted_to_grade(n + 1);
  r.holds = r.lhs == r.rhs;
  return r;
}

struct ConvergenceDiagnostic {
  double bound_ratio = 0.0;
  std::vector<double> grade_terms;
  std::vector<double> observed_ratios;
  std::vector<double> geometric_tail;
  bool dominated = false;
};

/// Grade terms sum_{|tau|=n} w(tau)/n! * t^n against the geometric majorant
/// Lambda^n. Reports ratios; convergence itself is not asserted.
inline ConvergenceDiagnostic convergence_diagnostic(double t, double lambda, int n,
                                                    int cap = default_grade_cap) {
  ConvergenceDiagnostic d;
  d.bound_ratio = lambda;
  d.dominated = true;
  double tn = 1.0;
  double ln = 1.0;
  for (int g = 0; g <= n; ++g) {
    BigInt wsum = 0;
    for (const auto& tt : enumerate_planar(g, cap).trees) wsum += tt.weight;
    const double coeff = static_cast<double>(Rational(wsum, factorial(g)));
    const double term = coeff * tn;
    d.grade_terms.push_back(term);
    d.geometric_tail.push_back(lambda < 1.0 ? ln / (1.0 - lambda) : 0.0);
    if (g > 0 && d.grade_terms[static_cast<std::size_t>(g) - 1] != 0.0) {
      d.observed_ratios.push_back(term / d.grade_terms[static_cast<std::size_t>(g) - 1]);
    }
    if (std::abs(term) > ln * (1.0 + 1e-12)) d.dominated = false;
    tn *= t;
    ln *= lambda;
  }
  return d;
}

inline nlohmann::json to_json(const SeriesVector& v) {
  nlohmann::json coeffs = nlohmann::json::object();
  for (const auto& [t, c] : v.coeffs()) {
    coeffs[t.word()] = {{"num", boost::multiprecision::numerator(c).str()},
                        {"den", boost::multiprecision::denominator(c).str()}};
  }
  return {{"max_grade", v.max_grade()}, {"coeffs", coeffs}};
}

}  // namespace coagtree
