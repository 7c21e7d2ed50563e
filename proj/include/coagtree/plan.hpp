#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include "coagtree/errors.hpp"
#include "coagtree/series.hpp"
#include "coagtree/tree.hpp"

namespace coagtree {

struct PlanStep {
  Tree code;
  Tree left;
  Tree right;
  BigInt weight;
  int symmetry = 0;
  /// w(tau) 2^sigma(tau) / |tau|!
  Rational coefficient;

  int grade() const noexcept { return code.grade(); }
};

/// Grafting decompositions of the non-planar representatives of grades 1..order,
/// grade by grade, each grade in tree order.
struct EvaluationPlan {
  int order = 0;
  std::vector<PlanStep> steps;

  std::vector<const PlanStep*> grade(int g) const {
    std::vector<const PlanStep*> out;
    for (const auto& s : steps) {
      if (s.grade() == g) out.push_back(&s);
    }
    return out;
  }
};

inline EvaluationPlan build_plan(int order, int cap = default_grade_cap) {
  if (order < 1) throw domain_error("plan order must be at least 1");
  if (order > cap) throw resource_limit("plan order " + std::to_string(order) + " exceeds the grade cap");
  EvaluationPlan plan;
  plan.order = order;
  std::unordered_set<std::string> available{Tree::leaf().word()};
  for (int g = 1; g <= order; ++g) {
    for (const auto& tt : enumerate_nonplanar(g, cap).trees) {
      auto [l, r] = split_root(tt.tree);
      PlanStep s{tt.tree, canonical_nonplanar(l), canonical_nonplanar(r), tt.weight, tt.symmetry, 0};
      if (graft(s.left, s.right) != s.code || !available.contains(s.left.word()) ||
          !available.contains(s.right.word())) {
        throw invalid_code("representative " + s.code.word() + " has no decomposition over earlier steps");
      }
      s.coefficient = Rational(s.weight * (BigInt(1) << s.symmetry), factorial(g));
      plan.steps.push_back(std::move(s));
    }
    for (const auto& s : plan.steps) available.insert(s.code.word());
  }
  return plan;
}

}  // namespace coagtree
