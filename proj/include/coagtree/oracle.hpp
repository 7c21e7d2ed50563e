#pragma once

// Brute-force reference implementations used to cross-check the production
// algorithms. Deliberately simple and slow.

#include <set>
#include <vector>

#include "coagtree/tree.hpp"

namespace coagtree::oracle {

/// Every tree reachable from t by twisting any subset of vertices.
inline std::set<Tree, WordOrder> twist_orbit(const Tree& t) {
  if (t.is_leaf()) return {t};
  auto [l, r] = split_root(t);
  const auto lo = twist_orbit(l);
  const auto ro = twist_orbit(r);
  std::set<Tree, WordOrder> out;
  for (const auto& a : lo) {
    for (const auto& b : ro) {
      out.insert(graft(a, b));
      out.insert(graft(b, a));
    }
  }
  return out;
}

/// Branching by the derivation rule B(a * b) = B(a) * b + a * B(b).
inline std::vector<Tree> branch_by_derivation(const Tree& t) {
  if (t.is_leaf()) return {graft(Tree::leaf(), Tree::leaf())};
  auto [l, r] = split_root(t);
  std::vector<Tree> out;
  for (const auto& a : branch_by_derivation(l)) out.push_back(graft(a, r));
  for (const auto& b : branch_by_derivation(r)) out.push_back(graft(l, b));
  return out;
}

/// Planar trees of grade n in numeric word order, by brute-force filtering
/// of all level sequences.
inline std::vector<Tree> planar_by_filtering(int n) {
  std::vector<Tree> out;
  if (n == 0) return {Tree::leaf()};
  std::vector<Tree::Level> levels(static_cast<std::size_t>(n), 1);
  while (true) {
    if (detail::valid_segment(levels, 1)) out.push_back(Tree::from_levels(levels));
    std::size_t i = levels.size();
    while (i > 0 && levels[i - 1] == n) levels[--i] = 1;
    if (i == 0) break;
    ++levels[i - 1];
  }
  return out;
}

}  // namespace coagtree::oracle
