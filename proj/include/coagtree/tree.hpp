#pragma once

// Rooted planar binary trees stored as "levels" word-codes.
//
// A tree of grade n >= 1 is a sequence of n levels. The root vertex carries
// level 1 and is the unique 1 in the code; the digits to its left (right)
// encode the left (right) subtree with every level raised by one. The grade-0
// leaf has the empty level sequence and is written "0".

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "coagtree/errors.hpp"

namespace coagtree {

using BigInt = boost::multiprecision::cpp_int;

/// Largest grade produced by the enumerators unless a caller opts in.
inline constexpr int default_grade_cap = 12;

class Tree {
 public:
  using Level = std::uint8_t;

  /// The grade-0 leaf.
  Tree() = default;

  static Tree leaf() { return Tree{}; }

  /// Validates `levels`; a single 0 denotes the leaf.
  static Tree from_levels(std::vector<Level> levels);

  /// Parses "0", "212" or the dotted form "1.2.10..." used once a level exceeds 9.
  static Tree parse(std::string_view word);

  std::string word() const;
  int grade() const noexcept { return static_cast<int>(levels_.size()); }
  bool is_leaf() const noexcept { return levels_.empty(); }

  /// Level sequence; empty for the leaf.
  std::span<const Level> levels() const noexcept { return levels_; }

  /// The word-code as printed in tree tables ({0} for the leaf).
  std::vector<Level> code() const { return is_leaf() ? std::vector<Level>{0} : levels_; }

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  explicit Tree(std::vector<Level> levels) : levels_(std::move(levels)) {}

  friend Tree graft(const Tree& left, const Tree& right);
  friend Tree canonical_nonplanar(const Tree& t);
  friend std::vector<Tree> branch(const Tree& t);
  friend class TreeBuilder;

  std::vector<Level> levels_;
};

/// Numeric order of word-codes: grade first, then lexicographic levels.
/// This is the order used to choose non-planar representatives.
struct WordOrder {
  bool operator()(const Tree& a, const Tree& b) const noexcept {
    if (a.grade() != b.grade()) return a.grade() < b.grade();
    auto la = a.levels();
    auto lb = b.levels();
    return std::lexicographical_compare(la.begin(), la.end(), lb.begin(), lb.end());
  }
};

namespace detail {

using Levels = std::span<const Tree::Level>;

/// Position of the root (the minimum level) of a nonempty segment.
inline std::size_t root_position(Levels seg) {
  return static_cast<std::size_t>(std::min_element(seg.begin(), seg.end()) - seg.begin());
}

inline bool valid_segment(Levels seg, int level) {
  if (seg.empty()) return true;
  std::size_t root = seg.size();
  for (std::size_t i = 0; i < seg.size(); ++i) {
    if (seg[i] < level) return false;
    if (seg[i] == level) {
      if (root != seg.size()) return false;
      root = i;
    }
  }
  if (root == seg.size()) return false;
  return valid_segment(seg.subspan(0, root), level + 1) &&
         valid_segment(seg.subspan(root + 1), level + 1);
}

/// Grafting order: grade, then left-subtree grade, then left subtree, then
/// right subtree. Reproduces the row order of the published tree tables.
inline std::strong_ordering tree_order(Levels a, Levels b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  if (a.empty()) return std::strong_ordering::equal;
  const auto ra = root_position(a);
  const auto rb = root_position(b);
  if (auto c = ra <=> rb; c != 0) return c;
  if (auto c = tree_order(a.subspan(0, ra), b.subspan(0, rb)); c != 0) return c;
  return tree_order(a.subspan(ra + 1), b.subspan(rb + 1));
}

inline void append_shifted(std::vector<Tree::Level>& out, Levels seg) {
  for (auto v : seg) out.push_back(static_cast<Tree::Level>(v + 1));
}

/// Lowest word-code in the twist class of `seg`, levels kept absolute.
inline std::vector<Tree::Level> canonical_levels(Levels seg) {
  if (seg.empty()) return {};
  const auto r = root_position(seg);
  auto left = canonical_levels(seg.subspan(0, r));
  auto right = canonical_levels(seg.subspan(r + 1));
  std::vector<Tree::Level> a;
  std::vector<Tree::Level> b;
  a.reserve(seg.size());
  b.reserve(seg.size());
  a.insert(a.end(), left.begin(), left.end());
  a.push_back(seg[r]);
  a.insert(a.end(), right.begin(), right.end());
  b.insert(b.end(), right.begin(), right.end());
  b.push_back(seg[r]);
  b.insert(b.end(), left.begin(), left.end());
  return std::min(a, b);
}

inline int symmetry_of(Levels seg) {
  if (seg.empty()) return 0;
  const auto r = root_position(seg);
  auto left = seg.subspan(0, r);
  auto right = seg.subspan(r + 1);
  const int own = canonical_levels(left) != canonical_levels(right) ? 1 : 0;
  return own + symmetry_of(left) + symmetry_of(right);
}

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline BigInt weight_of(Levels seg) {
  if (seg.empty()) return 1;
  const auto r = root_position(seg);
  auto left = seg.subspan(0, r);
  auto right = seg.subspan(r + 1);
  return binomial(static_cast<int>(left.size() + right.size()), static_cast<int>(left.size())) *
         weight_of(left) * weight_of(right);
}

}  // namespace detail

/// Strict weak order realising the tree order of the coefficient vectors.
struct TreeOrder {
  bool operator()(const Tree& a, const Tree& b) const noexcept {
    return detail::tree_order(a.levels(), b.levels()) < 0;
  }
};

inline Tree Tree::from_levels(std::vector<Level> levels) {
  if (levels.size() == 1 && levels[0] == 0) return Tree{};
  if (levels.empty()) throw invalid_code("empty word-code");
  if (!detail::valid_segment(levels, 1)) {
    std::string w;
    for (auto v : levels) w += std::to_string(v) + ".";
    w.pop_back();
    throw invalid_code("invalid word-code " + w);
  }
  return Tree{std::move(levels)};
}

inline Tree Tree::parse(std::string_view word) {
  if (word.empty()) throw invalid_code("empty word-code");
  std::vector<Level> levels;
  const bool dotted = word.find('.') != std::string_view::npos;
  if (dotted) {
    std::size_t start = 0;
    while (start <= word.size()) {
      const auto stop = std::min(word.find('.', start), word.size());
      const auto part = word.substr(start, stop - start);
      if (part.empty() || part.size() > 3) throw invalid_code("malformed word-code " + std::string(word));
      int v = 0;
      for (char c : part) {
        if (c < '0' || c > '9') throw invalid_code("malformed word-code " + std::string(word));
        v = 10 * v + (c - '0');
      }
      if (v > 255) throw invalid_code("level out of range in " + std::string(word));
      levels.push_back(static_cast<Level>(v));
      start = stop + 1;
    }
  } else {
    for (char c : word) {
      if (c < '0' || c > '9') throw invalid_code("malformed word-code " + std::string(word));
      levels.push_back(static_cast<Level>(c - '0'));
    }
  }
  return from_levels(std::move(levels));
}

inline std::string Tree::word() const {
  if (is_leaf()) return "0";
  const bool wide = std::any_of(levels_.begin(), levels_.end(), [](Level v) { return v > 9; });
  std::string out;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (wide && i > 0) out += '.';
    out += std::to_string(levels_[i]);
  }
  return out;
}

/// Root graft: (a + 1) 1 (b + 1).
inline Tree graft(const Tree& left, const Tree& right) {
  std::vector<Tree::Level> out;
  out.reserve(left.levels_.size() + right.levels_.size() + 1);
  detail::append_shifted(out, left.levels_);
  out.push_back(1);
  detail::append_shifted(out, right.levels_);
  return Tree{std::move(out)};
}

/// Inverse of graft. Throws leaf_tree on the grade-0 tree.
inline std::pair<Tree, Tree> split_root(const Tree& t) {
  if (t.is_leaf()) throw leaf_tree{};
  auto lv = t.levels();
  const auto r = detail::root_position(lv);
  auto lower = [](detail::Levels seg) {
    std::vector<Tree::Level> v(seg.begin(), seg.end());
    for (auto& x : v) --x;
    return v.empty() ? Tree::leaf() : Tree::from_levels(std::move(v));
  };
  return {lower(lv.subspan(0, r)), lower(lv.subspan(r + 1))};
}

/// Weight character: 1 on the leaf, binomial(|a|+|b|, |a|) w(a) w(b) on a graft.
inline BigInt weight(const Tree& t) { return detail::weight_of(t.levels()); }

/// Lowest word-code among all trees reachable by vertex twists.
inline Tree canonical_nonplanar(const Tree& t) {
  return Tree{detail::canonical_levels(t.levels())};
}

/// Number of vertices whose two subtrees are distinct as non-planar trees;
/// the twist class of `t` has 2^symmetry_count(t) planar members.
inline int symmetry_count(const Tree& t) { return detail::symmetry_of(t.levels()); }

/// Attaches a vertex to every free branch, scanning the code right to left.
/// A vertex at position i has a free left (right) branch exactly when its
/// left (right) neighbour is lower or absent. Result is sorted in tree order.
inline std::vector<Tree> branch(const Tree& t) {
  if (t.is_leaf()) return {Tree{std::vector<Tree::Level>{1}}};
  const auto& lv = t.levels_;
  const std::size_t n = lv.size();
  std::vector<Tree> out;
  out.reserve(n + 1);
  for (std::size_t k = n; k-- > 0;) {
    const auto next = static_cast<Tree::Level>(lv[k] + 1);
    if (k + 1 == n || lv[k + 1] < lv[k]) {
      auto v = lv;
      v.insert(v.begin() + static_cast<std::ptrdiff_t>(k) + 1, next);
      out.push_back(Tree{std::move(v)});
    }
    if (k == 0 || lv[k - 1] < lv[k]) {
      auto v = lv;
      v.insert(v.begin() + static_cast<std::ptrdiff_t>(k), next);
      out.push_back(Tree{std::move(v)});
    }
  }
  std::sort(out.begin(), out.end(), TreeOrder{});
  return out;
}

inline BigInt catalan(int n) { return detail::binomial(2 * n, n) / (n + 1); }

inline BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

struct TreeTriple {
  Tree tree;
  BigInt weight;
  int symmetry = 0;

  static TreeTriple of(const Tree& t) { return {t, coagtree::weight(t), symmetry_count(t)}; }

  friend bool operator==(const TreeTriple&, const TreeTriple&) = default;
};

/// All trees of one grade, in tree order.
struct Forest {
  int grade = 0;
  std::vector<TreeTriple> trees;

  std::size_t size() const noexcept { return trees.size(); }
};

namespace detail {

inline void check_cap(int n, int cap) {
  if (n < 0) throw domain_error("grade must be non-negative");
  if (n > cap) {
    throw resource_limit("grade " + std::to_string(n) + " exceeds the grade cap " +
                         std::to_string(cap));
  }
}

/// Planar trees of every grade 0..n, each grade in tree order.
inline std::vector<std::vector<Tree>> planar_by_grade(int n) {
  std::vector<std::vector<Tree>> by_grade(static_cast<std::size_t>(n) + 1);
  by_grade[0].push_back(Tree::leaf());
  for (int g = 1; g <= n; ++g) {
    auto& cur = by_grade[static_cast<std::size_t>(g)];
    for (int i = 0; i < g; ++i) {
      for (const auto& a : by_grade[static_cast<std::size_t>(i)]) {
        for (const auto& b : by_grade[static_cast<std::size_t>(g - 1 - i)]) {
          cur.push_back(graft(a, b));
        }
      }
    }
  }
  return by_grade;
}

inline std::vector<std::vector<Tree>> nonplanar_by_grade(int n) {
  std::vector<std::vector<Tree>> by_grade(static_cast<std::size_t>(n) + 1);
  by_grade[0].push_back(Tree::leaf());
  for (int g = 1; g <= n; ++g) {
    std::set<Tree, WordOrder> reps;
    for (int i = 0; 2 * i <= g - 1; ++i) {
      const auto& lefts = by_grade[static_cast<std::size_t>(i)];
      const auto& rights = by_grade[static_cast<std::size_t>(g - 1 - i)];
      for (const auto& a : lefts) {
        for (const auto& b : rights) reps.insert(canonical_nonplanar(graft(a, b)));
      }
    }
    auto& cur = by_grade[static_cast<std::size_t>(g)];
    cur.assign(reps.begin(), reps.end());
    std::sort(cur.begin(), cur.end(), TreeOrder{});
  }
  return by_grade;
}

inline Forest make_forest(int grade, const std::vector<Tree>& trees) {
  Forest f;
  f.grade = grade;
  f.trees.reserve(trees.size());
  for (const auto& t : trees) f.trees.push_back(TreeTriple::of(t));
  return f;
}

}  // namespace detail

/// Every planar tree of grade n by root-grafting over split sizes; C_n trees.
inline Forest enumerate_planar(int n, int cap = default_grade_cap) {
  detail::check_cap(n, cap);
  auto by_grade = detail::planar_by_grade(n);
  return detail::make_forest(n, by_grade[static_cast<std::size_t>(n)]);
}

/// Canonical representatives of the twist classes of grade n, with (weight, symmetry).
inline Forest enumerate_nonplanar(int n, int cap = default_grade_cap) {
  detail::check_cap(n, cap);
  auto by_grade = detail::nonplanar_by_grade(n);
  return detail::make_forest(n, by_grade[static_cast<std::size_t>(n)]);
}

/// Root split of a non-planar representative, rendered as "left*right".
inline std::string generation_rule(const Tree& t) {
  if (t.is_leaf()) return "-";
  auto [l, r] = split_root(t);
  return l.word() + "*" + r.word();
}

}  // namespace coagtree
