#include <algorithm>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "coagtree/forest_io.hpp"
#include "coagtree/oracle.hpp"
#include "coagtree/tree.hpp"

using namespace coagtree;

namespace {

Tree T(const char* w) { return Tree::parse(w); }

std::vector<std::string> words(const std::vector<Tree>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(t.word());
  return out;
}

std::vector<std::string> words(const Forest& f) {
  std::vector<std::string> out;
  for (const auto& tt : f.trees) out.push_back(tt.tree.word());
  return out;
}

}  // namespace

TEST(TreeParse, GradeThreeSplitsIntoTwoCherries) {
  const auto t = T("212");
  EXPECT_EQ(t.grade(), 3);
  auto [l, r] = split_root(t);
  EXPECT_EQ(l.word(), "1");
  EXPECT_EQ(r.word(), "1");
}

TEST(TreeParse, LeafIsZero) {
  const auto t = T("0");
  EXPECT_TRUE(t.is_leaf());
  EXPECT_EQ(t.grade(), 0);
  EXPECT_EQ(t.code(), std::vector<Tree::Level>{0});
}

TEST(TreeParse, RejectsInvalidCodes) {
  EXPECT_THROW(T("211"), invalid_code);
  EXPECT_THROW(T("22"), invalid_code);
  EXPECT_THROW(T("13"), invalid_code);
  EXPECT_THROW(T(""), invalid_code);
  EXPECT_THROW(T("1a"), invalid_code);
}

TEST(TreeParse, RoundTripsEveryTreeUpToGradeSeven) {
  for (int n = 0; n <= 7; ++n) {
    for (const auto& tt : enumerate_planar(n).trees) EXPECT_EQ(Tree::parse(tt.tree.word()), tt.tree);
  }
}

TEST(TreeParse, DottedFormForDeepTrees) {
  Tree t = Tree::leaf();
  for (int i = 0; i < 11; ++i) t = graft(Tree::leaf(), t);
  EXPECT_EQ(t.grade(), 11);
  EXPECT_NE(t.word().find('.'), std::string::npos);
  EXPECT_EQ(Tree::parse(t.word()), t);
}

TEST(Graft, Examples) {
  EXPECT_EQ(graft(Tree::leaf(), Tree::leaf()).word(), "1");
  EXPECT_EQ(graft(T("1"), T("1")).word(), "212");
  EXPECT_EQ(graft(T("12"), T("212")).word(), "231323");
}

TEST(Graft, SplitInvertsGraft) {
  auto [l, r] = split_root(T("123"));
  EXPECT_TRUE(l.is_leaf());
  EXPECT_EQ(r.word(), "12");
  auto [a, b] = split_root(T("1"));
  EXPECT_TRUE(a.is_leaf());
  EXPECT_TRUE(b.is_leaf());
  EXPECT_THROW(split_root(Tree::leaf()), leaf_tree);
  for (int n = 1; n <= 6; ++n) {
    for (const auto& tt : enumerate_planar(n).trees) {
      auto [x, y] = split_root(tt.tree);
      EXPECT_EQ(graft(x, y), tt.tree);
    }
  }
}

TEST(Weight, TableValues) {
  EXPECT_EQ(weight(Tree::leaf()), 1);
  EXPECT_EQ(weight(T("212")), 2);
  EXPECT_EQ(weight(T("21323")), 8);
  EXPECT_EQ(weight(T("231323")), 20);
}

TEST(Weight, InvariantUnderTwisting) {
  for (int n = 0; n <= 6; ++n) {
    for (const auto& tt : enumerate_planar(n).trees) {
      for (const auto& u : oracle::twist_orbit(tt.tree)) EXPECT_EQ(weight(u), tt.weight) << u.word();
    }
  }
}

TEST(Branch, Examples) {
  EXPECT_EQ(words(branch(Tree::leaf())), (std::vector<std::string>{"1"}));
  EXPECT_EQ(words(branch(T("12"))), (std::vector<std::string>{"123", "132", "212"}));
  EXPECT_EQ(words(branch(T("212"))), (std::vector<std::string>{"2123", "2132", "2312", "3212"}));
  EXPECT_EQ(words(branch(T("123"))), (std::vector<std::string>{"1234", "1243", "1323", "2123"}));
  EXPECT_EQ(words(branch(T("321"))), (std::vector<std::string>{"3212", "3231", "3421", "4321"}));
}

TEST(Branch, ProducesGradePlusOneChildren) {
  for (int n = 0; n <= 6; ++n) {
    for (const auto& tt : enumerate_planar(n).trees) {
      const auto kids = branch(tt.tree);
      EXPECT_EQ(kids.size(), static_cast<std::size_t>(n + 1));
      EXPECT_TRUE(std::is_sorted(kids.begin(), kids.end(), TreeOrder{}));
      for (const auto& k : kids) EXPECT_EQ(k.grade(), n + 1);
    }
  }
}

TEST(Enumerate, GradeThreeInTableOrder) {
  EXPECT_EQ(words(enumerate_planar(3)), (std::vector<std::string>{"123", "132", "212", "231", "321"}));
}

TEST(Enumerate, GradeFourEndpoints) {
  const auto f = enumerate_planar(4);
  ASSERT_EQ(f.size(), 14u);
  EXPECT_EQ(f.trees.front().tree.word(), "1234");
  EXPECT_EQ(f.trees.back().tree.word(), "4321");
}

TEST(Enumerate, TreeOrderPlacesGraftingOrderBeforeNumericOrder) {
  const auto w = words(enumerate_planar(4));
  const auto a = std::find(w.begin(), w.end(), "3212");
  const auto b = std::find(w.begin(), w.end(), "2341");
  ASSERT_NE(a, w.end());
  ASSERT_NE(b, w.end());
  EXPECT_LT(a, b);
}

TEST(Enumerate, LeafOnly) {
  const auto f = enumerate_planar(0);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_TRUE(f.trees[0].tree.is_leaf());
}

TEST(Enumerate, MatchesBruteForceFiltering) {
  for (int n = 0; n <= 7; ++n) {
    auto fast = enumerate_planar(n);
    std::vector<Tree> sorted;
    for (const auto& tt : fast.trees) sorted.push_back(tt.tree);
    std::sort(sorted.begin(), sorted.end(), WordOrder{});
    EXPECT_EQ(sorted, oracle::planar_by_filtering(n)) << "grade " << n;
  }
}

TEST(Enumerate, CatalanCounts) {
  for (int n = 0; n <= 10; ++n) EXPECT_EQ(BigInt(enumerate_planar(n).size()), catalan(n));
}

TEST(Enumerate, GradeCapIsEnforced) {
  EXPECT_THROW(enumerate_planar(13), resource_limit);
  EXPECT_THROW(enumerate_nonplanar(5, 4), resource_limit);
}

TEST(Canonical, Examples) {
  EXPECT_EQ(canonical_nonplanar(T("21")).word(), "12");
  EXPECT_EQ(canonical_nonplanar(T("321")).word(), "123");
  EXPECT_EQ(canonical_nonplanar(T("1323")).word(), "1323");
}

TEST(Canonical, IsOrbitMinimum) {
  for (int n = 0; n <= 7; ++n) {
    for (const auto& tt : enumerate_planar(n).trees) {
      EXPECT_EQ(canonical_nonplanar(tt.tree), *oracle::twist_orbit(tt.tree).begin()) << tt.tree.word();
    }
  }
}

TEST(Symmetry, Examples) {
  EXPECT_EQ(symmetry_count(T("212")), 0);
  EXPECT_EQ(symmetry_count(T("123")), 2);
  EXPECT_EQ(symmetry_count(T("1323")), 1);
}

TEST(Symmetry, OrbitSizeIsPowerOfTwo) {
  for (int n = 0; n <= 7; ++n) {
    for (const auto& tt : enumerate_planar(n).trees) {
      EXPECT_EQ(oracle::twist_orbit(tt.tree).size(), std::size_t{1} << tt.symmetry) << tt.tree.word();
    }
  }
}

TEST(NonPlanar, GradeFourTriples) {
  const auto f = enumerate_nonplanar(4);
  ASSERT_EQ(f.size(), 3u);
  const std::vector<TreeTriple> want = {{T("1234"), 1, 3}, {T("1323"), 2, 1}, {T("2123"), 3, 2}};
  EXPECT_EQ(f.trees, want);
}

TEST(NonPlanar, GradeFiveHasSixIncludingTableRows) {
  const auto f = enumerate_nonplanar(5);
  ASSERT_EQ(f.size(), 6u);
  const auto has = [&](const char* w, int weight, int sigma) {
    return std::any_of(f.trees.begin(), f.trees.end(), [&](const TreeTriple& tt) {
      return tt.tree.word() == w && tt.weight == weight && tt.symmetry == sigma;
    });
  };
  EXPECT_TRUE(has("21323", 8, 1));
  EXPECT_TRUE(has("23123", 6, 2));
}

TEST(NonPlanar, GradeTwoCollapses) {
  const auto f = enumerate_nonplanar(2);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f.trees[0], (TreeTriple{T("12"), 1, 1}));
}

TEST(NonPlanar, GenerationRule) {
  EXPECT_EQ(generation_rule(Tree::leaf()), "-");
  EXPECT_EQ(generation_rule(T("1")), "0*0");
  EXPECT_EQ(generation_rule(T("231323")), "12*212");
}

TEST(ForestCsv, RowCounts) {
  const auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
  EXPECT_EQ(lines(planar_csv(4)), 1 + 1 + 1 + 2 + 5 + 14);
  EXPECT_EQ(lines(planar_csv(0)), 2);
  const auto np = nonplanar_csv(6);
  std::size_t grade6 = 0;
  for (std::size_t p = 0; (p = np.find("\n6,", p)) != std::string::npos; ++p) ++grade6;
  EXPECT_EQ(grade6, 11u);
}

TEST(ForestJson, CarriesWeightsAsStrings) {
  const auto j = to_json(enumerate_nonplanar(3), true);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["code"], "123");
  EXPECT_EQ(j[1]["weight"], "2");
  EXPECT_EQ(j[1]["generation"], "1*1");
}
