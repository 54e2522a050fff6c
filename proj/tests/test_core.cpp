#include <gtest/gtest.h>

#include "commlab/core.hpp"
#include "commlab/error.hpp"
#include "commlab/functions.hpp"
#include "commlab/rng.hpp"
#include "oracle.hpp"

using namespace commlab;

namespace {

DomainShape two_by_two() { return DomainShape({2, 2}); }

Cover windmill() { return windmill_cover(); }

}  // namespace

TEST(DomainShape, Basics) {
  DomainShape s({3, 5});
  EXPECT_EQ(s.cell_count(), 15u);
  EXPECT_EQ(s.linear(std::vector<std::size_t>{2, 4}), 14u);
  EXPECT_EQ(s.coords(7), (Coords{1, 2}));
  EXPECT_EQ(DomainShape::from_bits({2, 3}).sizes(), (std::vector<std::size_t>{4, 8}));
}

TEST(DomainShape, RejectsBadShapes) {
  EXPECT_THROW(DomainShape({4}), InvalidInput);
  EXPECT_THROW(DomainShape({0, 3}), InvalidInput);
  EXPECT_THROW(DomainShape({4096, 4096}, 1 << 20), InvalidInput);
  EXPECT_THROW(DomainShape({5000, 2}), InvalidInput);
}

TEST(Box, Malformed) {
  const auto s = two_by_two();
  EXPECT_THROW(Box::from_lists(s, {{}, {0}}), InvalidInput);
  EXPECT_THROW(Box::from_lists(s, {{0}, {2}}), InvalidInput);
  EXPECT_THROW(Box::from_lists(s, {{0}}), InvalidInput);
  EXPECT_THROW(Cover(s, {}), InvalidInput);
}

TEST(ValidateCover, Windmill) {
  const auto r = validate_cover(windmill());
  EXPECT_TRUE(r.covers_domain);
  EXPECT_TRUE(r.is_partition);
  EXPECT_TRUE(r.uncovered.empty());
  EXPECT_EQ(windmill().size(), 5u);
}

TEST(ValidateCover, FullBox) {
  const auto s = two_by_two();
  const auto r = validate_cover(Cover(s, {Box::full(s)}));
  EXPECT_TRUE(r.covers_domain);
  EXPECT_TRUE(r.is_partition);
}

TEST(ValidateCover, MissingCell) {
  const auto s = two_by_two();
  const Cover c(s, {Box::from_lists(s, {{0}, {0, 1}}), Box::from_lists(s, {{1}, {0}})});
  const auto r = validate_cover(c);
  EXPECT_FALSE(r.covers_domain);
  EXPECT_FALSE(r.is_partition);
  ASSERT_EQ(r.uncovered.size(), 1u);
  EXPECT_EQ(s.coords(r.uncovered[0]), (Coords{1, 1}));
}

TEST(Thickness, Examples) {
  const auto dbl = double_full_box_cover();
  EXPECT_EQ(thickness(dbl, ThicknessScope::cell(0)), 2u);
  EXPECT_EQ(thickness(dbl, ThicknessScope::global()), 2u);
  EXPECT_EQ(thickness(windmill(), ThicknessScope::global()), 1u);
  EXPECT_EQ(thickness(trivial_merlin_cover(DomainShape({3, 3})), ThicknessScope::global()), 1u);
  EXPECT_THROW(thickness(dbl, ThicknessScope::cell(4)), InvalidInput);
  EXPECT_THROW(thickness(dbl, ThicknessScope::box(2)), InvalidInput);
}

TEST(Thickness, PropertiesOnRandomCovers) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomBoundedParams p;
    p.rho_max = 1 + seed % 4;
    p.extra = 1 + seed % 5;
    Cover cover;
    try {
      cover = random_bounded_cover(DomainShape({1 + seed % 7, 2 + seed % 5}), p, seed);
    } catch (const GenerationFailure&) {
      continue;
    }
    const auto& shape = cover.shape();
    const std::size_t global = thickness(cover, ThicknessScope::global());
    EXPECT_LE(global, p.rho_max);
    EXPECT_LE(global, cover.size());
    for (std::size_t c = 0; c < shape.cell_count(); ++c) {
      const auto t = thickness(cover, ThicknessScope::cell(c));
      EXPECT_EQ(t, oracle::containing(cover, c).size());
      EXPECT_GE(t, 1u);
      EXPECT_LE(t, global);
    }
    std::size_t max_box = 0;
    for (std::size_t b = 0; b < cover.size(); ++b) {
      std::size_t expect = 0;
      cover.box(b).for_each_cell(shape, [&](std::size_t c) {
        expect = std::max(expect, oracle::containing(cover, c).size());
      });
      EXPECT_EQ(thickness(cover, ThicknessScope::box(b)), expect);
      max_box = std::max(max_box, expect);
    }
    EXPECT_EQ(max_box, global);
  }
}

TEST(SelectTranscript, Examples) {
  const Protocol min_index(double_full_box_cover(), MinIndexSelector{});
  for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(select_transcript(min_index, c), 0u);

  ExplicitSelector e;
  e.table = {1, 0, 0, 0};
  const Protocol expl(double_full_box_cover(), e);
  EXPECT_EQ(select_transcript(expl, 0), 1u);

  const Protocol seeded(double_full_box_cover(), SeededRandomSelector{7});
  EXPECT_EQ(select_transcript(seeded, 3), select_transcript(seeded, 3));
}

TEST(SelectTranscript, SeededRandomFollowsDocumentedHash) {
  const Cover cover = double_full_box_cover();
  for (std::uint64_t seed : {0ull, 7ull, 123456789ull}) {
    const Protocol p(cover, SeededRandomSelector{seed});
    for (std::size_t c = 0; c < 4; ++c) {
      const std::uint64_t h = splitmix64(splitmix64(seed) ^ c);
      EXPECT_EQ(select_transcript(p, c), h % 2);
    }
  }
}

TEST(SelectTranscript, Errors) {
  const auto s = two_by_two();
  const Cover gap(s, {Box::from_lists(s, {{0}, {0, 1}})});
  EXPECT_THROW(select_transcript(Protocol(gap, MinIndexSelector{}), 3), UncoveredCell);

  const Cover halves(s, {Box::from_lists(s, {{0}, {0, 1}}), Box::from_lists(s, {{1}, {0, 1}})});
  ExplicitSelector bad;
  bad.table = {1, 0, 1, 1};
  try {
    Protocol p(halves, bad);
    FAIL() << "expected InvalidSelector";
  } catch (const InvalidSelector& e) {
    EXPECT_NE(std::string(e.what()).find("(0,0)"), std::string::npos);
  }
  ExplicitSelector short_table;
  short_table.table = {0};
  EXPECT_THROW(Protocol(halves, short_table), InvalidSelector);
}

TEST(SelectTranscript, AlwaysContainingAndReproducible) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomBoundedParams p;
    p.rho_max = 3;
    p.extra = 3;
    Cover cover;
    try {
      cover = random_bounded_cover(DomainShape({5, 6}), p, seed);
    } catch (const GenerationFailure&) {
      continue;
    }
    for (const TranscriptSelector& sel :
         {TranscriptSelector(MinIndexSelector{}), TranscriptSelector(SeededRandomSelector{seed})}) {
      const Protocol proto(cover, sel);
      const auto t1 = transcript_table(proto);
      const auto t2 = transcript_table(Protocol(cover, sel));
      EXPECT_EQ(t1, t2);
      for (std::size_t c = 0; c < t1.size(); ++c) {
        const auto boxes = oracle::containing(cover, c);
        EXPECT_NE(std::find(boxes.begin(), boxes.end(), t1[c]), boxes.end());
        if (std::holds_alternative<MinIndexSelector>(sel)) EXPECT_EQ(t1[c], boxes.front());
        EXPECT_EQ(select_transcript(proto, c), t1[c]);
      }
    }
  }
}

TEST(CompileTree, SingleLeaf) {
  const auto s = two_by_two();
  const Protocol p = compile_tree({s, TreeNode::leaf()});
  ASSERT_EQ(p.cover().size(), 1u);
  EXPECT_EQ(p.cover().box(0), Box::full(s));
}

TEST(CompileTree, RowSplit) {
  const auto s = two_by_two();
  const auto root = TreeNode::split(0, IndexSet(2, {0}), IndexSet(2, {1}), TreeNode::leaf(), TreeNode::leaf());
  const Protocol p = compile_tree({s, root});
  ASSERT_EQ(p.cover().size(), 2u);
  EXPECT_EQ(p.cover().box(0), Box::from_lists(s, {{0}, {0, 1}}));
  EXPECT_EQ(p.cover().box(1), Box::from_lists(s, {{1}, {0, 1}}));
  EXPECT_TRUE(std::holds_alternative<ExplicitSelector>(p.selector()));
}

TEST(CompileTree, DepthTwo) {
  const auto s = two_by_two();
  auto cols = [] {
    return TreeNode::split(1, IndexSet(2, {0}), IndexSet(2, {1}), TreeNode::leaf(), TreeNode::leaf());
  };
  const auto root = TreeNode::split(0, IndexSet(2, {0}), IndexSet(2, {1}), cols(), cols());
  const Protocol p = compile_tree({s, root});
  ASSERT_EQ(p.cover().size(), 4u);
  for (std::size_t b = 0; b < 4; ++b) EXPECT_EQ(p.cover().box(b).cell_count(), 1u);
  EXPECT_TRUE(validate_cover(p.cover()).is_partition);
}

TEST(CompileTree, InvalidSplits) {
  const auto s = two_by_two();
  const auto overlap =
      TreeNode::split(0, IndexSet(2, {0, 1}), IndexSet(2, {1}), TreeNode::leaf(), TreeNode::leaf());
  EXPECT_THROW(compile_tree({s, overlap}), InvalidTree);
  const auto missing = TreeNode::split(0, IndexSet(2, {0}), IndexSet(2), TreeNode::leaf(), TreeNode::leaf());
  EXPECT_THROW(compile_tree({s, missing}), InvalidTree);
}

TEST(CompileTree, RandomTreesArePartitions) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const DomainShape shape({1 + seed % 9, 1 + (seed / 9) % 9});
    const Protocol p = compile_tree(random_tree(shape, seed));
    EXPECT_TRUE(validate_cover(p.cover()).is_partition);
    EXPECT_EQ(thickness(p.cover(), ThicknessScope::global()), 1u);
  }
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Protocol p = compile_tree(random_tree(DomainShape({3, 2, 4}), seed));
    EXPECT_TRUE(validate_cover(p.cover()).is_partition);
  }
}
