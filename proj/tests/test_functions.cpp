#include <gtest/gtest.h>

#include "commlab/error.hpp"
#include "commlab/functions.hpp"

using namespace commlab;

namespace {

std::vector<ColorId> table(const ColoredFunction& f) { return f.colors(); }

}  // namespace

TEST(GenFunction, Xor1) { EXPECT_EQ(table(xor_function(1)), (std::vector<ColorId>{0, 1, 1, 0})); }

TEST(GenFunction, Eq1) { EXPECT_EQ(table(eq_function(1)), (std::vector<ColorId>{1, 0, 0, 1})); }

TEST(GenFunction, Matvec) {
  const auto f = matvec_function(3, 2);
  // x1=(1,0) -> 1, x2=(0,1) -> 2, x3=(1,1) -> 3; A is the identity.
  const std::vector<std::size_t> cell{1, 2, 3};
  EXPECT_EQ(f.color(f.shape().linear(cell)), 3u);
  EXPECT_EQ(f.shape().sizes(), (std::vector<std::size_t>{4, 4, 4}));
}

TEST(GenFunction, XorIsBitwise) {
  for (unsigned n = 1; n <= 4; ++n) {
    const auto f = xor_function(n);
    for (std::size_t c = 0; c < f.shape().cell_count(); ++c)
      EXPECT_EQ(f.color(c), f.shape().coord(c, 0) ^ f.shape().coord(c, 1));
  }
}

TEST(GenFunction, RandomIsReproducibleAndContiguous) {
  const DomainShape s({7, 9});
  const auto a = random_function(s, 5, 42);
  EXPECT_EQ(a, random_function(s, 5, 42));
  EXPECT_NE(a, random_function(s, 5, 43));
  EXPECT_LE(a.color_count(), 5u);
  EXPECT_THROW(ColoredFunction(DomainShape({2, 2}), {0, 2, 2, 0}), InvalidInput);
  EXPECT_THROW(gen_function(FunctionSpec{FunctionSpec::Kind::xor_fn, 13}), InvalidInput);
}

TEST(GenRelation, ApproxXor) {
  const auto r0 = approx_xor_relation(3, 0.0);
  for (std::size_t c = 0; c < r0.shape().cell_count(); ++c) {
    EXPECT_EQ(r0.admissible(c).count(), 1u);
    EXPECT_TRUE(r0.admits(c, static_cast<ColorId>(r0.shape().coord(c, 0) ^ r0.shape().coord(c, 1))));
  }
  const auto r1 = approx_xor_relation(3, 1.0);
  for (std::size_t c = 0; c < r1.shape().cell_count(); ++c) EXPECT_EQ(r1.admissible(c).count(), 8u);
  const auto rh = approx_xor_relation(2, 0.5);
  for (std::size_t c = 0; c < rh.shape().cell_count(); ++c) EXPECT_EQ(rh.admissible(c).count(), 3u);
  EXPECT_THROW(approx_xor_relation(2, 1.5), InvalidInput);
  EXPECT_THROW(approx_xor_relation(2, -0.1), InvalidInput);
}

TEST(GenCover, TrivialMerlin) {
  const auto f = xor_function(1);
  const Cover c = trivial_merlin_cover(f.shape());
  EXPECT_EQ(c.size(), 4u);
  EXPECT_TRUE(validate_cover(c).is_partition);
  EXPECT_EQ(thickness(c, ThicknessScope::global()), 1u);
  for (const auto& b : c.boxes()) EXPECT_TRUE(monochromatic_color(b, Target(f)).has_value());
}

TEST(GenCover, RandomBoundedExample) {
  RandomBoundedParams p;
  p.rho_max = 2;
  p.extra = 3;
  const Cover c = random_bounded_cover(DomainShape({4, 4}), p, 7);
  EXPECT_TRUE(validate_cover(c).covers_domain);
  EXPECT_LE(thickness(c, ThicknessScope::global()), 2u);
  EXPECT_EQ(c, random_bounded_cover(DomainShape({4, 4}), p, 7));
}

TEST(GenCover, RandomBoundedRespectsCapAndReportsFailure) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomBoundedParams p;
    p.rho_max = 1 + seed % 3;
    p.extra = seed % 6;
    try {
      const Cover c = random_bounded_cover(DomainShape({2 + seed % 6, 3 + seed % 4}), p, seed);
      EXPECT_TRUE(validate_cover(c).covers_domain);
      EXPECT_LE(thickness(c, ThicknessScope::global()), p.rho_max);
    } catch (const GenerationFailure& e) {
      EXPECT_EQ(e.seed(), seed);
    }
  }
  RandomBoundedParams p;
  p.rho_max = 1;
  p.extra = 1;
  EXPECT_THROW(random_bounded_cover(DomainShape({3, 3}), p, 1), GenerationFailure);
}

TEST(GenCover, Windmill) {
  const Cover c = windmill_cover();
  EXPECT_EQ(c.size(), 5u);
  EXPECT_TRUE(validate_cover(c).is_partition);
}

TEST(MonochromaticColor, Examples) {
  const DomainShape s({2, 2});
  EXPECT_EQ(monochromatic_color(Box::full(s), Target(constant_function(s))), std::optional<ColorId>(0));
  EXPECT_EQ(monochromatic_color(Box::full(s), Target(xor_function(1))), std::nullopt);
  const auto r = approx_xor_relation(2, 0.5);
  EXPECT_EQ(monochromatic_color(Box::singleton(r.shape(), 0), Target(r)), std::optional<ColorId>(0));
  EXPECT_THROW(monochromatic_color(Box::full(DomainShape({3, 3})), Target(xor_function(1))), InvalidInput);
}

TEST(MonochromaticColor, XorHasNoLargeMonochromaticBox) {
  // Exhaustive over all boxes for n <= 3.
  for (unsigned n = 1; n <= 3; ++n) {
    const auto f = xor_function(n);
    const std::size_t side = std::size_t{1} << n;
    for (std::uint64_t rows = 1; rows < (std::uint64_t{1} << side); ++rows) {
      for (std::uint64_t cols = 1; cols < (std::uint64_t{1} << side); ++cols) {
        std::vector<std::size_t> rl, cl;
        for (std::size_t i = 0; i < side; ++i) {
          if ((rows >> i) & 1) rl.push_back(i);
          if ((cols >> i) & 1) cl.push_back(i);
        }
        const Box b = Box::from_lists(f.shape(), {rl, cl});
        const auto color = monochromatic_color(b, Target(f));
        EXPECT_EQ(color.has_value(), b.cell_count() == 1);
      }
    }
  }
}

TEST(MonochromaticColor, RelationSmallestCommonColor) {
  const auto r = approx_xor_relation(2, 0.5);
  const auto& s = r.shape();
  // Cells (0,0) and (0,3) have centres 00 and 11; radius-1 balls meet in {01, 10}.
  EXPECT_EQ(monochromatic_color(Box::from_lists(s, {{0}, {0, 3}}), Target(r)), std::optional<ColorId>(1));
}

TEST(GoodSet, Examples) {
  const auto f = xor_function(1);
  const Protocol p(trivial_merlin_cover(f.shape()), MinIndexSelector{});
  auto ep = ErrorProtocol::from_box_colors(p, Target(f));
  EXPECT_EQ(good_set(ep, Target(f)).count(), 4u);

  // Cell (1,1) is box 3; make gA wrong there.
  ep.set_ga(1, 3, 1);
  const auto g = good_set(ep, Target(f));
  EXPECT_EQ(g.count(), 3u);
  EXPECT_FALSE(g.contains(3));

  const auto rel = approx_xor_relation(1, 1.0);
  const Protocol pr(trivial_merlin_cover(rel.shape()), MinIndexSelector{});
  auto epr = ErrorProtocol::from_box_colors(pr, Target(rel));
  for (std::size_t b = 0; b < 4; ++b) {
    epr.set_ga(pr.shape().coord(b, 0), b, 1);
    epr.set_gb(pr.shape().coord(b, 1), b, 1);
  }
  EXPECT_EQ(good_set(epr, Target(rel)).count(), 4u);
}

TEST(GoodSet, FractionIsOneMinusError) {
  const auto f = random_function(DomainShape({6, 5}), 3, 9);
  const Protocol p(trivial_merlin_cover(f.shape()), MinIndexSelector{});
  auto ep = ErrorProtocol::from_box_colors(p, Target(f));
  std::size_t wrong = 0;
  for (std::size_t c = 0; c < f.shape().cell_count(); c += 4) {
    const auto z = static_cast<ColorId>((f.color(c) + 1) % 3);
    ep.set_ga(f.shape().coord(c, 0), c, z);
    ep.set_gb(f.shape().coord(c, 1), c, z);
    ++wrong;
  }
  const double eps = static_cast<double>(wrong) / 30.0;
  EXPECT_DOUBLE_EQ(static_cast<double>(good_set(ep, Target(f)).count()) / 30.0, 1.0 - eps);
}

TEST(ErrorProtocol, TablesMustMatchBoxes) {
  const auto f = xor_function(1);
  const Protocol p(trivial_merlin_cover(f.shape()), MinIndexSelector{});
  std::vector<std::int32_t> ga(2 * 4, ErrorProtocol::kUndefined), gb(2 * 4, ErrorProtocol::kUndefined);
  EXPECT_THROW(ErrorProtocol(p, ga, gb), InvalidInput);
  const auto ok = ErrorProtocol::from_box_colors(p, Target(f));
  auto bad = ok.ga_table();
  bad[0 * 4 + 2] = 0;  // box 2 is cell (1,0); row 0 is not one of its rows
  EXPECT_THROW(ErrorProtocol(p, bad, ok.gb_table()), InvalidInput);
}

TEST(Generators, DeterministicUnderSeed) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DomainShape s({3 + seed % 5, 4});
    EXPECT_EQ(random_tree(s, seed).root, random_tree(s, seed).root);
    const Cover c = compile_tree(random_tree(s, seed)).cover();
    EXPECT_EQ(cover_colored_function(c, 3, seed), cover_colored_function(c, 3, seed));
  }
}

TEST(CoverColoredFunction, EveryBoxMonochromatic) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomBoundedParams p;
    p.rho_max = 2 + seed % 3;
    p.extra = 4;
    Cover c;
    try {
      c = random_bounded_cover(DomainShape({3 + seed % 9, 2 + seed % 7}), p, seed);
    } catch (const GenerationFailure&) {
      continue;
    }
    const auto f = cover_colored_function(c, 4, seed);
    for (const auto& b : c.boxes()) EXPECT_TRUE(monochromatic_color(b, Target(f)).has_value());
  }
}
