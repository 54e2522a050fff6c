#include <gtest/gtest.h>

#include <chrono>

#include "commlab/bounds.hpp"
#include "commlab/error.hpp"
#include "commlab/rng.hpp"
#include "oracle.hpp"

using namespace commlab;

namespace {

std::vector<Box> flat(const MonochromaticCatalog& cat) {
  std::vector<Box> all;
  for (const auto& v : cat.per_color) all.insert(all.end(), v.begin(), v.end());
  std::sort(all.begin(), all.end());
  return all;
}

ColoredFunction all_ones(std::size_t r, std::size_t c) {
  return ColoredFunction(DomainShape({r, c}), std::vector<ColorId>(r * c, 0));
}

auto far_deadline() { return std::chrono::steady_clock::now() + std::chrono::hours(1); }

}  // namespace

TEST(Catalog, Examples) {
  const DomainShape s({2, 2});
  const auto c = enumerate_maximal_monochromatic(constant_function(s));
  ASSERT_EQ(c.total(), 1u);
  EXPECT_EQ(c.per_color[0][0], Box::full(s));

  const auto x = enumerate_maximal_monochromatic(xor_function(1));
  EXPECT_EQ(x.total(), 4u);
  EXPECT_EQ(x.per_color[0].size(), 2u);
  EXPECT_EQ(x.per_color[1].size(), 2u);

  const auto e = enumerate_maximal_monochromatic(eq_function(2));
  ASSERT_EQ(e.per_color[1].size(), 4u);
  for (const auto& b : e.per_color[1]) EXPECT_EQ(b.cell_count(), 1u);
  EXPECT_FALSE(e.partial);
}

TEST(Catalog, XorSingletonsUpToThree) {
  for (unsigned n = 1; n <= 3; ++n) {
    const auto cat = enumerate_maximal_monochromatic(xor_function(n));
    EXPECT_EQ(cat.total(), std::size_t{1} << (2 * n));
    for (const auto& b : flat(cat)) EXPECT_EQ(b.cell_count(), 1u);
  }
}

TEST(Catalog, MatchesBruteForceOnRandomFunctions) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const auto f = random_function(DomainShape({1 + rng.below(6), 1 + rng.below(6)}), 1 + rng.below(3), seed);
    const auto cat = enumerate_maximal_monochromatic(f);
    EXPECT_EQ(flat(cat), oracle::brute_maximal_rectangles(f)) << "seed " << seed;
    // Every cell appears in a box of its color.
    for (std::size_t c = 0; c < f.shape().cell_count(); ++c) {
      bool found = false;
      for (const auto& b : cat.per_color[f.color(c)]) found = found || b.contains(f.shape(), c);
      EXPECT_TRUE(found);
    }
  }
}

TEST(Catalog, CapFlagsPartial) {
  const auto cat = enumerate_maximal_monochromatic(xor_function(3), 10);
  EXPECT_TRUE(cat.partial);
  EXPECT_THROW(enumerate_maximal_monochromatic(matvec_function(3, 1)), InvalidInput);
}

TEST(CoverNumber, Examples) {
  EXPECT_EQ(cover_number(constant_function(DomainShape({3, 4})), CoverMode::exact).count(), 1u);
  EXPECT_EQ(cover_number(xor_function(1), CoverMode::exact).count(), 4u);
  EXPECT_EQ(cover_number(xor_function(2), CoverMode::exact).count(), 16u);
  EXPECT_EQ(cover_number(eq_function(1), CoverMode::exact).count(), 4u);
}

TEST(CoverNumber, WitnessesValidate) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = random_function(DomainShape({2 + seed % 5, 2 + seed % 4}), 2 + seed % 2, seed);
    for (auto mode : {CoverMode::exact, CoverMode::greedy}) {
      const auto r = cover_number(f, mode);
      EXPECT_TRUE(validate_cover(r.witness).covers_domain);
      ASSERT_EQ(r.witness_colors.size(), r.witness.size());
      for (std::size_t b = 0; b < r.witness.size(); ++b)
        EXPECT_EQ(monochromatic_color(r.witness.box(b), Target(f)), std::optional<ColorId>(r.witness_colors[b]));
      EXPECT_EQ(r.witness.size(), r.count());
    }
  }
}

TEST(SetCover, ExactMatchesBruteForce) {
  std::size_t instances = 0;
  for (std::uint64_t seed = 0; instances < 250 && seed < 5000; ++seed) {
    Rng rng(seed);
    const auto f = random_function(DomainShape({2 + rng.below(4), 2 + rng.below(4)}), 2 + rng.below(2), seed);
    const auto cat = enumerate_maximal_monochromatic(f);
    if (cat.total() > 20) continue;
    std::vector<IndexSet> sets;
    std::vector<std::vector<std::size_t>> lists;
    for (const auto& b : flat(cat)) {
      IndexSet s(f.shape().cell_count());
      for (auto c : b.cells(f.shape())) s.insert(c);
      lists.push_back(b.cells(f.shape()));
      sets.push_back(std::move(s));
    }
    const auto r = exact_set_cover(sets, f.shape().cell_count(), far_deadline());
    EXPECT_EQ(r.status, SetCoverResult::Status::optimal);
    EXPECT_EQ(r.upper, oracle::brute_set_cover(lists, f.shape().cell_count())) << "seed " << seed;
    EXPECT_LE(r.lower, r.upper);
    ++instances;
  }
  EXPECT_GE(instances, 200u);
}

TEST(SetCover, GreedyAndErrors) {
  std::vector<IndexSet> sets{IndexSet(4, {0, 1}), IndexSet(4, {1, 2}), IndexSet(4, {2, 3})};
  const auto g = greedy_set_cover(sets, 4);
  EXPECT_EQ(g.upper, 2u);
  EXPECT_EQ(g.chosen, (std::vector<std::size_t>{0, 2}));
  EXPECT_THROW(exact_set_cover({IndexSet(3, {0})}, 3, far_deadline()), InvalidInput);
}

TEST(SetCover, TimeoutReportsBounds) {
  Rng rng(1);
  std::vector<IndexSet> sets;
  for (int i = 0; i < 200; ++i) {
    IndexSet s(120);
    for (int k = 0; k < 12; ++k) s.insert(rng.below(120));
    sets.push_back(s);
  }
  for (std::size_t e = 0; e < 120; ++e) sets.push_back(IndexSet(120, {e}));
  const auto r = exact_set_cover(sets, 120, std::chrono::steady_clock::now());
  EXPECT_EQ(r.status, SetCoverResult::Status::timeout);
  EXPECT_LE(r.lower, r.upper);
  EXPECT_GT(r.upper, 0u);
}

TEST(FoolingSet, Examples) {
  EXPECT_EQ(fooling_set(eq_function(2), 1, FoolingMode::exact).size(), 4u);
  EXPECT_EQ(fooling_set(constant_function(DomainShape({3, 3})), 0, FoolingMode::exact).size(), 1u);
  const auto x = fooling_set(xor_function(1), 0, FoolingMode::exact);
  EXPECT_EQ(x, (std::vector<std::size_t>{0, 3}));
  EXPECT_THROW(fooling_set(constant_function(DomainShape({9, 9})), 0, FoolingMode::exact), InvalidInput);
  EXPECT_EQ(fooling_set(constant_function(DomainShape({9, 9})), 0, FoolingMode::greedy).size(), 1u);
}

TEST(FoolingSet, IsFoolingAndBelowCover) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = random_function(DomainShape({2 + seed % 4, 2 + seed % 5}), 2, seed);
    const auto& s = f.shape();
    const std::size_t C = s.size(1);
    const auto cover = cover_number(f, CoverMode::exact);
    for (ColorId z = 0; z < f.color_count(); ++z) {
      const auto fs = fooling_set(f, z, FoolingMode::exact);
      for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = i + 1; j < fs.size(); ++j) {
          const auto x1 = s.coord(fs[i], 0), y1 = s.coord(fs[i], 1);
          const auto x2 = s.coord(fs[j], 0), y2 = s.coord(fs[j], 1);
          EXPECT_TRUE(f.color(x1 * C + y2) != z || f.color(x2 * C + y1) != z);
        }
      std::size_t boxes_of_color = 0;
      for (auto c : cover.witness_colors) boxes_of_color += c == z;
      EXPECT_LE(fs.size(), boxes_of_color);
      EXPECT_LE(fooling_set(f, z, FoolingMode::greedy).size(), fs.size());
    }
  }
}

TEST(Rank, Examples) {
  EXPECT_EQ(comm_matrix_rank(eq_function(2), Field::rational, 1), 4u);
  EXPECT_EQ(comm_matrix_rank(xor_function(1), Field::gf2), 2u);
  EXPECT_EQ(rank_rational({{1, 1, 1}, {1, 1, 1}}), 1u);
  EXPECT_EQ(comm_matrix_rank(all_ones(3, 4), Field::rational, 0), 1u);
  EXPECT_THROW(comm_matrix_rank(xor_function(2), Field::rational), InvalidInput);
}

TEST(Rank, GF2AndRationalDiffer) {
  // [[1,1,0],[0,1,1],[1,0,1]] is singular mod 2 but has rational rank 3.
  EXPECT_EQ(rank_rational({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}), 3u);
  EXPECT_EQ(rank_gf2({{0b011}, {0b110}, {0b101}}, 3), 2u);
}

TEST(Rank, MatchesModularOracle) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const std::size_t r = 1 + rng.below(9), c = 1 + rng.below(9);
    std::vector<std::vector<std::int64_t>> m(r, std::vector<std::int64_t>(c));
    for (auto& row : m)
      for (auto& v : row) v = static_cast<std::int64_t>(rng.below(7)) - 3;
    EXPECT_EQ(rank_rational(m), oracle::rank_mod_p(m)) << "seed " << seed;

    // GF(2) against the span size of the rows.
    std::vector<std::vector<std::uint64_t>> bits(r, std::vector<std::uint64_t>(1));
    std::vector<std::uint64_t> rows(r);
    for (std::size_t i = 0; i < r; ++i) {
      rows[i] = rng.below(std::uint64_t{1} << c);
      bits[i][0] = rows[i];
    }
    std::vector<bool> seen(std::size_t{1} << c, false);
    std::size_t span = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
      std::uint64_t v = 0;
      for (std::size_t i = 0; i < r; ++i)
        if ((mask >> i) & 1) v ^= rows[i];
      if (!seen[v]) {
        seen[v] = true;
        ++span;
      }
    }
    EXPECT_EQ(std::size_t{1} << rank_gf2(bits, c), span);
  }
}

TEST(BoundSummary, Examples) {
  const auto x = bound_summary(xor_function(2));
  EXPECT_EQ(x.color_count, 4u);
  EXPECT_EQ(x.cover_exact, std::optional<std::size_t>(16));
  EXPECT_EQ(x.fooling_per_color[0], 4u);
  EXPECT_GT(x.rank_rational, 0u);
  EXPECT_GT(x.rank_gf2, 0u);
  EXPECT_TRUE(x.consistency_errors.empty());

  const auto c = bound_summary(constant_function(DomainShape({4, 4})));
  EXPECT_EQ(c.cover_exact, std::optional<std::size_t>(1));
  EXPECT_EQ(c.fooling_best, 1u);
  EXPECT_EQ(c.rank_rational, 1u);
  EXPECT_EQ(c.rank_gf2, 1u);
  EXPECT_EQ(c.color_count, 1u);

  const auto e = bound_summary(eq_function(2));
  EXPECT_EQ(e.rank_rational_per_color[1], 4u);
  EXPECT_EQ(e.fooling_per_color[1], 4u);
  std::size_t ones = 0;
  for (const auto& b : e.exact_witness->boxes()) ones += monochromatic_color(b, Target(eq_function(2))) == 1u;
  EXPECT_EQ(ones, 4u);
}

TEST(BoundSummary, InvariantsOnRandomFunctions) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto f = random_function(DomainShape({2 + seed % 5, 2 + seed % 6}), 2 + seed % 3, seed);
    const auto s = bound_summary(f);
    EXPECT_TRUE(s.consistency_errors.empty()) << s.consistency_errors.front();
    ASSERT_TRUE(s.cover_exact.has_value());
    EXPECT_GE(*s.cover_exact, s.color_count);
    EXPECT_GE(*s.cover_exact, s.fooling_best);
    EXPECT_GE(s.cover_greedy, *s.cover_exact);
  }
}
