#include <gtest/gtest.h>

#include <cmath>

#include "commlab/error.hpp"
#include "commlab/functions.hpp"
#include "commlab/info.hpp"
#include "commlab/rng.hpp"
#include "oracle.hpp"

using namespace commlab;

namespace {

const DomainShape k2x2({2, 2});

JointDistribution diagonal() { return JointDistribution(k2x2, {0.5, 0, 0, 0.5}); }

Protocol alice_sends_x() {
  return Protocol(Cover(k2x2, {Box::from_lists(k2x2, {{0}, {0, 1}}), Box::from_lists(k2x2, {{1}, {0, 1}})}),
                  MinIndexSelector{});
}

Protocol parity_protocol() { return Protocol(double_full_box_cover(), parity_selector()); }

std::vector<std::uint32_t> column(const DomainShape& s, std::uint32_t (*fn)(std::size_t, std::size_t)) {
  std::vector<std::uint32_t> out(s.cell_count());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = fn(s.coord(c, 0), s.coord(c, 1));
  return out;
}

}  // namespace

TEST(JointDistribution, Validation) {
  EXPECT_THROW(JointDistribution(k2x2, {0.5, 0.5, 0.5, 0}), InvalidInput);
  EXPECT_THROW(JointDistribution(k2x2, {1.5, -0.5, 0, 0}), InvalidInput);
  EXPECT_THROW(JointDistribution(k2x2, {0.5, 0.5}), InvalidInput);
  EXPECT_THROW(JointDistribution(k2x2, {NAN, 1, 0, 0}), InvalidInput);
  EXPECT_NO_THROW(JointDistribution(k2x2, {0.25, 0.25, 0.25, 0.25 + 5e-13}));
  EXPECT_THROW(diagonal().restricted(IndexSet(4, {1, 2})), DegenerateInstance);
}

TEST(InfoQuantity, Examples) {
  EXPECT_NEAR(info_quantity(InfoModel(JointDistribution::uniform(k2x2)), "H(X,Y)"), 2.0, 1e-12);
  EXPECT_NEAR(info_quantity(InfoModel(diagonal()), "I(X:Y)"), 1.0, 1e-12);
  const JointDistribution skew(k2x2, {0.5, 0.25, 0.25, 0});
  EXPECT_NEAR(info_quantity(InfoModel(skew), "H(X)"), 0.8112781244591328, 1e-12);
  EXPECT_THROW(parse_expression("H(X"), InvalidInput);
  EXPECT_THROW(parse_expression("I(X|Y)"), InvalidInput);
  EXPECT_THROW(info_quantity(InfoModel(skew), "H(T)"), InvalidInput);
}

TEST(BinaryEntropy, Values) {
  EXPECT_NEAR(binary_entropy(0.25), 0.811278, 1e-4);
  EXPECT_NEAR(binary_entropy(0.5), 1.0, 1e-12);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.1), 0.4689955935892812, 1e-12);
}

TEST(TripleInformation, Examples) {
  const auto uni = JointDistribution::uniform(k2x2);
  const InfoModel constant(uni, std::vector<std::uint32_t>(4, 0));
  EXPECT_NEAR(triple_information(constant, {Var::X(0)}, {Var::X(1)}, {Var::T()}).value, 0.0, 1e-12);

  const InfoModel parity(uni, column(k2x2, [](std::size_t x, std::size_t y) { return std::uint32_t(x ^ y); }));
  const auto t = triple_information(parity, {Var::X(0)}, {Var::X(1)}, {Var::T()});
  EXPECT_NEAR(t.value, -1.0, 1e-12);
  EXPECT_LE(t.formula_gap, 1e-9);

  const InfoModel copy(diagonal(), column(k2x2, [](std::size_t x, std::size_t) { return std::uint32_t(x); }));
  EXPECT_NEAR(triple_information(copy, {Var::X(0)}, {Var::X(1)}, {Var::T()}).value, 1.0, 1e-12);
}

TEST(InternalInformationCost, Examples) {
  const auto uni = JointDistribution::uniform(k2x2);
  EXPECT_NEAR(internal_information_cost(uni, alice_sends_x()), 1.0, 1e-12);
  EXPECT_NEAR(internal_information_cost(uni, Protocol(Cover(k2x2, {Box::full(k2x2)}), MinIndexSelector{})), 0.0,
              1e-12);
  EXPECT_NEAR(internal_information_cost(uni, Protocol(trivial_merlin_cover(k2x2), MinIndexSelector{})), 2.0, 1e-12);
}

TEST(InternalInformationCost, SupportOutsideCover) {
  const Cover partial(k2x2, {Box::from_lists(k2x2, {{0}, {0, 1}})});
  EXPECT_THROW(internal_information_cost(JointDistribution::uniform(k2x2), Protocol(partial, MinIndexSelector{})),
               InvalidInput);
  // Zero mass on the uncovered row is fine.
  EXPECT_NEAR(internal_information_cost(JointDistribution(k2x2, {0.5, 0.5, 0, 0}), Protocol(partial, MinIndexSelector{})),
              0.0, 1e-12);
}

TEST(BuildProfile, XorSingletons) {
  const auto f = xor_function(1);
  const Target t(f);
  ProfileOptions o;
  o.target = &t;
  o.f_mode = FMode::function;
  const auto p = build_profile(JointDistribution::uniform(f.shape()),
                               Protocol(trivial_merlin_cover(f.shape()), MinIndexSelector{}), o);
  EXPECT_NEAR(p.h_t, 2.0, 1e-12);
  EXPECT_NEAR(p.i_xy_given_t, 0.0, 1e-12);
  EXPECT_NEAR(p.h_f_given_x[0], 1.0, 1e-12);
  EXPECT_NEAR(p.h_f_given_x[1], 1.0, 1e-12);
  EXPECT_EQ(p.rho_global, 1u);
}

TEST(BuildProfile, ConstantSingleBox) {
  const Target t(constant_function(k2x2));
  ProfileOptions o;
  o.target = &t;
  o.f_mode = FMode::function;
  const auto p = build_profile(JointDistribution::uniform(k2x2), Protocol(Cover(k2x2, {Box::full(k2x2)}), MinIndexSelector{}), o);
  EXPECT_NEAR(p.h_t, 0.0, 1e-12);
  EXPECT_NEAR(p.h_f_given_x[0], 0.0, 1e-12);
  EXPECT_NEAR(p.ic, 0.0, 1e-12);
}

TEST(BuildProfile, ParityTightness) {
  const auto p = build_profile(JointDistribution::uniform(k2x2), parity_protocol());
  EXPECT_NEAR(p.i_xy, 0.0, 1e-12);
  EXPECT_NEAR(p.i_xy_given_t, 1.0, 1e-12);
  EXPECT_NEAR(p.i_xyt, -1.0, 1e-12);
  EXPECT_EQ(p.rho_global, 2u);
  EXPECT_NEAR(p.ic, 2.0, 1e-12);
}

TEST(BuildProfile, BoxColorModeExcludesNoneColorBoxes) {
  // Relation admitting 0 on row 0 and 1 on row 1: the full box has no common
  // color, the two row boxes do.
  std::vector<IndexSet> adm{IndexSet(2, {0}), IndexSet(2, {0}), IndexSet(2, {1}), IndexSet(2, {1})};
  const Target rel(Relation(k2x2, 2, adm));
  const Cover cover(k2x2, {Box::full(k2x2), Box::from_lists(k2x2, {{1}, {0, 1}})});
  ExplicitSelector sel;
  sel.table = {0, 0, 1, 0};
  ProfileOptions o;
  o.target = &rel;
  o.f_mode = FMode::box_color;
  const auto p = build_profile(JointDistribution::uniform(k2x2), Protocol(cover, sel), o);
  EXPECT_TRUE(p.warning);
  EXPECT_EQ(p.none_color_boxes, (std::vector<std::size_t>{0}));
  EXPECT_NEAR(p.excluded_mass, 0.75, 1e-12);
  EXPECT_TRUE(p.has_f);
}

TEST(Entropy, MatchesNaiveOracle) {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    const DomainShape s({1 + rng.below(24), 1 + rng.below(24)});
    const auto d = JointDistribution::random(s, seed, seed % 3 == 0 ? 0.4 : 0.0);
    const auto tcol = column(s, [](std::size_t x, std::size_t y) { return std::uint32_t((x * 7 + y * 3) % 5); });
    const InfoModel m(d, tcol);
    auto key = [&](std::initializer_list<int> which) {
      return [&, which](std::size_t c) {
        oracle::Key k;
        for (int w : which) k.push_back(w < 2 ? s.coord(c, static_cast<std::size_t>(w)) : tcol[c]);
        return k;
      };
    };
    EXPECT_NEAR(m.entropy({Var::X(0)}), oracle::entropy(d, key({0})), 1e-9);
    EXPECT_NEAR(m.entropy({Var::X(1)}), oracle::entropy(d, key({1})), 1e-9);
    EXPECT_NEAR(m.entropy({Var::X(0), Var::X(1)}), oracle::entropy(d, key({0, 1})), 1e-9);
    EXPECT_NEAR(m.entropy({Var::T()}), oracle::entropy(d, key({2})), 1e-9);
    EXPECT_NEAR(m.entropy({Var::X(0), Var::T()}), oracle::entropy(d, key({0, 2})), 1e-9);
    ++checked;
  }
  EXPECT_EQ(checked, 1000u);
}

TEST(Entropy, LargeDistributionMatchesOracle) {
  const DomainShape s({256, 256});
  const auto d = JointDistribution::random(s, 5);
  const InfoModel m(d);
  EXPECT_NEAR(m.entropy({Var::X(0), Var::X(1)}), oracle::entropy(d, [&](std::size_t c) { return oracle::Key{c}; }),
              1e-9);
  EXPECT_NEAR(m.entropy({Var::X(1)}), oracle::entropy(d, [&](std::size_t c) { return oracle::Key{s.coord(c, 1)}; }),
              1e-9);
}

TEST(Profile, IdentitiesHoldOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const DomainShape s({2 + rng.below(10), 2 + rng.below(10)});
    RandomBoundedParams rb;
    rb.rho_max = 1 + rng.below(4);
    rb.extra = rng.below(5);
    Cover cover;
    try {
      cover = random_bounded_cover(s, rb, seed);
    } catch (const GenerationFailure&) {
      continue;
    }
    const auto f = cover_colored_function(cover, 3, seed);
    const Target t(f);
    ProfileOptions o;
    o.target = &t;
    o.f_mode = FMode::function;
    const auto d = JointDistribution::random(s, seed, 0.2);
    const auto p = build_profile(d, Protocol(cover, SeededRandomSelector{seed}), o);
    EXPECT_LE(p.chain_rule_gap, 1e-9);
    EXPECT_LE(p.triple_formula_gap, 1e-9);
    EXPECT_LE(p.ic_identity_gap, 1e-9);
    EXPECT_LE(p.i_xyf_gap, 1e-9);
    EXPECT_NEAR(p.h_f_given_all, 0.0, 1e-9);
    for (double v : {p.h_x, p.h_y, p.h_xy, p.h_t, p.i_xy, p.i_xy_given_t, p.ic, p.h_f}) {
      EXPECT_GE(v, -1e-9);
      EXPECT_TRUE(std::isfinite(v));
    }
  }
}

TEST(Profile, MultipartyShape) {
  const DomainShape s({2, 2, 2});
  const auto p = build_profile(JointDistribution::uniform(s), Protocol(trivial_merlin_cover(s), MinIndexSelector{}));
  EXPECT_EQ(p.parties, 3u);
  EXPECT_NEAR(p.h_t, 3.0, 1e-12);
  ASSERT_EQ(p.h_t_given_x.size(), 3u);
  for (double v : p.h_t_given_x) EXPECT_NEAR(v, 2.0, 1e-12);
}
