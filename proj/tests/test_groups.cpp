#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "qstat/groups.hpp"

using namespace qstat;

namespace {

const Complex I(0.0, 1.0);

Bicharacter random_bicharacter(std::mt19937_64& rng, const AbelianGroup& g) {
  std::uniform_real_distribution<double> phase(0.0, 2 * M_PI), mag(0.5, 2.0);
  Bicharacter::Table t(g.rank(), std::vector<Complex>(g.rank()));
  for (std::size_t i = 0; i < g.rank(); ++i)
    for (std::size_t j = 0; j < g.rank(); ++j) {
      auto mi = g.generator_order(i), mj = g.generator_order(j);
      if (mi || mj) {
        // a root of unity of gcd-compatible order keeps torsion valid
        long long m = mi && mj ? std::gcd(*mi, *mj) : (mi ? *mi : *mj);
        std::uniform_int_distribution<long long> k(0, m - 1);
        t[i][j] = std::polar(1.0, 2 * M_PI * static_cast<double>(k(rng)) / static_cast<double>(m));
      } else {
        t[i][j] = std::polar(mag(rng), phase(rng));
      }
    }
  return Bicharacter(g, t);
}

}  // namespace

TEST(AbelianGroup, ReducesTorsionCoordinates) {
  AbelianGroup g(1, {3});
  EXPECT_EQ(g.element({5, 7}), g.element({5, 1}));
  EXPECT_EQ(g.element({2, -1}).coords(), (std::vector<long long>{2, 2}));
  EXPECT_TRUE(g.add(g.element({1, 2}), g.element({-1, 1})).is_zero());
  EXPECT_EQ(g.negate(g.element({4, 1})), g.element({-4, 2}));
  EXPECT_FALSE(g.is_finite());
}

TEST(AbelianGroup, FiniteGroupEnumeratesAllElements) {
  AbelianGroup g(0, {2, 3});
  EXPECT_EQ(g.elements().size(), 6u);
  EXPECT_EQ(g.order(), 6);
  EXPECT_EQ(g.scale(g.generator(1), 3), g.zero());
}

TEST(AbelianGroup, RejectsBadTorsionOrders) {
  EXPECT_THROW(AbelianGroup(0, {0}), Error);
  EXPECT_THROW(AbelianGroup(0, {-2}), Error);
}

TEST(Bicharacter, ShapeAndZeroValidation) {
  AbelianGroup g = AbelianGroup::free(2);
  try {
    Bicharacter(g, {{1.0, 1.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::shape_mismatch);
  }
  try {
    Bicharacter(g, {{1.0, 0.0}, {1.0, 1.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::zero_bicharacter);
  }
}

TEST(Bicharacter, EvaluatesPowersOfTheTable) {
  AbelianGroup g = AbelianGroup::free(1);
  Bicharacter q(g, {{0.5}});
  EXPECT_DOUBLE_EQ(q(g.element({2}), g.element({3})).real(), std::pow(0.5, 6));
  EXPECT_DOUBLE_EQ(q(g.element({-1}), g.element({2})).real(), 4.0);
  EXPECT_EQ(q(g.zero(), g.element({9})), Complex(1.0));
}

TEST(Bicharacter, RootsOfUnityAreExact) {
  AbelianGroup z4 = AbelianGroup::cyclic(4);
  Bicharacter b(z4, {{I}});
  EXPECT_EQ(b(z4.element({2}), z4.element({2})), Complex(1.0));
  EXPECT_EQ(b(z4.element({1}), z4.element({3})), -I);
  EXPECT_TRUE(validate_torsion(b));
}

TEST(Bicharacter, NormalizationVerdicts) {
  AbelianGroup z2 = AbelianGroup::cyclic(2);
  EXPECT_TRUE(is_normalized(Bicharacter(z2, {{-1.0}})));
  AbelianGroup z = AbelianGroup::free(1);
  AxiomVerdict v = is_normalized(Bicharacter(z, {{0.5}}));
  EXPECT_FALSE(v);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness->first, 0u);
  EXPECT_EQ(v.witness->second, 0u);
  EXPECT_NEAR(v.residual, 0.75, 1e-15);
}

TEST(Bicharacter, TorsionVerdicts) {
  AbelianGroup z2 = AbelianGroup::cyclic(2);
  EXPECT_TRUE(validate_torsion(Bicharacter(z2, {{-1.0}})));
  EXPECT_FALSE(validate_torsion(Bicharacter(z2, {{I}})));
  AbelianGroup mixed(1, {2});
  // a free generator paired with an order-2 one must take values +-1
  EXPECT_FALSE(validate_torsion(Bicharacter(mixed, {{0.3, 2.0}, {1.0, 1.0}})));
  EXPECT_TRUE(validate_torsion(Bicharacter(mixed, {{0.3, -1.0}, {-1.0, 1.0}})));
}

TEST(BicharacterProperty, BimultiplicativeOnRandomTables) {
  std::mt19937_64 rng(2024);
  const std::vector<AbelianGroup> groups = {AbelianGroup::free(1), AbelianGroup::free(2), AbelianGroup(1, {3}),
                                            AbelianGroup(0, {2, 4})};
  std::uniform_int_distribution<long long> coord(-3, 3);
  for (const auto& g : groups)
    for (int trial = 0; trial < 20; ++trial) {
      Bicharacter b = random_bicharacter(rng, g);
      ASSERT_TRUE(validate_torsion(b));
      auto draw = [&] {
        std::vector<long long> c(g.rank());
        for (auto& x : c) x = coord(rng);
        return g.element(c);
      };
      GroupElement x = draw(), y = draw(), z = draw();
      Complex l = b(g.add(x, y), z), r = b(x, z) * b(y, z);
      EXPECT_LT(std::abs(l - r), 1e-9 * std::max(1.0, std::abs(l)));
      l = b(x, g.add(y, z));
      r = b(x, y) * b(x, z);
      EXPECT_LT(std::abs(l - r), 1e-9 * std::max(1.0, std::abs(l)));
      EXPECT_LT(std::abs(b(x, g.zero()) - 1.0), 1e-12);
    }
}

TEST(BicharacterProperty, UnimodularSymmetricTablesAreNormalized) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> phase(0.0, 2 * M_PI);
  for (int trial = 0; trial < 20; ++trial) {
    AbelianGroup g = AbelianGroup::free(2);
    double a = phase(rng), c = phase(rng), d = phase(rng);
    Bicharacter b(g, {{std::polar(1.0, 0.0), std::polar(1.0, a)}, {std::polar(1.0, -a), std::polar(1.0, 0.0)}});
    EXPECT_TRUE(is_normalized(b));
    Bicharacter bad(g, {{std::polar(1.0, c), 1.0}, {1.0, std::polar(1.0, d)}});
    EXPECT_EQ(static_cast<bool>(is_normalized(bad)),
              std::abs(std::polar(1.0, 2 * c) - 1.0) < 1e-9 && std::abs(std::polar(1.0, 2 * d) - 1.0) < 1e-9);
  }
}
