#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bridge.hpp"
#include "oracles.hpp"
#include "qstat/syntax.hpp"
#include "qstat/wick.hpp"

using namespace qstat;

namespace {

const Letter x{0, false}, xs{0, true}, y{1, false}, ys{1, true};

TwistSpec one_mode(Complex table_entry, std::optional<long long> torsion = std::nullopt) {
  AbelianGroup g = torsion ? AbelianGroup::cyclic(*torsion) : AbelianGroup::free(1);
  return TwistSpec::make(Bicharacter(g, {{table_entry}}), Alphabet(g, {{"x", g.element({1})}}));
}

/// Two modes on Z^2 with grades e1, e2, a random table and pairing.
TwistSpec random_anyonic(std::mt19937_64& rng, bool unimodular) {
  std::uniform_real_distribution<double> ph(0.0, 2 * M_PI), mag(0.7, 1.4), u(-1.0, 1.0);
  AbelianGroup g = AbelianGroup::free(2);
  Bicharacter::Table t(2, std::vector<Complex>(2));
  for (auto& row : t)
    for (auto& v : row) v = std::polar(unimodular ? 1.0 : mag(rng), ph(rng));
  Matrix pairing(2, 2);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) pairing(i, j) = Complex(u(rng), u(rng));
  Alphabet a(g, {{"x", g.element({1, 0})}, {"y", g.element({0, 1})}});
  return TwistSpec::make(Bicharacter(g, t), a, pairing);
}

GradedPoly mono(Word w, Complex c = 1.0) { return GradedPoly::monomial(std::move(w), c); }

}  // namespace

TEST(Exchange, FactorConvention) {
  // x*_i x_j -> eps(g_j, -g_i) x_j x*_i: one mode with table q gives 1/q
  WickAlgebra q(one_mode(0.5));
  EXPECT_DOUBLE_EQ(q.exchange(0, 0).real(), 2.0);
  WickAlgebra f(one_mode(-1.0, 2));
  EXPECT_EQ(f.exchange(0, 0), Complex(-1.0));
}

TEST(NormalOrder, BosonTripleProduct) {
  WickAlgebra b(one_mode(1.0));
  GradedPoly r = b.normal_order(mono({xs, x, x}));
  EXPECT_EQ(distance(r, mono({x, x, xs}) + mono({x}, 2.0)), 0.0);
}

TEST(NormalOrder, FermionTripleProductHasNoStarFreePart) {
  WickAlgebra f(one_mode(-1.0, 2));
  GradedPoly r = f.normal_order(mono({xs, x, x}));
  EXPECT_EQ(distance(r, mono({x, x, xs})), 0.0);
  EXPECT_EQ(r.coefficient({x}), Complex(0.0));
}

TEST(NormalOrder, QDeformedTwoTerms) {
  WickAlgebra q(one_mode(0.5));
  GradedPoly r = q.normal_order(parse_expression("x* x", q.alphabet()));
  EXPECT_EQ(to_string(r, q.alphabet()), "1 + 2 * x x*");
}

TEST(NormalOrder, MatchesStringOracleOnRandomSpecs) {
  std::mt19937_64 rng(101);
  auto words = enumerate_words_upto(2, 4, LetterSet::mixed);
  for (int trial = 0; trial < 4; ++trial) {
    TwistSpec t = random_anyonic(rng, trial % 2 == 0);
    WickAlgebra w(t);
    oracle::Spec o = bridge::to_oracle(t);
    for (const Word& word : words) {
      GradedPoly lib = w.normal_order(mono(word));
      ASSERT_LT(bridge::gap(lib, oracle::normal_order(o, bridge::encode(word))), 1e-9) << bridge::encode(word);
    }
  }
}

TEST(Twist, ClosedFormMatchesRewriting) {
  std::mt19937_64 rng(202);
  auto stars = enumerate_words_upto(2, 3, LetterSet::starred);
  auto plain = enumerate_words_upto(2, 3, LetterSet::unstarred);
  for (int trial = 0; trial < 3; ++trial) {
    TwistSpec t = random_anyonic(rng, false);
    WickAlgebra w(t);
    oracle::Spec o = bridge::to_oracle(t);
    for (const Word& s : stars)
      for (const Word& a : plain)
        ASSERT_LT(bridge::gap(apply_twist(w, s, a), oracle::normal_order(o, bridge::encode(concat(s, a)))), 1e-9);
  }
}

TEST(Twist, InputValidation) {
  WickAlgebra w(one_mode(1.0));
  EXPECT_THROW(apply_twist(w, {x}, {x}), Error);
  EXPECT_THROW(apply_twist(w, {xs}, {xs}), Error);
  EXPECT_THROW(apply_twist(w, {Letter{3, true}}, {x}), Error);
  EXPECT_THROW(WickPoly(mono({xs, x})), Error);
  AbelianGroup g = AbelianGroup::free(1);
  try {
    TwistSpec::make(Bicharacter(g, {{1.0}}), Alphabet(g, {{"x", g.element({1})}}), Matrix::Identity(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::shape_mismatch);
  }
}

TEST(TwistAxioms, HoldForGeneratorRuleExtensions) {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 4; ++trial) {
    WickAlgebra w(random_anyonic(rng, false));
    EXPECT_TRUE(check_twist_axioms(w, 3).passed);
    AssociativityIffReport r = verify_associativity_iff_twist(w, 2);
    EXPECT_TRUE(r.twist.passed);
    EXPECT_TRUE(r.associativity.passed) << r.associativity.line();
    EXPECT_TRUE(r.consistent);
  }
}

TEST(TwistAxioms, CorruptedTwistBreaksBoth) {
  std::mt19937_64 rng(404);
  TwistSpec t = random_anyonic(rng, false);
  // tau(x* (x) y x) with the eps factor against y argument-swapped
  t.corruptions.push_back({{xs}, {y, x}, 0, 0});
  WickAlgebra w(t);
  CheckReport axioms = check_twist_axioms(w, 2);
  EXPECT_FALSE(axioms.passed);
  EXPECT_NE(axioms.witness.find("x*|y x"), std::string::npos) << axioms.witness;
  AssociativityIffReport r = verify_associativity_iff_twist(w, 2);
  EXPECT_FALSE(r.associativity.passed);
  EXPECT_TRUE(r.consistent);
}

TEST(Product, MultiplyIsAssociativeOnRandomPolynomials) {
  std::mt19937_64 rng(505);
  std::uniform_int_distribution<int> len(0, 2), gen(0, 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto draw = [&](double tol) {
    GradedPoly p(tol);
    for (int t = 0; t < 3; ++t) {
      Word a, s;
      for (int k = len(rng); k > 0; --k) a.push_back(Letter{static_cast<std::uint32_t>(gen(rng)), false});
      for (int k = len(rng); k > 0; --k) s.push_back(Letter{static_cast<std::uint32_t>(gen(rng)), true});
      p.add(concat(a, s), Complex(u(rng), u(rng)));
    }
    return WickPoly(p);
  };
  for (int trial = 0; trial < 30; ++trial) {
    WickAlgebra w(random_anyonic(rng, trial % 2 == 0));
    WickPoly p = draw(w.tolerance()), q = draw(w.tolerance()), r = draw(w.tolerance());
    WickPoly lhs = multiply_wick(w, multiply_wick(w, p, q), r);
    WickPoly rhs = multiply_wick(w, p, multiply_wick(w, q, r));
    EXPECT_LT(distance(lhs, rhs), 1e-9 * std::max(1.0, lhs.poly().norm()));
  }
}

TEST(Product, StarIsAntiMultiplicativeForStarTwists) {
  // unimodular normalized factor and Hermitian pairing
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> ph(0.0, 2 * M_PI);
  AbelianGroup g = AbelianGroup::free(2);
  double a = ph(rng), b = ph(rng), c = ph(rng);
  Bicharacter eps(g, {{std::polar(1.0, 0.0), std::polar(1.0, a)}, {std::polar(1.0, -a), std::polar(1.0, M_PI)}});
  Matrix pairing(2, 2);
  pairing << 1.0, std::polar(0.5, b), std::polar(0.5, -b), 2.0;
  (void)c;
  WickAlgebra w(TwistSpec::make(eps, Alphabet(g, {{"x", g.element({1, 0})}, {"y", g.element({0, 1})}}), pairing));
  EXPECT_TRUE(check_star_twist(w, 3).passed);
  for (const Word& p : enumerate_words_upto(2, 2, LetterSet::mixed))
    for (const Word& q : enumerate_words_upto(2, 2, LetterSet::mixed)) {
      WickPoly wp = to_wick(w, mono(p)), wq = to_wick(w, mono(q));
      WickPoly lhs = star_wick(w, multiply_wick(w, wp, wq));
      WickPoly rhs = multiply_wick(w, star_wick(w, wq), star_wick(w, wp));
      ASSERT_LT(distance(lhs, rhs), 1e-9);
    }
}

TEST(Rewriting, ConfluenceAndAgreementWithProduct) {
  std::mt19937_64 rng(707);
  for (int trial = 0; trial < 2; ++trial) {
    WickAlgebra w(random_anyonic(rng, true));
    EXPECT_TRUE(check_confluence(w, 4).passed);
    EXPECT_TRUE(check_rewrite_matches_product(w, 4).passed);
    EXPECT_TRUE(check_commutation_relations(w).passed);
  }
}

TEST(Rewriting, StepCountReported) {
  WickAlgebra b(one_mode(1.0));
  std::size_t steps = 0;
  b.normal_order(mono({xs, x}), RewriteStrategy::rightmost, &steps);
  EXPECT_EQ(steps, 1u);
}
