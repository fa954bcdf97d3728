#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qstat/hopf.hpp"

using namespace qstat;

namespace {

// kZ_n written out from the group law, independent of make_group_hopf
StructureHopf cyclic_by_hand(std::size_t n) {
  StructureHopf h = StructureHopf::zeros(n);
  h.tolerance = 1e-12;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) h.mult(i, j, (i + j) % n) = 1.0;
    h.comult(i, i, i) = 1.0;
    h.counit[static_cast<Eigen::Index>(i)] = 1.0;
    h.antipode(static_cast<Eigen::Index>((n - i) % n), static_cast<Eigen::Index>(i)) = 1.0;
  }
  h.unit[0] = 1.0;
  return h;
}

bool all_pass(const StructureHopf& h) {
  return check_algebra(h).passed && check_coalgebra(h).passed && check_bialgebra(h).passed &&
         check_antipode(h).passed;
}

Matrix random_invertible(std::mt19937_64& rng, Eigen::Index d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix P = Matrix::Identity(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) P(r, c) += 0.4 * Complex(u(rng), u(rng));
  return P;
}

}  // namespace

TEST(GroupHopf, MatchesHandWrittenCyclicAlgebra) {
  for (long long n : {2, 3, 5}) {
    StructureHopf h = make_group_hopf(AbelianGroup::cyclic(n));
    StructureHopf ref = cyclic_by_hand(static_cast<std::size_t>(n));
    ASSERT_EQ(h.dim, ref.dim);
    for (std::size_t k = 0; k < h.mult.size(); ++k) EXPECT_EQ(h.mult.flat(k), ref.mult.flat(k));
    for (std::size_t k = 0; k < h.comult.size(); ++k) EXPECT_EQ(h.comult.flat(k), ref.comult.flat(k));
    EXPECT_EQ(h.antipode, ref.antipode);
    EXPECT_EQ(h.unit, ref.unit);
    EXPECT_EQ(h.basis_labels[0], "e");
    EXPECT_EQ(h.basis_labels[1], "g^1");
  }
}

TEST(GroupHopf, CyclicAlgebrasPassEveryDiagram) {
  for (std::size_t n : {2, 3, 4, 6}) {
    StructureHopf h = cyclic_by_hand(n);
    for (const CheckReport& r : {check_algebra(h), check_coalgebra(h), check_bialgebra(h), check_antipode(h)}) {
      EXPECT_TRUE(r.passed) << r.line();
      EXPECT_LT(r.max_residual, 1e-12);
      EXPECT_GT(r.checked, 0u);
    }
  }
}

TEST(GroupHopf, ProductGroupPasses) {
  StructureHopf h = make_group_hopf(AbelianGroup(0, {2, 3}));
  EXPECT_EQ(h.dim, 6u);
  EXPECT_TRUE(all_pass(h));
}

TEST(GroupHopf, TruncatedFreeGroupReportsArtifactsNotFailures) {
  StructureHopf h = make_group_hopf(AbelianGroup::free(1), 2);
  EXPECT_EQ(h.dim, 5u);
  CheckReport alg = check_algebra(h);
  EXPECT_TRUE(alg.passed) << alg.line();
  EXPECT_GT(alg.artifacts, 0u);
  EXPECT_NE(alg.line().find("truncation_artifacts="), std::string::npos);
  EXPECT_TRUE(check_antipode(h).passed);
}

TEST(GroupHopf, SinglePerturbationsAreDetected) {
  const StructureHopf base = cyclic_by_hand(3);
  for (std::size_t k = 0; k < base.mult.size(); ++k) {
    StructureHopf h = base;
    h.mult.flat(k) += 0.1;
    EXPECT_FALSE(all_pass(h)) << "mult entry " << k;
  }
  for (std::size_t k = 0; k < base.comult.size(); ++k) {
    StructureHopf h = base;
    h.comult.flat(k) += 0.1;
    EXPECT_FALSE(all_pass(h)) << "comult entry " << k;
  }
  for (Eigen::Index k = 0; k < 3; ++k) {
    StructureHopf h = base;
    h.unit[k] += 0.1;
    EXPECT_FALSE(all_pass(h)) << "unit " << k;
    h = base;
    h.counit[k] += 0.1;
    EXPECT_FALSE(all_pass(h)) << "counit " << k;
  }
  for (Eigen::Index k = 0; k < 9; ++k) {
    StructureHopf h = base;
    h.antipode(k / 3, k % 3) += 0.1;
    EXPECT_FALSE(check_antipode(h).passed) << "antipode " << k;
  }
}

TEST(GroupHopf, ShapeErrors) {
  StructureHopf h = cyclic_by_hand(2);
  h.unit = Vector::Zero(3);
  try {
    check_algebra(h);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::shape_mismatch);
  }
}

TEST(Cqt, SignFormOnZ2) {
  // <g^a, g^b> = (-1)^(ab); every relation reduces to sign bookkeeping on
  // eight basis triples
  CqtForm c{cyclic_by_hand(2), Matrix(2, 2)};
  c.form << 1.0, 1.0, 1.0, -1.0;
  CheckReport r = check_cqt(c);
  EXPECT_TRUE(r.passed) << r.line();

  for (Eigen::Index k = 0; k < 4; ++k) {
    CqtForm bad = c;
    bad.form(k / 2, k % 2) += 0.1;
    EXPECT_FALSE(check_cqt(bad).passed) << "form entry " << k;
  }
}

TEST(Cqt, BicharacterFormsAreCoquasitriangular) {
  const Complex w = std::polar(1.0, 2 * M_PI / 3);
  for (Complex v : {Complex(1.0), w, w * w}) {
    Bicharacter b(AbelianGroup::cyclic(3), {{v}}, 1e-12);
    EXPECT_TRUE(check_cqt(bicharacter_to_cqt(b)).passed);
  }
  // not a bicharacter: form(g, g) = 2 breaks multiplicativity
  CqtForm bad = bicharacter_to_cqt(Bicharacter(AbelianGroup::cyclic(3), {{w}}));
  bad.form(1, 1) = 2.0;
  EXPECT_FALSE(check_cqt(bad).passed);
}

TEST(HopfModule, RegularModuleSatisfiesStructureTheorem) {
  StructureHopf h = cyclic_by_hand(3);
  for (std::size_t du : {1u, 2u, 4u}) {
    HopfModule m = regular_hopf_module(h, du);
    EXPECT_TRUE(check_comodule(m).passed);
    EXPECT_TRUE(check_hopf_module(m).passed);
    StructureTheoremResult st = verify_structure_theorem(m);
    EXPECT_TRUE(st.report.passed) << st.report.line();
    EXPECT_EQ(st.coinvariant_dim, du);
    // dim(M) = dim(M^coH) dim(H)
    EXPECT_EQ(m.dim, st.coinvariant_dim * h.dim);
    EXPECT_GT(st.inverse_condition, 1e-8);
  }
}

TEST(HopfModule, OneDimensionalCaseIsTheIdentity) {
  StructureHopf k = StructureHopf::zeros(1);
  k.mult(0, 0, 0) = k.comult(0, 0, 0) = 1.0;
  k.unit[0] = k.counit[0] = 1.0;
  k.antipode(0, 0) = 1.0;
  ASSERT_TRUE(all_pass(k));
  HopfModule m = regular_hopf_module(k, 1);
  StructureTheoremResult st = verify_structure_theorem(m);
  EXPECT_TRUE(st.report.passed);
  EXPECT_EQ(st.coinvariant_dim, 1u);
  EXPECT_NEAR(st.inverse_condition, 1.0, 1e-12);
}

TEST(HopfModule, ComoduleWithoutCompatibleActionIsRejected) {
  StructureHopf h = cyclic_by_hand(2);
  HopfModule m = trivial_module(h, 2);
  EXPECT_TRUE(check_comodule(m).passed);
  EXPECT_FALSE(check_hopf_module(m).passed);
  StructureTheoremResult st = verify_structure_theorem(m);
  EXPECT_FALSE(st.report.passed);
  EXPECT_NE(st.report.witness.find("not a Hopf module"), std::string::npos);
}

TEST(HopfModuleProperty, BasisChangePreservesTheStructure) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
    std::size_t du = 1 + static_cast<std::size_t>(trial % 3);
    HopfModule m = regular_hopf_module(cyclic_by_hand(n), du);
    m.tolerance = 1e-8;
    HopfModule moved = change_basis(m, random_invertible(rng, static_cast<Eigen::Index>(m.dim)));
    StructureTheoremResult st = verify_structure_theorem(moved);
    EXPECT_TRUE(st.report.passed) << st.report.line();
    EXPECT_EQ(st.coinvariant_dim, du);
    Matrix U = coinvariants(moved);
    EXPECT_EQ(static_cast<std::size_t>(U.cols()), du);
  }
}

TEST(HopfModule, SingularBasisChangeIsRejected) {
  HopfModule m = regular_hopf_module(cyclic_by_hand(2), 1);
  EXPECT_THROW(change_basis(m, Matrix::Zero(2, 2)), Error);
}
