#include <gtest/gtest.h>

#include <string>

#include "qstat/config.hpp"

using namespace qstat;

namespace {

const char* kBoson = R"(
[group]
free_rank = 1
torsion_orders = []

[bicharacter]
gen_table = [[1]]

[generators]
x = [1]

[pairing]
matrix = [[1]]
)";

ErrorCode code_of(const std::string& text, ConfigOptions opts = {}) {
  try {
    parse_config(text, opts);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorCode::domain;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "no error";
}

ConfigOptions for_fock() {
  ConfigOptions o;
  o.fock_requested = true;
  return o;
}

}  // namespace

TEST(Config, MinimalBoson) {
  SystemConfig c = parse_config(kBoson);
  EXPECT_EQ(c.group.rank(), 1u);
  EXPECT_EQ(c.alphabet.size(), 1u);
  EXPECT_EQ(c.bicharacter.gen_table()[0][0], Complex(1.0));
  EXPECT_EQ(c.cutoff, 4u);
  EXPECT_EQ(c.tolerance, default_tolerance);
  ASSERT_TRUE(c.pairing);
  EXPECT_EQ((*c.pairing)(0, 0), Complex(1.0));
}

TEST(Config, FermionWithTorsion) {
  SystemConfig c = parse_config(R"(
[group]
free_rank = 0
torsion_orders = [2]
[bicharacter]
gen_table = [[-1]]
[generators]
a = [1]
b = [3]   # reduced mod 2
[fock]
cutoff = 3
)", for_fock());
  EXPECT_TRUE(c.group.is_finite());
  EXPECT_EQ(c.alphabet.generator(1).grade.coords(), std::vector<long long>{1});
  EXPECT_EQ(c.cutoff, 3u);
  EXPECT_FALSE(c.pairing);
  EXPECT_EQ(c.twist().pairing, Matrix::Identity(2, 2));
}

TEST(Config, ComplexLiteralsAndMultilineArrays) {
  SystemConfig c = parse_config(R"(
[group]
free_rank = 2
[bicharacter]
gen_table = [[1, 0.5-1j],
             [2j, -1.5e0+0.25j]]
[generators]
x = [1, 0]
y = [0, -1]
[run]
tolerance = 1e-7
seed = 42
)");
  const auto& t = c.bicharacter.gen_table();
  EXPECT_EQ(t[0][1], Complex(0.5, -1.0));
  EXPECT_EQ(t[1][0], Complex(0.0, 2.0));
  EXPECT_EQ(t[1][1], Complex(-1.5, 0.25));
  EXPECT_EQ(c.tolerance, 1e-7);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.bicharacter.tolerance(), 1e-7);
}

TEST(Config, OverridesFromOptions) {
  ConfigOptions o;
  o.tolerance = 1e-6;
  o.seed = 9;
  SystemConfig c = parse_config(kBoson, o);
  EXPECT_EQ(c.tolerance, 1e-6);
  EXPECT_EQ(c.seed, 9u);
}

TEST(Config, ZeroEntryRejectedWithPosition) {
  std::string text = std::string(kBoson);
  text.replace(text.find("[[1]]"), 5, "[[0]]");
  EXPECT_EQ(code_of(text), ErrorCode::zero_bicharacter);
  std::string msg = message_of(text);
  EXPECT_NE(msg.find("config 7:15"), std::string::npos) << msg;
  EXPECT_NE(msg.find("bicharacter values must be nonzero"), std::string::npos);
}

TEST(Config, DistinctErrorCodes) {
  EXPECT_EQ(code_of("[group]\nfree_rank = 1\n[generators]\nx = [1]\n"), ErrorCode::missing_section);
  EXPECT_EQ(code_of("[group]\nfree_rank = 1\n[bicharacter]\ngen_table = [[1]]\n"), ErrorCode::missing_section);
  EXPECT_EQ(code_of(std::string(kBoson) + "[run]\ncolour = 1\n"), ErrorCode::unknown_key);
  EXPECT_EQ(code_of(std::string(kBoson) + "[extras]\n"), ErrorCode::unknown_key);
  EXPECT_EQ(code_of("[group]\nfree_rank = 1\n[bicharacter]\ngen_table = [[1, 1]]\n[generators]\nx = [1]\n"),
            ErrorCode::shape_mismatch);
  EXPECT_EQ(code_of("[group]\nfree_rank = 1\n[bicharacter]\ngen_table = [[1]]\n[generators]\nx = [1, 2]\n"),
            ErrorCode::shape_mismatch);
  EXPECT_EQ(code_of(std::string(kBoson) + "[fock]\ncutoff = 0\n"), ErrorCode::domain);
  EXPECT_EQ(code_of("[group]\nfree_rank = 0\ntorsion_orders = [2]\n[bicharacter]\ngen_table = [[1j]]\n"
                    "[generators]\nx = [1]\n"),
            ErrorCode::torsion);
  EXPECT_EQ(code_of("[group]\nfree_rank = 1\n[bicharacter]\ngen_table = [[1]]\n[generators]\nx = [1]\n[pairing]\n"
                    "matrix = [[1], [2]]\n"),
            ErrorCode::shape_mismatch);
}

TEST(Config, NonNormalizedOnlyMattersForFockCommands) {
  std::string q = "[group]\nfree_rank = 1\n[bicharacter]\ngen_table = [[0.5]]\n[generators]\nx = [1]\n";
  EXPECT_NO_THROW(parse_config(q));
  EXPECT_EQ(code_of(q, for_fock()), ErrorCode::non_normalized);
  EXPECT_NO_THROW(parse_config(q + "[fock]\nallow_unnormalized = true\n", for_fock()));
}

TEST(Config, SyntaxErrorsArePositioned) {
  EXPECT_EQ(code_of("free_rank = 1\n"), ErrorCode::parse);
  std::string msg = message_of("[group]\nfree_rank = 1\n[bicharacter]\ngen_table = [[1,]\n");
  EXPECT_NE(msg.find("config 4:"), std::string::npos) << msg;
  msg = message_of("[group]\nfree_rank = 1 2\n");
  EXPECT_NE(msg.find("config 2:15"), std::string::npos) << msg;
  msg = message_of("[group]\nfree_rank = 1\nfree_rank = 2\n");
  EXPECT_NE(msg.find("duplicate key"), std::string::npos) << msg;
  msg = message_of("[group]\nfree_rank = 1.5\n");
  EXPECT_NE(msg.find("integer"), std::string::npos) << msg;
  msg = message_of("[group]\nfree_rank = 1\n[group]\n");
  EXPECT_NE(msg.find("duplicate section"), std::string::npos) << msg;
  msg = message_of("[group]\nfree_rank = yes\n");
  EXPECT_NE(msg.find("unknown literal"), std::string::npos) << msg;
}

TEST(Config, ExplicitHopfStructureConstants) {
  // kZ_2 on basis (e, g); antipode rows are S(b_i)
  SystemConfig c = parse_config(std::string(kBoson) + R"(
[hopf]
mult = [[[1, 0], [0, 1]],
        [[0, 1], [1, 0]]]
unit = [1, 0]
comult = [[[1, 0], [0, 0]],
          [[0, 0], [0, 1]]]
counit = [1, 1]
antipode = [[1, 0], [0, 1]]
form = [[1, 1], [1, -1]]
)");
  ASSERT_TRUE(c.hopf);
  EXPECT_EQ(c.hopf->dim, 2u);
  EXPECT_TRUE(check_algebra(*c.hopf).passed);
  EXPECT_TRUE(check_bialgebra(*c.hopf).passed);
  EXPECT_TRUE(check_antipode(*c.hopf).passed);
  ASSERT_TRUE(c.cqt_form);
  EXPECT_TRUE(check_cqt(CqtForm{*c.hopf, *c.cqt_form}).passed);
  EXPECT_EQ(code_of(std::string(kBoson) + "[hopf]\nunit = [1]\n"), ErrorCode::missing_section);
}
