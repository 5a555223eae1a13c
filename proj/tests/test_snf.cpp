#include "oracles.hpp"
#include "symplab/random.hpp"
#include "symplab/snf.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace symplab;

namespace {

std::vector<BigInt> invariant_factors_by_minors(const IntMatrix& a) {
  std::vector<std::vector<long long>> rows(a.rows(), std::vector<long long>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) rows[i][j] = static_cast<long long>(a(i, j));
  }
  return oracle::invariant_factors(rows);
}

}  // namespace

TEST(Snf, KnownExamples) {
  const SmithForm s = smith_normal_form(IntMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  EXPECT_EQ(s.invariants, (std::vector<BigInt>{2, 6, 12}));
  EXPECT_EQ(smith_normal_form(IntMatrix{{0, 0}, {0, 0}}).rank, 0u);
  EXPECT_EQ(smith_normal_form(IntMatrix(3, 0)).rank, 0u);
}

TEST(Snf, AgreesWithDeterminantalDivisorOracle) {
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    SplitMix64 rng = stream(99, trial);
    IntMatrix a(5, 5);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) a(i, j) = static_cast<long long>(rng() % 19) - 9;
    }
    // Lower the rank now and then so that zero invariants are exercised.
    if (trial % 7 == 0) {
      for (int j = 0; j < 5; ++j) a(4, j) = a(0, j) * 2 - a(1, j);
    }
    const SmithForm s = smith_normal_form(a);
    EXPECT_EQ(s.invariants, invariant_factors_by_minors(a)) << trial;
    EXPECT_EQ(s.u * a * s.v, s.d);
  }
}

TEST(Snf, RectangularMatrices) {
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    SplitMix64 rng = stream(7, trial);
    IntMatrix a(3, 5);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 5; ++j) a(i, j) = static_cast<long long>(rng() % 13) - 6;
    }
    EXPECT_EQ(smith_normal_form(a).invariants, invariant_factors_by_minors(a)) << trial;
  }
}

TEST(Groups, CokernelKernelAndSums) {
  const AbelianGroup z3 = cokernel(IntMatrix{{3}});
  EXPECT_EQ(z3.to_string(), "Z/3");
  const AbelianGroup z2 = cokernel(IntMatrix{{2}});
  EXPECT_EQ(direct_sum(z2, z3).to_string(), "Z/6");
  EXPECT_EQ(direct_sum(z2, z2).to_string(), "Z/2 + Z/2");
  EXPECT_EQ(kernel(IntMatrix{{1, 1}}).rank, 1u);
  EXPECT_EQ(cokernel(IntMatrix(2, 0)).to_string(), "Z^2");
  EXPECT_TRUE(cokernel(IntMatrix{{1}}).trivial());
}
