#include <massey/cohomology.hpp>

#include <gtest/gtest.h>

#include "test_util.hpp"

#include <random>

using namespace massey;

namespace {

SliceMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int density_pct) {
  std::uniform_int_distribution<int> val(-3, 3), pct(0, 99), den(1, 3);
  SliceMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (pct(rng) < density_pct) m.add(i, j, rat(val(rng), den(rng)));
  return m;
}

}  // namespace

TEST(Linalg, RankOfZeroAndIdentity) {
  EXPECT_EQ(rank(SliceMatrix(3, 4)), 0u);
  EXPECT_EQ(rank(SliceMatrix::identity(5)), 5u);
  EXPECT_EQ(rank(SliceMatrix(0, 0)), 0u);
}

TEST(Linalg, DifferentialOnL1WeightFiveOneForms) {
  CochainComplex cx(load_preset(Preset::L1, 6));
  // e5 -> 3 e1^e4 + e2^e3, a single nonzero column
  const auto& d = cx.d_matrix(1, 5);
  EXPECT_EQ(d.cols, 1u);
  EXPECT_EQ(d.rows, 2u);
  EXPECT_EQ(rank(d), 1u);
  EXPECT_EQ(cx.form_of(d.transposed().data[0], 2, 5), parse_form("3*e1^e4 + e2^e3"));
}

TEST(Linalg, KernelBasis) {
  EXPECT_TRUE(kernel_basis(SliceMatrix::identity(4)).empty());
  auto k = kernel_basis(SliceMatrix(1, 3));
  ASSERT_EQ(k.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(k[i][j], Rational(i == j ? 1 : 0));

  // d on L1 2-forms of weight 5: both e1^e4 and e2^e3 are closed
  CochainComplex cx(load_preset(Preset::L1, 6));
  EXPECT_EQ(kernel_basis(cx.d_matrix(2, 5)).size(), 2u);
}

TEST(Linalg, SolveIdentityAndSlices) {
  DenseVector v{Rational(1, 2), Rational(-3), Rational(7)};
  auto s = solve(SliceMatrix::identity(3), v);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->particular, v);
  EXPECT_TRUE(s->kernel.empty());

  CochainComplex m0(load_preset(Preset::M0, 6));
  auto x = m0.coboundary_preimage(parse_form("e1^e2"));
  ASSERT_TRUE(x);
  EXPECT_EQ(x->particular, parse_form("e3"));
  EXPECT_TRUE(x->kernel.empty());

  CochainComplex l1(load_preset(Preset::L1, 6));
  EXPECT_FALSE(l1.coboundary_preimage(parse_form("e1^e4")));
  auto y = l1.coboundary_preimage(parse_form("3*e1^e4 + e2^e3"));
  ASSERT_TRUE(y);
  EXPECT_EQ(y->particular, parse_form("e5"));
  auto z = l1.coboundary_preimage(Form());
  ASSERT_TRUE(z);
  EXPECT_TRUE(z->particular.is_zero());
}

TEST(Linalg, CoboundaryPreimageErrors) {
  CochainComplex m0(load_preset(Preset::M0, 6));
  try {
    m0.coboundary_preimage(parse_form("e3"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotACocycle);
  }
  // e1^e6 is closed in m0 but has weight 7 > cutoff 6
  EXPECT_THROW(m0.coboundary_preimage(parse_form("e1^e6")), Error);
}

TEST(Linalg, RankNullityAndSolveProperty) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + rng() % 7, c = 1 + rng() % 7;
    SliceMatrix m = random_matrix(rng, r, c, 40);
    std::size_t rk = rank(m);
    EXPECT_EQ(rk, rref(m).pivots.size());
    auto ker = kernel_basis(m);
    EXPECT_EQ(rk + ker.size(), c);
    for (const auto& v : ker)
      for (const auto& y : m.apply(v)) EXPECT_EQ(y, 0);
    // image vectors are always solvable and reproduce the target exactly
    DenseVector x(c);
    for (auto& xi : x) xi = rat(static_cast<int>(rng() % 7) - 3, static_cast<long>(1 + rng() % 4));
    DenseVector target = m.apply(x);
    auto s = solve(m, target);
    ASSERT_TRUE(s);
    EXPECT_EQ(m.apply(s->particular), target);
  }
}

TEST(Linalg, PreimageOfRandomCoboundary) {
  std::mt19937 rng(11);
  CochainComplex cx(load_preset(Preset::L1, 10));
  for (int trial = 0; trial < 50; ++trial) {
    int q = 1 + static_cast<int>(rng() % 3), k = 3 + static_cast<int>(rng() % 8);
    const auto& basis = cx.slice(q, k).basis;
    if (basis.empty()) continue;
    Form x;
    for (const auto& m : basis) x.add_sorted(m, Rational(static_cast<int>(rng() % 5) - 2));
    Form dx = differential(cx.algebra(), x);
    auto p = cx.coboundary_preimage(dx);
    ASSERT_TRUE(p);
    EXPECT_EQ(differential(cx.algebra(), p->particular), dx);
    // x - particular is closed: it lies in the span of the returned kernel
    EXPECT_TRUE(differential(cx.algebra(), x - p->particular).is_zero());
  }
}
