#include <massey/cohomology.hpp>

#include <gtest/gtest.h>

#include "test_util.hpp"

#include <random>
#include <thread>

using namespace massey;

namespace {

// partitions of k into exactly q positive parts, by brute-force enumeration
std::uint64_t brute_partitions(int q, int k) {
  std::uint64_t n = 0;
  auto rec = [&](auto&& self, int max_part, int left, int parts) -> void {
    if (parts == 0) {
      n += left == 0;
      return;
    }
    for (int v = std::min(max_part, left); v >= 1; --v) self(self, v, left - v, parts - 1);
  };
  rec(rec, k, k, q);
  return n;
}

}  // namespace

TEST(Cohomology, BettiExamples) {
  auto l1 = load_preset(Preset::L1, 16);
  EXPECT_EQ(betti(l1, 2, 5), 1u);
  EXPECT_EQ(betti(l1, 2, 6), 0u);
  EXPECT_EQ(betti(l1, 2, 7), 1u);
  EXPECT_EQ(betti(l1, 3, 12), 1u);
  EXPECT_EQ(betti(l1, 3, 15), 1u);
  auto m0 = load_preset(Preset::M0, 6);
  EXPECT_EQ(betti(m0, 1, 1), 1u);
  EXPECT_EQ(betti(m0, 1, 2), 1u);
  EXPECT_EQ(betti(m0, 1, 3), 0u);
  EXPECT_EQ(betti(m0, 0, 0), 1u);
  EXPECT_THROW(betti(m0, 2, 7), Error);
}

TEST(Cohomology, RepresentativeExamples) {
  CochainComplex l1(load_preset(Preset::L1, 8));
  EXPECT_EQ(l1.cohomology(2, 5).representatives, std::vector<Form>{parse_form("e1^e4")});
  EXPECT_EQ(l1.cohomology(2, 7).representatives, std::vector<Form>{parse_form("e2^e5 - 3*e3^e4")});
  CochainComplex m0(load_preset(Preset::M0, 8));
  EXPECT_EQ(m0.cohomology(2, 5).representatives, std::vector<Form>{parse_form("e2^e3")});
  EXPECT_EQ(m0.cohomology(1, 1).representatives, std::vector<Form>{parse_form("e1")});
  EXPECT_EQ(m0.cohomology(2, 7).representatives, std::vector<Form>{mzero::omega({3})});
}

TEST(Cohomology, ClassCoordinateExamples) {
  CochainComplex l1(load_preset(Preset::L1, 8));
  auto c = l1.class_coordinates(parse_form("e2^e3"), 2, 5);
  EXPECT_EQ(c.coords, DenseVector{Rational(-3)});
  EXPECT_TRUE(l1.class_coordinates(differential(l1.algebra(), parse_form("e5")), 2, 5).is_zero());
  EXPECT_EQ(l1.class_coordinates(parse_form("e2^e5 - 3*e3^e4"), 2, 7).coords, DenseVector{Rational(1)});
  try {
    l1.class_coordinates(parse_form("e2^e4"), 2, 6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotACocycle);
  }
}

TEST(Cohomology, PartitionCounts) {
  for (int k = 1; k <= 10; ++k) EXPECT_EQ(partition_count(1, k), 1u);
  EXPECT_EQ(partition_count(2, 4), 2u);
  EXPECT_EQ(partition_count(3, 12) - partition_count(3, 11), 2u);
  EXPECT_EQ(partition_count(0, 0), 1u);
  for (int q = 0; q <= 6; ++q)
    for (int k = 0; k <= 30; ++k) EXPECT_EQ(partition_count(q, k), brute_partitions(q, k)) << q << " " << k;
}

TEST(Cohomology, Goncharova) {
  auto small = check_goncharova(2, 8);
  EXPECT_TRUE(small.all_match());
  for (const auto& r : small.rows) {
    bool nonzero = (r.q == 1 && (r.k == 1 || r.k == 2)) || (r.q == 2 && (r.k == 5 || r.k == 7));
    EXPECT_EQ(r.computed, nonzero ? 1 : 0) << r.q << " " << r.k;
  }
  auto q3 = check_goncharova(3, 16);
  EXPECT_TRUE(q3.all_match());
  for (const auto& r : q3.rows) {
    if (r.q == 3) EXPECT_EQ(r.computed, (r.k == 12 || r.k == 15) ? 1 : 0) << r.k;
  }
  EXPECT_THROW(check_goncharova(3, 14), Error);
}

TEST(Cohomology, M0Dimensions) {
  auto rep = check_m0_dimensions(3, 18);
  EXPECT_TRUE(rep.all_match()) << to_csv(rep);
  CochainComplex m0(load_preset(Preset::M0, 18));
  for (int w = 5; w <= 9; ++w) EXPECT_EQ(m0.betti(2, w), w % 2 ? 1u : 0u) << w;
  EXPECT_EQ(m0.betti(3, 18), 2u);
  for (int w = 1; w <= 12; ++w) EXPECT_EQ(m0.betti(1, w), w <= 2 ? 1u : 0u);
}

TEST(Cohomology, M0DimensionsDegreeFour) {
  EXPECT_TRUE(check_m0_dimensions(4, 20).all_match());
}

TEST(Cohomology, TruncationStability) {
  for (Preset p : {Preset::M0, Preset::L1})
    for (int k = 1; k <= 14; ++k) {
      CochainComplex a(load_preset(p, std::max(k, 2))), b(load_preset(p, k + 3));
      for (int q = 0; q <= 4; ++q) EXPECT_EQ(a.betti(q, k), b.betti(q, k)) << q << " " << k;
    }
}

TEST(Cohomology, SliceInvariants) {
  for (Preset p : {Preset::M0, Preset::L1}) {
    CochainComplex cx(load_preset(p, 12));
    for (int q = 0; q <= 4; ++q)
      for (int k = 0; k <= 12; ++k) {
        const auto& h = cx.cohomology(q, k);
        EXPECT_EQ(h.dimension(), h.cocycles.size() - h.coboundaries.size());
        EXPECT_EQ(h.dimension(), cx.betti(q, k));
        for (const auto& r : h.representatives) EXPECT_TRUE(differential(cx.algebra(), r).is_zero());
        for (std::size_t i = 0; i < h.representatives.size(); ++i) {
          auto c = cx.class_coordinates(h.representatives[i], q, k);
          for (std::size_t j = 0; j < c.coords.size(); ++j) EXPECT_EQ(c.coords[j], i == j ? 1 : 0);
        }
        for (const auto& b : h.coboundaries) EXPECT_TRUE(cx.class_coordinates(b, q, k).is_zero());
      }
  }
}

TEST(Cohomology, OmegaCocyclesAreIndependentClasses) {
  CochainComplex cx(load_preset(Preset::M0, 22));
  for (int q = 2; q <= 4; ++q)
    for (int w = 1; w <= 22; ++w) {
      auto idx = mzero::omega_indices(q, w);
      if (idx.empty()) continue;
      const auto& h = cx.cohomology(q, w);
      ASSERT_EQ(h.representatives.size(), idx.size()) << q << " " << w;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        EXPECT_EQ(h.representatives[i], mzero::omega(idx[i]));
        EXPECT_FALSE(cx.class_coordinates(mzero::omega(idx[i]), q, w).is_zero());
      }
    }
}

TEST(Cohomology, M0MultiplicationRules) {
  CochainComplex cx(load_preset(Preset::M0, 24));
  const Form e1 = Form::generator(1), e2 = Form::generator(2);
  for (int q = 2; q <= 3; ++q)
    for (int w = 5; w <= 20; ++w)
      for (const auto& idx : mzero::omega_indices(q, w)) {
        Form o = mzero::omega(idx);
        auto zero = cx.class_coordinates(wedge(e1, o), q + 1, w + 1);
        EXPECT_TRUE(zero.is_zero());
        if (idx.front() > 2 && w + 2 <= 24) {
          std::vector<int> with2{2};
          with2.insert(with2.end(), idx.begin(), idx.end());
          Form lhs = wedge(e2, o), rhs = mzero::omega(with2);
          EXPECT_TRUE(cx.class_coordinates(lhs - rhs, q + 1, w + 2).is_zero());
        }
      }
}

TEST(Cohomology, GrM0UsesOmegaRepresentatives) {
  CochainComplex gr(associated_graded(load_preset(Preset::M0, 10)));
  EXPECT_EQ(gr.flavor(), AlgebraFlavor::GrM0);
  EXPECT_EQ(gr.cohomology(1, 1).representatives, (std::vector<Form>{parse_form("e1"), parse_form("e2")}));
  EXPECT_EQ(gr.cohomology(2, 3).representatives, std::vector<Form>{parse_form("e2^e3")});
  for (int k = 2; k <= 9; ++k) EXPECT_EQ(gr.betti(1, k), 0u);
}

TEST(Cohomology, CoboundaryPreimageRandom) {
  std::mt19937 rng(29);
  CochainComplex cx(load_preset(Preset::M0, 12));
  for (int t = 0; t < 40; ++t) {
    int q = 1 + static_cast<int>(rng() % 3), k = 4 + static_cast<int>(rng() % 8);
    Form x;
    for (const auto& m : cx.slice(q, k).basis) x.add_sorted(m, Rational(static_cast<int>(rng() % 5) - 2));
    Form dx = differential(cx.algebra(), x);
    EXPECT_TRUE(cx.is_exact(dx));
    if (!dx.is_zero()) {
      auto c = cx.class_coordinates(dx, q + 1, k);
      EXPECT_TRUE(c.is_zero());
    }
  }
}

TEST(Cohomology, ConcurrentQueries) {
  CochainComplex cx(load_preset(Preset::L1, 15));
  std::vector<std::size_t> got(16);
  std::vector<std::thread> threads;
  for (int k = 0; k < 16; ++k) threads.emplace_back([&, k] { got[static_cast<std::size_t>(k)] = cx.betti(2, k); });
  for (auto& t : threads) t.join();
  for (int k = 0; k < 16; ++k) EXPECT_EQ(got[static_cast<std::size_t>(k)], (k == 5 || k == 7) ? 1u : 0u);
}

TEST(Cohomology, CsvReport) {
  auto rep = check_goncharova(1, 2);
  EXPECT_EQ(to_csv(rep), "q,k,computed,expected,match\n1,1,1,1,true\n1,2,1,1,true\n");
}
