#include <massey/massey.hpp>

#include <gtest/gtest.h>

#include "table_rows.hpp"
#include "test_util.hpp"

#include <random>

using namespace massey;
using Kind = ClassificationTag::Kind;

namespace {

std::vector<OneClass> ones(std::initializer_list<std::pair<int, int>> ab) {
  std::vector<OneClass> out;
  for (auto [a, b] : ab) out.push_back({rat(a), rat(b)});
  return out;
}

std::vector<Form> forms_of(const std::vector<OneClass>& v) {
  std::vector<Form> out;
  for (const auto& c : v) out.push_back(to_form(c));
  return out;
}

/// value + span(directions) agree as subsets.
bool same_set(const AffineClassSet& a, const AffineClassSet& b) {
  auto inside = [](const AffineClassSet& x, const AffineClassSet& y) {
    if (x.weights != y.weights) return false;
    if (!y.contains(x.value)) return false;
    for (const auto& d : x.directions) {
      DenseVector v = y.value;
      for (std::size_t r = 0; r < v.size(); ++r) v[r] += d[r];
      if (!y.contains(v)) return false;
    }
    return true;
  };
  return inside(a, b) && inside(b, a);
}

// Triple product by the explicit formulas with f, g found by brute-force
// preimages: value (-1)^{p+1} a∧g + (-1)^{p+q} f∧c.
Form triple_value_by_hand(const CochainComplex& cx, const Form& a, const Form& b, const Form& c) {
  const int p = a.degree(), q = b.degree();
  auto f = cx.coboundary_preimage(Rational(p % 2 ? 1 : -1) * wedge(a, b));
  auto g = cx.coboundary_preimage(Rational(q % 2 ? 1 : -1) * wedge(b, c));
  if (!f || !g) throw std::runtime_error("not defined");
  return Rational(p % 2 ? 1 : -1) * wedge(a, g->particular) + Rational((p + q) % 2 ? -1 : 1) * wedge(f->particular, c);
}

}  // namespace

TEST(Solver, L1FourFoldHandSolve) {
  CochainComplex cx(load_preset(Preset::L1, 8));
  SolveOutcome sol = solve_defining_system(cx, parse_product("e2; e1; e1; e1"));
  ASSERT_EQ(sol.kind, SolveOutcome::Kind::Solved);
  ASSERT_EQ(sol.family.free_parameters().size(), 2u);
  // parameters: s on a(2,3), t on a(3,4), both multiples of e^2
  const auto& ps = sol.family.parameters();
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[0].i, 2u);
  EXPECT_EQ(ps[1].i, 3u);
  EXPECT_EQ(ps[0].direction, Form::generator(2));
  ClassPolys cp = detail::class_polys(cx, sol.family.related_cocycle(), 2);
  ASSERT_EQ(cp.size(), 1u);
  ASSERT_EQ(cp.begin()->first, 5);
  Poly expected = Poly(rat(-1, 2)) + Poly::var(ps[0].id, 3) + Poly::var(ps[1].id, -6);
  EXPECT_EQ(cp.at(5)[0], expected);
  EXPECT_EQ(cx.cohomology(2, 5).representatives[0], Form::monomial({1, 4}));
}

TEST(Solver, E2E1E2AlwaysNonzero) {
  CochainComplex cx(load_preset(Preset::M0, 8));
  SolveOutcome sol = solve_defining_system(cx, parse_product("e2; e1; e2"));
  ASSERT_EQ(sol.kind, SolveOutcome::Kind::Solved);
  EXPECT_TRUE(sol.family.free_parameters().empty());
  ConnectionMatrix a = sol.family.instantiate({});
  EXPECT_EQ(related_cocycle(cx.algebra(), a), Form::monomial({2, 3}, 2));
}

TEST(Solver, FourE2MatchesClassification) {
  CochainComplex cx(load_preset(Preset::M0, 10));
  auto cls = parse_product("e2; e2; e2; e2");
  SolveOutcome sol = solve_defining_system(cx, cls);
  EXPECT_EQ(sol.kind, SolveOutcome::Kind::Solved);
  EXPECT_EQ(evaluate_product(cx, cls).status, MasseyStatus::TrivialWitness);
  ClassificationTag t = classify_trivial_ones(ones({{0, 1}, {0, 1}, {0, 1}, {0, 1}}));
  EXPECT_EQ(t.kind, Kind::A);
  EXPECT_EQ(t.x, 0);
  EXPECT_EQ(t.y, 1);
}

TEST(Solver, ObstructionIsReported) {
  CochainComplex cx(load_preset(Preset::M0, 10));
  SolveOutcome sol = solve_defining_system(cx, parse_product("e2; e1; e2; e1"));
  ASSERT_EQ(sol.kind, SolveOutcome::Kind::Obstructed);
  ASSERT_TRUE(sol.obstruction.has_value());
  EXPECT_EQ(sol.obstruction->i, 1u);
  EXPECT_EQ(sol.obstruction->j, 3u);
  EXPECT_EQ(sol.obstruction->degree, 2);
}

TEST(Solver, Errors) {
  CochainComplex cx(load_preset(Preset::M0, 6));
  EXPECT_THROW(solve_defining_system(cx, parse_product("e2")), Error);
  EXPECT_THROW(solve_defining_system(cx, parse_product("e3; e1")), Error);
  EXPECT_NO_THROW(solve_defining_system(cx, parse_product("e2; e1; e1; e2")));
  EXPECT_THROW(solve_defining_system(cx, parse_product("e2; e1; e1; e2; e1")), Error);
  SolveOptions ungraded;
  ungraded.graded = false;
  EXPECT_NO_THROW(solve_defining_system(cx, parse_product("e2+e1; e1; e2"), ungraded));
  EXPECT_THROW(solve_defining_system(cx, parse_product("e2+e1; e1; e2")), Error);
}

TEST(Solver, WitnessesVerify) {
  CochainComplex cx(load_preset(Preset::L1, 8));
  MasseyResult r = evaluate_product(cx, parse_product("e2; e1; e1; e1"));
  ASSERT_EQ(r.status, MasseyStatus::TrivialWitness);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_FALSE(defining_system_problem(cx.algebra(), *r.witness).has_value());
  EXPECT_TRUE(cx.is_exact(related_cocycle(cx.algebra(), *r.witness)));
}

TEST(Solver, ClassRepresentativesGiveTheFullKernelValueSet) {
  for (auto [p, text] : {std::pair{Preset::L1, "e2; e1; e1; e1"}, std::pair{Preset::L1, "e1; e1; e2; e1"},
                         std::pair{Preset::M0, "e2; e1; e1; e1; e2"}, std::pair{Preset::M0, "e1; e1; e1; e2"},
                         std::pair{Preset::L1, "e1; e2; e1"}}) {
    CochainComplex cx(load_preset(p, 9));
    auto cls = parse_product(text);
    SolveOptions a, b;
    b.basis = ParameterBasis::Cocycles;
    SolveOutcome sa = solve_defining_system(cx, cls, a), sb = solve_defining_system(cx, cls, b);
    ASSERT_EQ(sa.kind, sb.kind) << text;
    if (sa.kind != SolveOutcome::Kind::Solved) continue;
    int q = 2;
    auto ca = detail::class_polys(cx, sa.family.related_cocycle(), q);
    auto cb = detail::class_polys(cx, sb.family.related_cocycle(), q);
    ASSERT_TRUE(detail::all_affine(ca) && detail::all_affine(cb)) << text;
    EXPECT_TRUE(same_set(detail::affine_set(cx, ca, q), detail::affine_set(cx, cb, q))) << text;
  }
}

TEST(Solver, ProperWindowsAreTrivialInsideADefiningSystem) {
  std::mt19937 rng(21);
  for (auto [p, text] : {std::pair{Preset::L1, "e2; e1; e1; e1"}, std::pair{Preset::M0, "e2; e1; e1; e1; e2"},
                         std::pair{Preset::M0, "e1; e1; e1; e1; e1"}}) {
    CochainComplex cx(load_preset(p, 9));
    const GradedLieAlgebra& g = cx.algebra();
    SolveOutcome sol = solve_defining_system(cx, parse_product(text));
    ASSERT_EQ(sol.kind, SolveOutcome::Kind::Solved);
    std::map<int, Rational> at;
    for (int v : sol.family.free_parameters()) at[v] = rat(static_cast<long>(rng() % 7) - 3);
    ConnectionMatrix a = sol.family.instantiate(at);
    const std::size_t n = a.arity();
    for (std::size_t len = 2; len < n; ++len)
      for (std::size_t i = 1; i + len - 1 <= n; ++i) {
        const std::size_t j = i + len - 1;
        ConnectionMatrix w(len);
        for (std::size_t r = i; r <= j; ++r)
          for (std::size_t s = r; s <= j; ++s)
            if (!(r == i && s == j)) w.a(r - i + 1, s - i + 1) = a.a(r, s);
        ASSERT_FALSE(defining_system_problem(g, w).has_value());
        EXPECT_EQ(related_cocycle(g, w), differential(g, a.a(i, j)));
      }
  }
}

TEST(Triple, L1E2E2E1IsASingleClass) {
  CochainComplex cx(load_preset(Preset::L1, 8));
  MasseyResult r = triple_product(cx, Form::generator(2), Form::generator(2), Form::generator(1));
  ASSERT_EQ(r.status, MasseyStatus::ValueSet);
  EXPECT_EQ(r.values[0].indeterminacy_rank(), 0u);
  // f = 0 (no closed weight-4 one-forms), d g = e^2∧e^1 gives g = -e^3 + closed,
  // so the value is -e^2∧e^3; [e^2∧e^3] = -3[e^1∧e^4] since d e^5 = 3e^1∧e^4 + e^2∧e^3.
  EXPECT_EQ(differential(cx.algebra(), Form::generator(5)), Form::monomial({1, 4}, 3) + Form::monomial({2, 3}));
  Form by_hand = triple_value_by_hand(cx, Form::generator(2), Form::generator(2), Form::generator(1));
  EXPECT_EQ(by_hand, Form::monomial({2, 3}, -1));
  EXPECT_TRUE(r.contains_class(cx, by_hand));
  EXPECT_TRUE(r.contains_class(cx, Form::monomial({1, 4}, 3)));
  EXPECT_FALSE(r.contains_class(cx, Form::monomial({1, 4}, -3)));
  EXPECT_FALSE(r.contains_zero());
}

TEST(Triple, OnesInM0AreZero) {
  CochainComplex cx(load_preset(Preset::M0, 8));
  MasseyResult r = triple_product(cx, Form::generator(1), Form::generator(1), Form::generator(1));
  ASSERT_EQ(r.status, MasseyStatus::ValueSet);
  EXPECT_TRUE(r.contains_zero());
  EXPECT_EQ(r.values[0].dimension(), 0u);
  ASSERT_TRUE(r.witness.has_value());
}

TEST(Triple, NotDefinedWhenAPairProductIsNonzero) {
  CochainComplex cx(load_preset(Preset::M0, 10));
  // [e^2][omega(e^3∧e^4)] = [omega(e^2∧e^3∧e^4)] != 0
  ASSERT_EQ(wedge(Form::generator(2), mzero::omega({3})), mzero::omega({2, 3}));
  MasseyResult r = triple_product(cx, Form::generator(2), mzero::omega({3}), Form::generator(1));
  EXPECT_EQ(r.status, MasseyStatus::NotDefined);
  ASSERT_TRUE(r.obstruction.has_value());
  EXPECT_EQ(r.obstruction->i, 1u);
  EXPECT_EQ(r.obstruction->j, 2u);
  EXPECT_EQ(triple_product(cx, Form::generator(1), mzero::omega({3}), Form::generator(2)).status, MasseyStatus::NotDefined);
}

TEST(Triple, CriterionOverTheFullGrid) {
  CochainComplex cx(gr_m0(6));
  ASSERT_EQ(cx.flavor(), AlgebraFlavor::GrM0);
  std::vector<OneClass> grid;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      if (a != 0 || b != 0) grid.push_back({rat(a), rat(b)});
  std::size_t agree = 0, total = 0;
  for (const auto& x : grid)
    for (const auto& y : grid)
      for (const auto& z : grid) {
        MasseyResult r = triple_product(cx, to_form(x), to_form(y), to_form(z));
        ++total;
        if (r.status == MasseyStatus::ValueSet && r.contains_zero() == (triple_criterion(x, y, z) == 0)) ++agree;
      }
  EXPECT_EQ(agree, total);
  EXPECT_EQ(total, 24u * 24u * 24u);
}

TEST(Triple, ByHandAgreesWithTheSolver) {
  CochainComplex cx(load_preset(Preset::M0, 9));
  for (const char* text : {"e2; e1; e2", "e1; e2; e1", "e1; e1; e2", "e2; e2; e1"}) {
    auto cls = parse_product(text);
    MasseyResult r = triple_product(cx, cls[0], cls[1], cls[2]);
    ASSERT_EQ(r.status, MasseyStatus::ValueSet) << text;
    EXPECT_TRUE(r.contains_class(cx, triple_value_by_hand(cx, cls[0], cls[1], cls[2]))) << text;
  }
}

TEST(Evaluate, E2E1E2IsTwoOmega) {
  CochainComplex cx(load_preset(Preset::M0, 8));
  MasseyResult r = evaluate_product(cx, parse_product("e2; e1; e2"));
  EXPECT_EQ(r.status, MasseyStatus::NonTrivialCertified);
  EXPECT_TRUE(r.contains_class(cx, 2 * mzero::omega({2})));
}

TEST(Evaluate, L1ValueSetContainsZeroAndG2Minus) {
  CochainComplex cx(load_preset(Preset::L1, 8));
  MasseyResult r = evaluate_product(cx, parse_product("e2; e1; e1; e1"));
  ASSERT_EQ(r.status, MasseyStatus::TrivialWitness);
  EXPECT_TRUE(r.contains_zero());
  EXPECT_TRUE(r.contains_class(cx, Form::monomial({1, 4})));
  EXPECT_EQ(r.values[0].indeterminacy_rank(), 1u);
}

TEST(Evaluate, TwoE2FamilySignAlternates) {
  for (int k = 2; k <= 4; ++k) {
    CochainComplex cx(load_preset(Preset::M0, 2 * k + 1));
    std::vector<Form> cls{Form::generator(2)};
    for (int i = 0; i < 2 * k - 3; ++i) cls.push_back(Form::generator(1));
    cls.push_back(Form::generator(2));
    MasseyResult r = evaluate_product(cx, cls);
    EXPECT_EQ(r.status, MasseyStatus::NonTrivialCertified);
    const Rational sign = k % 2 ? -2 : 2;
    EXPECT_TRUE(r.contains_class(cx, sign * mzero::omega({k})));
    EXPECT_EQ(r.contains_class(cx, 2 * mzero::omega({k})), k % 2 == 0);
    EXPECT_EQ(r.values[0].indeterminacy_rank(), 0u);
  }
}

TEST(Evaluate, ExtendedDWindowsHaveLeadingTerm) {
  CochainComplex cx(gr_m0(6));
  ASSERT_EQ(cx.cohomology(2, 5).representatives.size(), 1u);
  ASSERT_EQ(cx.cohomology(2, 5).representatives[0], mzero::omega({3}));
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) {
      for (auto cls : {ones({{a, 1}, {1, 0}, {1, 0}, {b, 1}, {1, 0}}), ones({{1, 0}, {a, 1}, {1, 0}, {1, 0}, {b, 1}})}) {
        MasseyResult r = evaluate_product(cx, forms_of(cls));
        ASSERT_EQ(r.status, MasseyStatus::NonTrivialCertified);
        EXPECT_TRUE(r.contains_class(cx, 3 * mzero::omega({3})));
        EXPECT_EQ(classify_trivial_ones(cls).kind, Kind::NotTrivial);
      }
    }
}

TEST(Certificate, MainShapes) {
  CochainComplex cx(load_preset(Preset::M0, 18));
  for (auto [i1, tail] : std::vector<std::pair<int, std::vector<int>>>{{2, {3}}, {3, {4}}, {3, {4, 5}}, {4, {5}}}) {
    std::vector<Form> cls{Form::generator(2)};
    for (int i = 0; i < i1 - 2; ++i) cls.push_back(Form::generator(1));
    cls.push_back(mzero::omega(tail));
    Certificate c = leading_coefficient_certificate(cx, cls, 20, 5);
    EXPECT_TRUE(c.passed);
    ASSERT_TRUE(c.coefficient.has_value());
    EXPECT_EQ(*c.coefficient, Rational(i1 % 2 ? -1 : 1));
    EXPECT_EQ(c.sample_values.size(), 20u);
    EXPECT_EQ(evaluate_product(cx, cls).status, MasseyStatus::NonTrivialCertified);
  }
}

TEST(Certificate, InapplicableShapes) {
  CochainComplex cx(load_preset(Preset::M0, 14));
  EXPECT_THROW(leading_coefficient_certificate(cx, {Form::generator(1), Form::generator(1), mzero::omega({4})}, 5, 1), Error);
  EXPECT_THROW(leading_coefficient_certificate(cx, {Form::generator(2), Form::generator(1), Form::generator(1), mzero::omega({3})}, 5, 1),
               Error);
  CochainComplex l1(load_preset(Preset::L1, 14));
  EXPECT_THROW(leading_coefficient_certificate(l1, {Form::generator(2), Form::monomial({1, 4})}, 5, 1), Error);
}

TEST(Classify, TableExamples) {
  auto t = classify_trivial_ones(ones({{1, 0}, {1, 0}, {1, 0}, {1, 0}}));
  EXPECT_EQ(t.kind, Kind::A);
  EXPECT_EQ(t.x, 1);
  EXPECT_EQ(t.y, 0);
  t = classify_trivial_ones(ones({{1, 1}, {2, 1}, {3, 1}}));
  EXPECT_EQ(t.kind, Kind::B);
  EXPECT_EQ(t.x, 1);
  EXPECT_EQ(t.y, 0);
  t = classify_trivial_ones(ones({{0, 1}, {1, 0}, {1, 0}, {0, 1}}));
  EXPECT_EQ(t.kind, Kind::D);
  EXPECT_EQ(t.l, 1);
  EXPECT_EQ(t.x, 0);
  EXPECT_EQ(t.y, 0);
  EXPECT_EQ(classify_trivial_ones(ones({{0, 1}, {1, 0}, {0, 1}})).kind, Kind::NotTrivial);
  t = classify_trivial_ones(ones({{1, 0}, {1, 1}, {1, 0}, {1, 0}}));
  EXPECT_EQ(t.kind, Kind::C);
  EXPECT_EQ(t.l, 1);
  EXPECT_EQ(t.x, 1);
  EXPECT_EQ(to_string(t), "C^5(l=1, alpha=1)");
}

TEST(Classify, Errors) {
  EXPECT_THROW(classify_trivial_ones(ones({{1, 0}, {0, 0}, {1, 0}})), Error);
  EXPECT_THROW(classify_trivial_ones(ones({{1, 0}, {1, 0}})), Error);
  EXPECT_THROW(one_class_of(Form::generator(3)), Error);
}

TEST(Classify, ExtensionsOfDAreNotDefinedOrNotTrivial) {
  EXPECT_EQ(classify_trivial_ones(ones({{0, 1}, {1, 0}, {1, 0}, {0, 1}, {1, 0}})).kind, Kind::NotTrivial);
  EXPECT_EQ(classify_trivial_ones(ones({{0, 1}, {1, 0}, {1, 0}, {0, 1}, {0, 1}})).kind, Kind::NotDefined);
}

TEST(Classify, AgreesWithTheSolverOnTripleGrid) {
  CochainComplex cx(gr_m0(6));
  std::vector<OneClass> grid;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      if (a != 0 || b != 0) grid.push_back({rat(a), rat(b)});
  for (const auto& x : grid)
    for (const auto& y : grid)
      for (const auto& z : grid) {
        ClassificationTag t = classify_trivial_ones({x, y, z});
        MasseyResult r = evaluate_product(cx, forms_of({x, y, z}));
        ASSERT_NE(t.kind, Kind::Unclassified);
        ASSERT_EQ(t.trivial(), r.status == MasseyStatus::TrivialWitness);
      }
}

TEST(Classify, TableRowsAreTrivialForTheSolver) {
  CochainComplex cx(gr_m0(7));
  std::vector<std::vector<OneClass>> rows = table_row_instances(4);
  for (const auto& r : table_row_instances(5)) rows.push_back(r);
  for (const auto& row : rows) {
    ClassificationTag t = classify_trivial_ones(row);
    ASSERT_TRUE(t.kind == Kind::A || t.kind == Kind::B || t.kind == Kind::C || t.kind == Kind::D);
    EXPECT_EQ(evaluate_product(cx, forms_of(row)).status, MasseyStatus::TrivialWitness);
  }
}

TEST(Classify, ScalingInvariance) {
  std::mt19937 rng(31);
  const std::vector<long> scales{-3, -2, -1, 1, 2, 5};
  for (int t = 0; t < 300; ++t) {
    std::size_t n = 3 + t % 3;
    std::vector<OneClass> v, w;
    for (std::size_t i = 0; i < n; ++i) {
      OneClass c{rat(static_cast<long>(rng() % 5) - 2), rat(static_cast<long>(rng() % 3) - 1)};
      if (c.alpha == 0 && c.beta == 0) c.alpha = 1;
      Rational x = rat(scales[rng() % scales.size()], static_cast<long>(1 + rng() % 3));
      v.push_back(c);
      w.push_back({c.alpha * x, c.beta * x});
    }
    ClassificationTag a = classify_trivial_ones(v), b = classify_trivial_ones(w);
    EXPECT_EQ(a.trivial(), b.trivial());
    EXPECT_EQ(a, b);
  }
}

TEST(Parse, ProductMiniLanguage) {
  auto cls = parse_product("e2; e1 ; 1/2*e1^e4 - e2^e3");
  ASSERT_EQ(cls.size(), 3u);
  EXPECT_EQ(cls[2], rat(1, 2) * Form::monomial({1, 4}) - Form::monomial({2, 3}));
  EXPECT_THROW(parse_product("e2;;e1"), Error);
  try {
    parse_product("e2; e1; 3*x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("class 3"), std::string::npos);
  }
}
