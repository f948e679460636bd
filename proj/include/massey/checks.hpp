#pragma once

// Randomized and exhaustive verification suites shared by the command line
// front end and the acceptance runner. Every comparison is exact.

#include <massey/massey.hpp>

#include <random>
#include <string>
#include <vector>

namespace massey {

struct CheckItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckReport {
  std::string name;
  std::vector<CheckItem> items;
  bool all_passed() const {
    for (const auto& i : items)
      if (!i.passed) return false;
    return true;
  }
};

inline CheckReport to_check_report(const DimensionReport& r) {
  CheckReport out{r.name, {}};
  for (const auto& row : r.rows)
    out.items.push_back({"H^" + std::to_string(row.q) + "_" + std::to_string(row.k), row.match(),
                         std::to_string(row.computed) + " vs " + std::to_string(row.expected)});
  return out;
}

/// Random form in Λ*(e^2, ..., e^max_index) of weight <= max_weight (index = weight).
inline Form random_tail_form(std::mt19937_64& rng, int max_index, int max_weight) {
  Form f;
  const int terms = 1 + static_cast<int>(rng() % 3);
  for (int t = 0; t < terms; ++t) {
    const int q = 1 + static_cast<int>(rng() % 3);
    std::vector<int> idx;
    for (int r = 0; r < q; ++r) idx.push_back(2 + static_cast<int>(rng() % static_cast<unsigned>(max_index - 1)));
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) continue;
    if (mzero::index_weight(idx) > max_weight) continue;
    const long num = static_cast<long>(rng() % 9) - 4;
    f += Form::monomial(idx, Rational(num == 0 ? 1 : num) / static_cast<long>(1 + rng() % 3));
  }
  return f;
}

/// dξ = e^1∧D1ξ, dD-1ξ = e^1∧ξ and D1 D-1 = id on `count` nonzero tail forms.
inline CheckReport check_d_operators(int count, int max_weight, std::uint64_t seed) {
  auto m0 = load_preset(Preset::M0, max_weight + 1);
  std::mt19937_64 rng(seed);
  const Form e1 = Form::generator(1);
  int bad[3] = {0, 0, 0};
  for (int t = 0; t < count;) {
    Form xi = random_tail_form(rng, std::min(max_weight, 12), max_weight);
    if (xi.is_zero()) continue;
    ++t;
    Form up = mzero::Dm1(xi);
    bad[0] += differential(m0, xi) != wedge(e1, mzero::D1(xi));
    bad[1] += differential(m0, up) != wedge(e1, xi);
    bad[2] += mzero::D1(up) != xi;
  }
  CheckReport r{"identities/d-operators", {}};
  const char* names[3] = {"d xi = e1^D1 xi", "d D-1 xi = e1^xi", "D1 D-1 = id"};
  for (int i = 0; i < 3; ++i)
    r.items.push_back({names[i], bad[i] == 0, std::to_string(count - bad[i]) + "/" + std::to_string(count)});
  return r;
}

/// Random strictly upper triangular matrix of 1- and 2-forms of weight <= max_weight.
inline ConnectionMatrix random_connection(std::mt19937_64& rng, const CochainComplex& cx, std::size_t n, int max_weight) {
  ConnectionMatrix a(n);
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = r + 1; c < a.size(); ++c) {
      const int q = 1 + static_cast<int>(rng() % 2);
      const int k = q + static_cast<int>(rng() % static_cast<unsigned>(max_weight - q + 1));
      for (const auto& m : cx.slice(q, k).basis) {
        const long v = static_cast<long>(rng() % 7) - 3;
        if (v != 0) a.at(r, c).add_sorted(m, Rational(v) / static_cast<long>(1 + rng() % 2));
      }
    }
  return a;
}

/// Formal connection: a solved defining system for random homogeneous
/// 1-classes with random parameters and a random corner.
inline std::optional<ConnectionMatrix> random_formal_connection(std::mt19937_64& rng, const CochainComplex& cx, std::size_t n) {
  std::vector<Form> classes;
  for (std::size_t i = 0; i < n; ++i) {
    const int gen = 1 + static_cast<int>(rng() % 2);
    const long c = static_cast<long>(rng() % 4) + 1;
    classes.push_back(Form::generator(gen, rng() % 2 ? Rational(c) : Rational(-c)));
  }
  int w = 0;
  for (const auto& c : classes) w += weight(cx.algebra(), c);
  if (w > cx.algebra().cutoff()) return std::nullopt;
  SolveOptions opt;
  opt.basis = ParameterBasis::Cocycles;
  for (const auto& sol : solve_defining_branches(cx, classes, opt)) {
    if (sol.kind != SolveOutcome::Kind::Solved) continue;
    std::map<int, Rational> at;
    for (int id : sol.family.free_parameters()) at[id] = Rational(static_cast<long>(rng() % 7) - 3);
    ConnectionMatrix a = sol.family.instantiate(at);
    for (const auto& m : cx.slice(1, w).basis) a.a(1, n).add_sorted(m, Rational(static_cast<long>(rng() % 5) - 2));
    return a;
  }
  return std::nullopt;
}

/// Bianchi, involution, Leibniz and corner closedness on `count` random
/// matrices per preset (n <= 4, weight <= 8).
inline CheckReport check_maurer_cartan(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int total = 0, bad[4] = {0, 0, 0, 0}, formal = 0;
  for (auto p : {Preset::M0, Preset::L1}) {
    CochainComplex cx(load_preset(p, 8));
    const GradedLieAlgebra& g = cx.algebra();
    for (int t = 0; t < count; ++t, ++total) {
      const std::size_t n = 1 + static_cast<std::size_t>(t % 4);
      ConnectionMatrix a = random_connection(rng, cx, n, 8), b = random_connection(rng, cx, n, 8);
      ConnectionMatrix mu = mc_residual(g, a), zero(n);
      bad[0] += differential(g, mu) != bar(mu) * a + a * mu;
      bad[1] += bar(bar(a)) != a || bar(a * b) + bar(a) * bar(b) != zero ||
                bar(differential(g, a)) + differential(g, bar(a)) != zero;
      bad[2] += differential(g, a * b) != differential(g, a) * b - bar(a) * differential(g, b);
    }
    for (int t = 0, found = 0; found < count && t < 50 * count; ++t) {
      auto a = random_formal_connection(rng, cx, 2 + static_cast<std::size_t>(t % 3));
      if (!a) continue;
      ++found;
      ++formal;
      FormalCheck check = is_formal_connection(g, *a);
      bad[3] += !check.formal || !differential(g, check.tau).is_zero();
    }
  }
  CheckReport r{"identities/maurer-cartan", {}};
  r.items.push_back({"Bianchi d mu = bar(mu) A + A mu", bad[0] == 0, std::to_string(total - bad[0]) + "/" + std::to_string(total)});
  r.items.push_back({"involution laws", bad[1] == 0, std::to_string(total - bad[1]) + "/" + std::to_string(total)});
  r.items.push_back({"generalized Leibniz", bad[2] == 0, std::to_string(total - bad[2]) + "/" + std::to_string(total)});
  r.items.push_back({"corner closed on formal connections", bad[3] == 0 && formal >= 2 * count,
                     std::to_string(formal - bad[3]) + "/" + std::to_string(formal)});
  return r;
}

inline std::size_t first_betti(const GradedLieAlgebra& g) {
  CochainComplex cx(g);
  std::size_t h = 0;
  for (int k = 1; k <= g.cutoff(); ++k) h += cx.betti(1, k);
  return h;
}

/// m0_normal_form(gr L1) for cutoffs 3..max_cutoff, and dim H^1(g) =
/// dim H^1(gr g) = dim g/[g,g] for both presets.
inline CheckReport check_gr(int max_cutoff) {
  CheckReport r{"gr", {}};
  for (int w = 3; w <= max_cutoff; ++w) {
    auto l1 = load_preset(Preset::L1, w);
    auto gr = associated_graded(l1);
    NormalFormResult nf = m0_normal_form(gr);
    r.items.push_back({"gr(L1) ~ m0, W=" + std::to_string(w), nf.success, nf.success ? "" : nf.reason});
    for (auto p : {Preset::M0, Preset::L1}) {
      auto g = load_preset(p, w);
      std::size_t ab = g.dimension() - central_series(g).terms.at(1).size();
      std::size_t h = first_betti(g), hg = first_betti(associated_graded(g));
      r.items.push_back({std::string("H^1 ") + (p == Preset::M0 ? "m0" : "L1") + ", W=" + std::to_string(w),
                         h == ab && hg == ab,
                         std::to_string(h) + ", " + std::to_string(hg) + ", " + std::to_string(ab)});
    }
  }
  return r;
}

}  // namespace massey
