#pragma once

// Massey products through defining systems: a parametrized solver, affine
// value sets, triple products, evaluation with witnesses and certificates,
// and the classification of trivial products of 1-classes over m0.

#include <massey/cohomology.hpp>
#include <massey/connection.hpp>
#include <massey/poly.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace massey {

enum class ParameterBasis { Classes, Cocycles };

struct SolveOptions {
  bool graded = true;
  ParameterBasis basis = ParameterBasis::Classes;
  std::size_t budget = 4096;  // grid points tried per nonlinear obstruction
  int grid_radius = 2;
  std::size_t max_branches = 64;
};

/// Class coordinates, as polynomials in the free parameters, split by weight.
using ClassPolys = std::map<int, std::vector<Poly>>;

struct Parameter {
  int id = 0;
  std::size_t i = 0, j = 0;
  int weight = 0;
  Form direction;
};

struct Obstruction {
  std::size_t i = 0, j = 0;
  int degree = 0;
  ClassPolys classes;
};

/// Entries a(i, j), (i, j) != (1, n), with polynomial coefficients.
class DefiningFamily {
 public:
  DefiningFamily() = default;
  explicit DefiningFamily(std::vector<Form> classes) : classes_(std::move(classes)) {
    for (std::size_t r = 1; r <= arity(); ++r) entries_[{r, r}] = PForm(classes_[r - 1]);
  }

  std::size_t arity() const { return classes_.size(); }
  const std::vector<Form>& classes() const { return classes_; }
  const PForm& entry(std::size_t i, std::size_t j) const {
    static const PForm zero;
    auto it = entries_.find({i, j});
    return it == entries_.end() ? zero : it->second;
  }
  void set_entry(std::size_t i, std::size_t j, PForm f) { entries_[{i, j}] = std::move(f); }

  std::vector<Parameter>& parameters() { return parameters_; }
  const std::vector<Parameter>& parameters() const { return parameters_; }
  int new_parameter(std::size_t i, std::size_t j, int w, const Form& direction) {
    int id = static_cast<int>(parameters_.size());
    parameters_.push_back({id, i, j, w, direction});
    return id;
  }

  std::set<int> free_parameters() const {
    std::set<int> v;
    for (const auto& [key, f] : entries_) {
      auto s = f.variables();
      v.insert(s.begin(), s.end());
    }
    return v;
  }

  void substitute(int id, const Poly& by) {
    for (auto& [key, f] : entries_) f = f.substitute(id, by);
    substitutions_.emplace_back(id, by);
  }
  const std::vector<std::pair<int, Poly>>& substitutions() const { return substitutions_; }

  /// False once a parameter has been fixed by a grid search.
  bool exact = true;
  std::vector<std::string> notes;

  ConnectionMatrix instantiate(const std::map<int, Rational>& at) const {
    ConnectionMatrix a(arity());
    for (const auto& [key, f] : entries_) a.a(key.first, key.second) = f.evaluate(at);
    return a;
  }

  /// Σ bar(a(1,r)) a(r+1,n) with polynomial coefficients.
  PForm related_cocycle() const {
    PForm c;
    for (std::size_t r = 1; r < arity(); ++r) c += wedge(bar(entry(1, r)), entry(r + 1, arity()));
    return c;
  }

 private:
  std::vector<Form> classes_;
  std::map<std::pair<std::size_t, std::size_t>, PForm> entries_;
  std::vector<Parameter> parameters_;
  std::vector<std::pair<int, Poly>> substitutions_;
};

struct SolveOutcome {
  enum class Kind { Solved, Obstructed, Undecided };
  Kind kind = Kind::Solved;
  DefiningFamily family;
  std::optional<Obstruction> obstruction;
  bool graded = true;
};

namespace detail {

inline int sum_weights(const std::vector<int>& w, std::size_t i, std::size_t j) {
  int s = 0;
  for (std::size_t r = i; r <= j; ++r) s += w[r - 1];
  return s;
}

inline int entry_degree(const std::vector<int>& p, std::size_t i, std::size_t j) {
  int s = 1;
  for (std::size_t r = i; r <= j; ++r) s += p[r - 1] - 1;
  return s;
}

/// Largest weight of a q-form on g.
inline int max_form_weight(const GradedLieAlgebra& g, int q) {
  std::vector<int> w;
  for (const auto& gen : g.generators()) w.push_back(gen.weight);
  std::sort(w.rbegin(), w.rend());
  int s = 0;
  for (int r = 0; r < q && r < static_cast<int>(w.size()); ++r) s += w[static_cast<std::size_t>(r)];
  return s;
}

/// Class coordinates of a closed PForm of degree q, as polynomials.
inline ClassPolys class_polys(const CochainComplex& cx, const PForm& f, int q) {
  ClassPolys out;
  for (const auto& [mu, part] : f.by_parameter()) {
    for (const auto& [w, comp] : weight_components(cx.algebra(), part)) {
      ClassCoordinates cc = cx.class_coordinates(comp, q, w);
      auto& polys = out[w];
      polys.resize(cc.coords.size());
      for (std::size_t r = 0; r < cc.coords.size(); ++r) polys[r].add(mu, cc.coords[r]);
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    bool zero = std::all_of(it->second.begin(), it->second.end(), [](const Poly& p) { return p.is_zero(); });
    it = zero ? out.erase(it) : std::next(it);
  }
  return out;
}

inline std::vector<Poly> nonzero_polys(const ClassPolys& cp) {
  std::vector<Poly> out;
  for (const auto& [w, v] : cp)
    for (const auto& p : v)
      if (!p.is_zero()) out.push_back(p);
  return out;
}

/// Solves the affine system {p = 0}; returns the substitutions pivot -> affine
/// expression in the remaining variables, or nullopt when inconsistent.
inline std::optional<std::vector<std::pair<int, Poly>>> solve_affine(const std::vector<Poly>& eqs) {
  std::set<int> vars;
  for (const auto& p : eqs) {
    auto v = p.variables();
    vars.insert(v.begin(), v.end());
  }
  std::vector<int> cols(vars.begin(), vars.end());
  std::map<int, std::size_t> col_of;
  for (std::size_t c = 0; c < cols.size(); ++c) col_of[cols[c]] = c;
  RowReducer red;
  for (const auto& p : eqs) {
    SparseVector row;
    for (int v : cols)
      if (p.linear(v) != 0) row.emplace(col_of[v], p.linear(v));
    if (p.constant() != 0) row.emplace(cols.size(), -p.constant());
    red.insert(row);
  }
  std::vector<std::pair<int, Poly>> subs;
  for (const auto& [piv, row] : red.rows()) {
    if (piv == cols.size()) return std::nullopt;
    Poly expr;
    for (const auto& [c, x] : row) {
      if (c == piv) continue;
      if (c == cols.size()) expr += Poly(x);
      else expr -= Poly::var(cols[c], x);
    }
    subs.emplace_back(cols[piv], expr);
  }
  return subs;
}

inline std::vector<Rational> grid_values(int radius) {
  std::vector<Rational> v{Rational(0)};
  for (int r = 1; r <= radius; ++r) {
    v.emplace_back(r);
    v.emplace_back(-r);
  }
  return v;
}

/// First assignment (in grid order) of the variables of eqs making all of
/// them vanish, within the budget.
inline std::optional<std::map<int, Rational>> grid_zero(const std::vector<Poly>& eqs, int radius, std::size_t budget) {
  std::set<int> vs;
  for (const auto& p : eqs) {
    auto v = p.variables();
    vs.insert(v.begin(), v.end());
  }
  std::vector<int> vars(vs.begin(), vs.end());
  const auto values = grid_values(radius);
  std::vector<std::size_t> idx(vars.size(), 0);
  for (std::size_t tried = 0; tried < budget; ++tried) {
    std::map<int, Rational> at;
    for (std::size_t k = 0; k < vars.size(); ++k) at[vars[k]] = values[idx[k]];
    if (std::all_of(eqs.begin(), eqs.end(), [&](const Poly& p) { return p.evaluate(at) == 0; })) return at;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == values.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return std::nullopt;
}

}  // namespace detail

/// Inductive solution of d a(i,j) = Σ bar(a(i,r)) a(r+1,j) for all (i,j) other
/// than the corner. Each entry is a particular solution plus free parameters
/// times cocycles of its slice: class representatives (default) or the full
/// kernel. Ungraded runs work modulo forms of weight above the cutoff.
///
/// Obstruction equations that are affine in the parameters are solved
/// exactly. A monomial equation c t_a t_b ... = 0 splits the family into the
/// cases t_a = 0, t_b = 0, ...; other nonlinear systems fall back to a grid
/// search that makes the branch inexact. Returns every branch.
inline std::vector<SolveOutcome> solve_defining_branches(const CochainComplex& cx, const std::vector<Form>& classes,
                                                         const SolveOptions& opt = {}) {
  const GradedLieAlgebra& g = cx.algebra();
  const std::size_t n = classes.size();
  if (n < 2) throw Error(ErrorKind::ArityMismatch, "a Massey product needs at least two classes");
  std::vector<int> degs, weights;
  for (const auto& c : classes) {
    int q = c.degree();
    if (c.is_zero()) throw Error(ErrorKind::ZeroClass, "zero form among the classes");
    if (q < 1) throw Error(ErrorKind::NotApplicable, "classes must be homogeneous of positive degree");
    if (!differential(g, c).is_zero()) throw Error(ErrorKind::NotACocycle, "class representative " + to_string(c) + " is not closed");
    degs.push_back(q);
    int w = weight(g, c);
    if (opt.graded && w < 0) throw Error(ErrorKind::NotApplicable, "graded search needs weight-homogeneous classes");
    weights.push_back(w);
  }
  if (opt.graded && detail::sum_weights(weights, 1, n) > g.cutoff())
    throw Error(ErrorKind::CutoffTooSmall, "product weight " + std::to_string(detail::sum_weights(weights, 1, n)) +
                                               " exceeds cutoff " + std::to_string(g.cutoff()));

  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t s = 1; s + 1 < n; ++s)
    for (std::size_t i = 1; i + s <= n; ++i) order.emplace_back(i, i + s);

  std::vector<SolveOutcome> branches;
  auto run = [&](auto&& self, DefiningFamily fam, std::size_t from) -> void {
    auto rhs_of = [&](std::size_t i, std::size_t j) {
      PForm rhs;
      for (std::size_t r = i; r < j; ++r) rhs += wedge(bar(fam.entry(i, r)), fam.entry(r + 1, j));
      return opt.graded ? rhs : rhs.truncated(g, g.cutoff());
    };
    auto finish = [&](SolveOutcome::Kind kind, std::optional<Obstruction> obs) {
      SolveOutcome o;
      o.kind = kind;
      o.family = std::move(fam);
      o.obstruction = std::move(obs);
      o.graded = opt.graded;
      branches.push_back(std::move(o));
    };
    for (std::size_t k = from; k < order.size(); ++k) {
      const auto [i, j] = order[k];
      const int deg = detail::entry_degree(degs, i, j);
      const std::string where = "a(" + std::to_string(i) + "," + std::to_string(j) + ")";
      for (;;) {
        ClassPolys cp = detail::class_polys(cx, rhs_of(i, j), deg + 1);
        std::vector<Poly> eqs = detail::nonzero_polys(cp);
        if (eqs.empty()) break;
        std::vector<Poly> lin;
        for (const auto& p : eqs)
          if (p.degree() <= 1) lin.push_back(p);
        if (!lin.empty()) {
          auto subs = detail::solve_affine(lin);
          if (!subs) {
            finish(fam.exact ? SolveOutcome::Kind::Obstructed : SolveOutcome::Kind::Undecided,
                   Obstruction{i, j, deg + 1, cp});
            return;
          }
          for (const auto& [id, expr] : *subs) fam.substitute(id, expr);
          continue;
        }
        auto mono = std::find_if(eqs.begin(), eqs.end(), [](const Poly& p) { return p.terms().size() == 1; });
        if (mono != eqs.end() && branches.size() < opt.max_branches) {
          const VarMonomial& m = mono->terms().begin()->first;
          std::set<int> vars(m.begin(), m.end());
          for (int v : vars) {
            DefiningFamily f = fam;
            f.substitute(v, Poly());
            f.notes.push_back("case t" + std::to_string(v) + " = 0 at " + where);
            self(self, std::move(f), k);
          }
          return;
        }
        auto at = detail::grid_zero(eqs, opt.grid_radius, opt.budget);
        if (!at) {
          fam.notes.push_back("no grid point clears the nonlinear obstruction at " + where);
          finish(SolveOutcome::Kind::Undecided, Obstruction{i, j, deg + 1, cp});
          return;
        }
        fam.exact = false;
        for (const auto& [id, x] : *at) fam.substitute(id, Poly(x));
        fam.notes.push_back("parameters fixed by grid search at " + where);
      }

      PForm rhs = rhs_of(i, j);
      PForm entry;
      for (const auto& [mu, part] : rhs.by_parameter()) {
        auto pre = cx.coboundary_preimage(part);
        if (!pre) throw Error(ErrorKind::Unverified, "exact right-hand side without a preimage");
        Poly coeff;
        coeff.add(mu, 1);
        entry += PForm(pre->particular, coeff);
      }
      std::vector<int> slice_weights;
      if (opt.graded) {
        slice_weights.push_back(detail::sum_weights(weights, i, j));
      } else {
        for (int w = 0; w <= std::min(g.cutoff(), detail::max_form_weight(g, deg)); ++w) slice_weights.push_back(w);
      }
      for (int w : slice_weights) {
        if (w > g.cutoff()) continue;
        const CohomologySlice& h = cx.cohomology(deg, w);
        const auto& dirs = opt.basis == ParameterBasis::Classes ? h.representatives : h.cocycles;
        for (const auto& f : dirs) entry += PForm(f, Poly::var(fam.new_parameter(i, j, w, f)));
      }
      fam.set_entry(i, j, entry);
    }
    finish(SolveOutcome::Kind::Solved, std::nullopt);
  };
  run(run, DefiningFamily(classes), 0);
  return branches;
}

/// The first solved branch, else the first undecided one, else the first
/// obstruction.
inline SolveOutcome solve_defining_system(const CochainComplex& cx, const std::vector<Form>& classes,
                                          const SolveOptions& opt = {}) {
  auto branches = solve_defining_branches(cx, classes, opt);
  for (auto kind : {SolveOutcome::Kind::Solved, SolveOutcome::Kind::Undecided})
    for (auto& b : branches)
      if (b.kind == kind) return std::move(b);
  return std::move(branches.front());
}

// ---------------------------------------------------------------------------
// Value sets
// ---------------------------------------------------------------------------

/// value + span(directions) inside ⊕_w H^degree_w, coordinates concatenated
/// over the listed weights in the representative bases.
struct AffineClassSet {
  int degree = 0;
  std::vector<int> weights;
  std::vector<std::size_t> dims;
  DenseVector value;
  std::vector<DenseVector> directions;
  std::vector<int> direction_parameters;  // parameter id per direction, -1 if none

  std::size_t dimension() const { return value.size(); }
  std::optional<std::size_t> offset(int w) const {
    std::size_t off = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (weights[k] == w) return off;
      off += dims[k];
    }
    return std::nullopt;
  }
  std::size_t indeterminacy_rank() const {
    SliceMatrix m(dimension(), directions.size());
    for (std::size_t c = 0; c < directions.size(); ++c)
      for (std::size_t r = 0; r < dimension(); ++r) m.add(r, c, directions[c][r]);
    return rank(m);
  }

  /// Coefficients x with value + Σ x_k directions_k = v, if any.
  std::optional<DenseVector> solve_for(const DenseVector& v) const {
    SliceMatrix m(dimension(), directions.size());
    for (std::size_t c = 0; c < directions.size(); ++c)
      for (std::size_t r = 0; r < dimension(); ++r) m.add(r, c, directions[c][r]);
    DenseVector t(dimension());
    for (std::size_t r = 0; r < dimension(); ++r) t[r] = v[r] - value[r];
    auto sol = solve(m, t);
    if (!sol) return std::nullopt;
    return sol->particular;
  }
  bool contains(const DenseVector& v) const { return solve_for(v).has_value(); }
  bool contains_zero() const { return contains(DenseVector(dimension(), Rational(0))); }

  /// Coordinates of a closed form in this space; nullopt when it has a
  /// nonzero class in a weight outside the space.
  std::optional<DenseVector> embed(const CochainComplex& cx, const Form& c) const {
    DenseVector v(dimension(), Rational(0));
    for (const auto& [w, cc] : cx.class_coordinates_by_weight(c)) {
      if (cc.q != degree) return std::nullopt;
      auto off = offset(w);
      if (!off) {
        if (!cc.is_zero()) return std::nullopt;
        continue;
      }
      for (std::size_t r = 0; r < cc.coords.size(); ++r) v[*off + r] = cc.coords[r];
    }
    return v;
  }
  bool contains_class(const CochainComplex& cx, const Form& c) const {
    auto v = embed(cx, c);
    return v && contains(*v);
  }
};

namespace detail {

inline bool all_affine(const ClassPolys& cp) {
  for (const auto& [w, v] : cp)
    for (const auto& p : v)
      if (p.degree() > 1) return false;
  return true;
}

/// Affine value set from class polynomials of degree <= 1.
inline AffineClassSet affine_set(const CochainComplex& cx, const ClassPolys& cp, int degree) {
  AffineClassSet s;
  s.degree = degree;
  std::set<int> vars;
  for (const auto& [w, v] : cp) {
    s.weights.push_back(w);
    s.dims.push_back(cx.cohomology(degree, w).dimension());
    for (const auto& p : v) {
      auto pv = p.variables();
      vars.insert(pv.begin(), pv.end());
      s.value.push_back(p.constant());
    }
  }
  for (int id : vars) {
    DenseVector d;
    for (const auto& [w, v] : cp)
      for (const auto& p : v) d.push_back(p.linear(id));
    s.directions.push_back(std::move(d));
    s.direction_parameters.push_back(id);
  }
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

enum class MasseyStatus { TrivialWitness, NonTrivialCertified, ValueSet, Undecided, NotDefined };

inline const char* to_string(MasseyStatus s) {
  switch (s) {
    case MasseyStatus::TrivialWitness: return "TrivialWitness";
    case MasseyStatus::NonTrivialCertified: return "NonTrivialCertified";
    case MasseyStatus::ValueSet: return "ValueSet";
    case MasseyStatus::Undecided: return "Undecided";
    case MasseyStatus::NotDefined: return "NotDefined";
  }
  return "?";
}

struct Certificate {
  std::string method;  // "exact-affine" or "sampled-leading-coefficient"
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::optional<Rational> coefficient;
  std::vector<int> omega_indices;
  bool passed = false;
  std::vector<std::string> sample_values;
  std::vector<std::string> notes;
};

struct MasseyResult {
  MasseyStatus status = MasseyStatus::Undecided;
  std::optional<ConnectionMatrix> witness;
  std::vector<AffineClassSet> values;  // the value set is their union (when exact)
  std::optional<Obstruction> obstruction;
  std::optional<Certificate> certificate;
  std::vector<std::string> notes;

  bool contains_zero() const {
    return std::any_of(values.begin(), values.end(), [](const AffineClassSet& s) { return s.contains_zero(); });
  }
  bool contains_class(const CochainComplex& cx, const Form& c) const {
    return std::any_of(values.begin(), values.end(), [&](const AffineClassSet& s) { return s.contains_class(cx, c); });
  }
};

struct EvalOptions {
  SolveOptions solve;
  std::uint64_t seed = 1;
  std::size_t samples = 100;
};

namespace detail {

inline bool homogeneous(const GradedLieAlgebra& g, const std::vector<Form>& classes) {
  return std::all_of(classes.begin(), classes.end(), [&](const Form& c) { return weight(g, c) >= 0; });
}

/// Residual check modulo weights above the cutoff when ungraded.
inline std::optional<std::string> witness_problem(const CochainComplex& cx, const ConnectionMatrix& a, bool graded) {
  const GradedLieAlgebra& g = cx.algebra();
  if (graded) return defining_system_problem(g, a);
  if (!a.a(1, a.arity()).is_zero()) return "corner entry is not zero";
  ConnectionMatrix mu = mc_residual(g, a);
  for (std::size_t r = 0; r < mu.size(); ++r)
    for (std::size_t c = 0; c < mu.size(); ++c) {
      if (r == 0 && c == a.arity()) continue;
      if (!PForm(mu.at(r, c)).truncated(g, g.cutoff()).is_zero())
        return "Maurer-Cartan equation fails at a(" + std::to_string(r + 1) + "," + std::to_string(c) + ")";
    }
  return std::nullopt;
}

inline Form truncate(const GradedLieAlgebra& g, const Form& f, bool graded) {
  return graded ? f : PForm(f).truncated(g, g.cutoff()).evaluate({});
}

/// Instantiates the family at a parameter choice and verifies it as a
/// witness: a defining system whose related cocycle is exact.
inline ConnectionMatrix verified_witness(const CochainComplex& cx, const DefiningFamily& fam,
                                         const std::map<int, Rational>& at, bool graded) {
  ConnectionMatrix a = fam.instantiate(at);
  if (auto p = witness_problem(cx, a, graded)) throw Error(ErrorKind::Unverified, "witness: " + *p);
  Form c = truncate(cx.algebra(), related_cocycle_unchecked(a), graded);
  if (!cx.is_exact(c)) throw Error(ErrorKind::Unverified, "witness related cocycle is not exact");
  return a;
}

/// Parameter values (remaining ones zero) placing the affine set at 0.
inline std::map<int, Rational> zero_assignment(const AffineClassSet& s) {
  std::map<int, Rational> at;
  auto x = s.solve_for(DenseVector(s.dimension(), Rational(0)));
  if (!x) return at;
  for (std::size_t k = 0; k < x->size(); ++k)
    if (s.direction_parameters[k] >= 0) at[s.direction_parameters[k]] = (*x)[k];
  return at;
}

}  // namespace detail

/// Triple product <a, b, c>: the affine set [ā g + f̄ c] + [a]H + H[c] with
/// d f = ā b, d g = b̄ c; NotDefined when either pair product is nonzero.
inline MasseyResult triple_product(const CochainComplex& cx, const Form& a, const Form& b, const Form& c) {
  std::vector<Form> classes{a, b, c};
  SolveOptions opt;
  opt.graded = detail::homogeneous(cx.algebra(), classes);
  SolveOutcome sol = solve_defining_system(cx, classes, opt);
  MasseyResult res;
  if (sol.kind != SolveOutcome::Kind::Solved) {
    res.status = MasseyStatus::NotDefined;
    res.obstruction = sol.obstruction;
    return res;
  }
  PForm corner = sol.family.related_cocycle();
  if (!opt.graded) corner = corner.truncated(cx.algebra(), cx.algebra().cutoff());
  const int q = sol.family.classes()[0].degree() + b.degree() + c.degree() - 1;
  ClassPolys cp = detail::class_polys(cx, corner, q);
  res.values.push_back(detail::affine_set(cx, cp, q));
  res.status = MasseyStatus::ValueSet;
  if (res.values[0].contains_zero())
    res.witness = detail::verified_witness(cx, sol.family, detail::zero_assignment(res.values[0]), opt.graded);
  if (!opt.graded) res.notes.push_back("ungraded: computed modulo forms of weight above the cutoff");
  return res;
}

// ---------------------------------------------------------------------------
// Leading-coefficient certificates
// ---------------------------------------------------------------------------

/// Splits <e^2, e^1, ..., e^1, omega(tail)> over m0 into (i1 = n, tail).
inline std::optional<std::pair<int, std::vector<int>>> main_shape(const CochainComplex& cx,
                                                                  const std::vector<Form>& classes) {
  if (cx.flavor() != AlgebraFlavor::M0 || classes.size() < 2) return std::nullopt;
  if (classes.front() != Form::generator(2)) return std::nullopt;
  for (std::size_t r = 1; r + 1 < classes.size(); ++r)
    if (classes[r] != Form::generator(1)) return std::nullopt;
  const Form& last = classes.back();
  const int q = last.degree(), w = weight(cx.algebra(), last);
  if (q < 2 || w < 0) return std::nullopt;
  const int i1 = static_cast<int>(classes.size());
  for (const auto& idx : mzero::omega_indices(q, w))
    if (mzero::omega(idx) == last && i1 < idx.front()) return std::make_pair(i1, idx);
  return std::nullopt;
}

/// Samples the full-kernel defining-system family of a product of the shape
/// <e^2, e^1 (i1-2 times), omega(tail)> and checks that the coordinate of the
/// related-cocycle class on omega(e^{i1}, tail) is (-1)^{i1} in every sample.
inline Certificate leading_coefficient_certificate(const CochainComplex& cx, const std::vector<Form>& classes,
                                                   std::size_t samples, std::uint64_t seed) {
  auto shape = main_shape(cx, classes);
  if (!shape) throw Error(ErrorKind::NotApplicable, "certificate needs the shape <e2, e1, ..., e1, omega(tail)> over m0");
  auto [i1, tail] = *shape;
  std::vector<int> full{i1};
  full.insert(full.end(), tail.begin(), tail.end());
  const int q = static_cast<int>(full.size()) + 1;
  const int w = mzero::omega_weight(full);
  if (w > cx.algebra().cutoff()) throw Error(ErrorKind::CutoffTooSmall, "cutoff below the product weight");

  SolveOptions opt;
  opt.basis = ParameterBasis::Cocycles;
  SolveOutcome sol = solve_defining_system(cx, classes, opt);
  if (sol.kind != SolveOutcome::Kind::Solved) throw Error(ErrorKind::Unverified, "defining system family is obstructed");

  const auto& reps = cx.cohomology(q, w).representatives;
  const Form target = mzero::omega(full);
  auto pos = std::find(reps.begin(), reps.end(), target);
  if (pos == reps.end()) throw Error(ErrorKind::Unverified, "omega cocycle is not a class representative");
  const auto r = static_cast<std::size_t>(pos - reps.begin());

  ClassPolys cp = detail::class_polys(cx, sol.family.related_cocycle(), q);
  Poly coeff = cp.count(w) ? cp.at(w)[r] : Poly();
  const Rational expected = i1 % 2 ? -1 : 1;

  Certificate cert;
  cert.method = "sampled-leading-coefficient";
  cert.seed = seed;
  cert.samples = samples;
  cert.omega_indices = full;
  cert.passed = true;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  const auto vars = sol.family.free_parameters();
  for (std::size_t k = 0; k < samples; ++k) {
    std::map<int, Rational> at;
    std::string line;
    for (int v : vars) {
      Rational x(num(rng), den(rng));
      x.canonicalize();
      at[v] = x;
      line += (line.empty() ? "" : ",") + std::string("t") + std::to_string(v) + "=" + to_string(x);
    }
    Rational got = coeff.evaluate(at);
    line += (line.empty() ? "" : ";") + std::string("coefficient=") + to_string(got);
    cert.sample_values.push_back(line);
    if (got != expected) cert.passed = false;
  }
  cert.coefficient = coeff.is_constant() ? coeff.constant() : Rational(0);
  if (!coeff.is_constant()) {
    cert.coefficient.reset();
    cert.notes.push_back("coordinate depends on the parameters: " + to_string(coeff));
  } else {
    cert.notes.push_back("coordinate is independent of the " + std::to_string(vars.size()) + " free parameters");
  }
  cert.notes.push_back("family: full slice kernels, graded; e1-multiples in the class are sampled, not excluded");
  return cert;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

inline MasseyResult evaluate_product(const CochainComplex& cx, const std::vector<Form>& classes,
                                     const EvalOptions& eo = {}) {
  MasseyResult res;
  const Certificate exact_cert{"exact-affine", 0, 0, std::nullopt, {}, true, {}, {"0 is outside the affine value set"}};
  if (classes.size() == 3) {
    res = triple_product(cx, classes[0], classes[1], classes[2]);
    if (res.status == MasseyStatus::ValueSet) {
      if (res.contains_zero()) {
        res.status = MasseyStatus::TrivialWitness;
      } else {
        res.status = MasseyStatus::NonTrivialCertified;
        res.certificate = exact_cert;
      }
    }
    return res;
  }

  SolveOptions opt = eo.solve;
  opt.graded = opt.graded && detail::homogeneous(cx.algebra(), classes);
  if (!opt.graded) res.notes.push_back("ungraded: computed modulo forms of weight above the cutoff");
  int q = 2;
  for (const auto& c : classes) q += c.degree() - 1;

  bool decided = true;  // every branch exact, affine, and zero-free so far
  std::size_t solved = 0;
  for (const SolveOutcome& sol : solve_defining_branches(cx, classes, opt)) {
    res.notes.insert(res.notes.end(), sol.family.notes.begin(), sol.family.notes.end());
    if (sol.kind == SolveOutcome::Kind::Obstructed) {
      if (!res.obstruction) res.obstruction = sol.obstruction;
      continue;
    }
    if (sol.kind == SolveOutcome::Kind::Undecided) {
      decided = false;
      if (!res.obstruction) res.obstruction = sol.obstruction;
      continue;
    }
    ++solved;
    PForm corner = sol.family.related_cocycle();
    if (!opt.graded) corner = corner.truncated(cx.algebra(), cx.algebra().cutoff());
    ClassPolys cp = detail::class_polys(cx, corner, q);
    if (detail::all_affine(cp)) {
      AffineClassSet set = detail::affine_set(cx, cp, q);
      if (set.contains_zero()) {
        res.status = MasseyStatus::TrivialWitness;
        res.witness = detail::verified_witness(cx, sol.family, detail::zero_assignment(set), opt.graded);
        res.values.push_back(std::move(set));
        return res;
      }
      res.values.push_back(std::move(set));
      decided = decided && sol.family.exact;
    } else {
      decided = false;
      if (auto at = detail::grid_zero(detail::nonzero_polys(cp), opt.grid_radius, opt.budget)) {
        res.status = MasseyStatus::TrivialWitness;
        res.witness = detail::verified_witness(cx, sol.family, *at, opt.graded);
        return res;
      }
      res.notes.push_back("class depends nonlinearly on the parameters; no zero found on the grid");
    }
  }
  if (solved == 0 && decided) {
    res.status = MasseyStatus::NotDefined;
    return res;
  }
  res.obstruction.reset();
  if (decided) {
    res.status = MasseyStatus::NonTrivialCertified;
    res.certificate = exact_cert;
    return res;
  }
  if (main_shape(cx, classes)) {
    Certificate cert = leading_coefficient_certificate(cx, classes, eo.samples, eo.seed);
    if (cert.passed) {
      res.status = MasseyStatus::NonTrivialCertified;
      res.certificate = cert;
      return res;
    }
  }
  res.status = MasseyStatus::Undecided;
  return res;
}

// ---------------------------------------------------------------------------
// Classification of trivial products of 1-classes over m0
// ---------------------------------------------------------------------------

/// gr m0 truncated at gr weight `cutoff`: e1, e2 of weight 1, e_i of weight i-1.
inline GradedLieAlgebra gr_m0(int cutoff) { return associated_graded(load_preset(Preset::M0, cutoff + 1)); }

struct OneClass {
  Rational alpha, beta;  // alpha e^1 + beta e^2
};

inline Form to_form(const OneClass& c) { return c.alpha * Form::generator(1) + c.beta * Form::generator(2); }

struct ClassificationTag {
  enum class Kind { A, B, C, D, NotTrivial, NotDefined, Unclassified, Undecided };
  Kind kind = Kind::Undecided;
  Rational x, y;  // A: λ = (x : y); B: α = x, β = y; C: α = x; D: α = x, β = y
  int l = 0;      // C: number of leading e^1; D: k
  std::size_t n = 0;

  bool trivial() const { return kind == Kind::A || kind == Kind::B || kind == Kind::C || kind == Kind::D || kind == Kind::Unclassified; }
  bool operator==(const ClassificationTag& o) const {
    return kind == o.kind && x == o.x && y == o.y && l == o.l && n == o.n;
  }
};

inline std::string to_string(const ClassificationTag& t) {
  const std::string np1 = std::to_string(t.n + 1);
  switch (t.kind) {
    case ClassificationTag::Kind::A: return "A^" + np1 + "(lambda=(" + to_string(t.x) + ":" + to_string(t.y) + "))";
    case ClassificationTag::Kind::B: return "B^" + np1 + "(alpha=" + to_string(t.x) + ", beta=" + to_string(t.y) + ")";
    case ClassificationTag::Kind::C: return "C^" + np1 + "(l=" + std::to_string(t.l) + ", alpha=" + to_string(t.x) + ")";
    case ClassificationTag::Kind::D:
      return "D^" + np1 + "(k=" + std::to_string(t.l) + ", alpha=" + to_string(t.x) + ", beta=" + to_string(t.y) + ")";
    case ClassificationTag::Kind::NotTrivial: return "NotTrivial";
    case ClassificationTag::Kind::NotDefined: return "NotDefined";
    case ClassificationTag::Kind::Unclassified: return "Unclassified";
    case ClassificationTag::Kind::Undecided: return "Undecided";
  }
  return "?";
}

/// β1(α2β3 − α3β2) − β3(α1β2 − α2β1); zero iff <ω1, ω2, ω3> is trivial.
inline Rational triple_criterion(const OneClass& a, const OneClass& b, const OneClass& c) {
  return a.beta * (b.alpha * c.beta - c.alpha * b.beta) - c.beta * (a.alpha * b.beta - b.alpha * a.beta);
}

/// Table row matched by the classes up to rescaling each class, if any.
inline std::optional<ClassificationTag> match_table_row(const std::vector<OneClass>& w) {
  using K = ClassificationTag::Kind;
  const std::size_t n = w.size();
  if (n < 3) return std::nullopt;
  // normalized slopes: β = 1 where β != 0, else the class is e^1
  std::vector<std::optional<Rational>> slope(n);
  std::size_t nb = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (w[i].beta != 0) {
      slope[i] = w[i].alpha / w[i].beta;
      ++nb;
    }
  ClassificationTag t;
  t.n = n;
  if (std::all_of(slope.begin(), slope.end(), [&](const auto& s) { return s == slope[0]; })) {
    t.kind = K::A;
    if (slope[0]) {
      t.x = *slope[0];
      t.y = 1;
    } else {
      t.x = 1;
      t.y = 0;
    }
    return t;
  }
  if (nb == n) {
    Rational d = *slope[1] - *slope[0];
    bool ap = true;
    for (std::size_t i = 2; i < n; ++i) ap = ap && *slope[i] - *slope[i - 1] == d;
    if (ap && d != 0) {
      t.kind = K::B;
      t.x = d;
      t.y = *slope[0] - d;
      return t;
    }
  }
  if (nb == 1) {
    std::size_t p = 0;
    while (!slope[p]) ++p;
    t.kind = K::C;
    t.l = static_cast<int>(p);
    t.x = *slope[p];
    return t;
  }
  if (nb == 2 && n % 2 == 0 && n >= 4 && slope[0] && slope[n - 1]) {
    t.kind = K::D;
    t.l = static_cast<int>((n - 2) / 2);
    t.x = *slope[0];
    t.y = *slope[n - 1];
    return t;
  }
  return std::nullopt;
}

/// Decides whether <α1 e^1 + β1 e^2, ...> over m0 is defined and trivial.
/// Triples use the criterion; longer products require trivial proper
/// windows, then a table row, and otherwise the exact solver over gr m0.
inline ClassificationTag classify_trivial_ones(const std::vector<OneClass>& classes, const EvalOptions& eo = {}) {
  using K = ClassificationTag::Kind;
  const std::size_t n = classes.size();
  if (n < 3) throw Error(ErrorKind::ArityMismatch, "classification needs at least three classes");
  for (const auto& c : classes)
    if (c.alpha == 0 && c.beta == 0) throw Error(ErrorKind::ZeroClass, "zero class in the product");

  std::optional<CochainComplex> cx;
  std::map<std::pair<std::size_t, std::size_t>, ClassificationTag> memo;
  auto rec = [&](auto&& self, std::size_t lo, std::size_t hi) -> ClassificationTag {
    if (auto it = memo.find({lo, hi}); it != memo.end()) return it->second;
    std::vector<OneClass> win(classes.begin() + static_cast<std::ptrdiff_t>(lo),
                              classes.begin() + static_cast<std::ptrdiff_t>(hi));
    ClassificationTag t;
    t.n = win.size();
    if (win.size() == 3) {
      if (triple_criterion(win[0], win[1], win[2]) != 0) t.kind = K::NotTrivial;
      else if (auto row = match_table_row(win)) t = *row;
      else t.kind = K::Unclassified;
    } else {
      ClassificationTag pre = self(self, lo, hi - 1), suf = self(self, lo + 1, hi);
      if (pre.kind == K::Undecided || suf.kind == K::Undecided) {
        t.kind = K::Undecided;
      } else if (!pre.trivial() || !suf.trivial()) {
        t.kind = K::NotDefined;
      } else if (auto row = match_table_row(win)) {
        t = *row;
      } else {
        if (!cx) cx.emplace(gr_m0(static_cast<int>(n) + 1));
        std::vector<Form> forms;
        for (const auto& c : win) forms.push_back(to_form(c));
        MasseyResult r = evaluate_product(*cx, forms, eo);
        switch (r.status) {
          case MasseyStatus::NotDefined: t.kind = K::NotDefined; break;
          case MasseyStatus::TrivialWitness: t.kind = K::Unclassified; break;
          case MasseyStatus::NonTrivialCertified: t.kind = K::NotTrivial; break;
          default: t.kind = K::Undecided; break;
        }
      }
    }
    memo.emplace(std::make_pair(lo, hi), t);
    return t;
  };
  return rec(rec, 0, n);
}

// ---------------------------------------------------------------------------
// Product mini-language: form expressions separated by ';'
// ---------------------------------------------------------------------------

inline std::vector<Form> parse_product(const std::string& text) {
  std::vector<Form> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t semi = text.find(';', start);
    std::string part = text.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
    try {
      out.push_back(parse_form(part));
    } catch (const Error& e) {
      throw Error(e.kind(), "class " + std::to_string(out.size() + 1) + " (offset " + std::to_string(start) + "): " + e.what());
    }
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  return out;
}

/// Reads α e^1 + β e^2 off a 1-form supported on e^1, e^2.
inline OneClass one_class_of(const Form& f) {
  OneClass c;
  for (const auto& [m, a] : f.terms()) {
    if (m == Monomial{1}) c.alpha = a;
    else if (m == Monomial{2}) c.beta = a;
    else throw Error(ErrorKind::NotApplicable, "classification takes combinations of e1 and e2 only");
  }
  return c;
}

}  // namespace massey
