#pragma once

// Upper triangular representations, their strong Maurer–Cartan connections,
// associated graded representations, thread modules over m0 and the lifting
// obstruction for defining systems of 1-forms.

#include <massey/massey.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace massey {

/// Dense square matrix over Q.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t size) : size_(size), m_(size * size, Rational(0)) {}

  std::size_t size() const { return size_; }
  Rational& at(std::size_t r, std::size_t c) { return m_.at(r * size_ + c); }
  const Rational& at(std::size_t r, std::size_t c) const { return m_.at(r * size_ + c); }

  bool is_zero() const {
    for (const auto& x : m_)
      if (x != 0) return false;
    return true;
  }
  bool strictly_upper() const {
    for (std::size_t r = 0; r < size_; ++r)
      for (std::size_t c = 0; c <= r; ++c)
        if (at(r, c) != 0) return false;
    return true;
  }

  RationalMatrix& operator+=(const RationalMatrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < m_.size(); ++i) m_[i] += o.m_[i];
    return *this;
  }
  RationalMatrix& operator-=(const RationalMatrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < m_.size(); ++i) m_[i] -= o.m_[i];
    return *this;
  }
  RationalMatrix& operator*=(const Rational& s) {
    for (auto& x : m_) x *= s;
    return *this;
  }
  friend RationalMatrix operator+(RationalMatrix a, const RationalMatrix& b) { return a += b; }
  friend RationalMatrix operator-(RationalMatrix a, const RationalMatrix& b) { return a -= b; }
  friend RationalMatrix operator*(const Rational& s, RationalMatrix a) { return a *= s; }
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    a.check_same(b);
    RationalMatrix out(a.size_);
    for (std::size_t r = 0; r < a.size_; ++r)
      for (std::size_t k = 0; k < a.size_; ++k)
        if (a.at(r, k) != 0)
          for (std::size_t c = 0; c < a.size_; ++c) out.at(r, c) += a.at(r, k) * b.at(k, c);
    return out;
  }
  bool operator==(const RationalMatrix& o) const { return size_ == o.size_ && m_ == o.m_; }

 private:
  void check_same(const RationalMatrix& o) const {
    if (size_ != o.size_) throw Error(ErrorKind::ArityMismatch, "matrix sizes differ");
  }
  std::size_t size_ = 0;
  std::vector<Rational> m_;
};

inline RationalMatrix commutator(const RationalMatrix& a, const RationalMatrix& b) { return a * b - b * a; }

/// ρ: g → T_n(Q) given on generators; missing generators are derived from
/// brackets by check_homomorphism.
struct UpperTriangularRep {
  std::size_t n = 0;
  std::map<int, RationalMatrix> images;

  RationalMatrix image(int k) const {
    auto it = images.find(k);
    return it == images.end() ? RationalMatrix(n + 1) : it->second;
  }
  RationalMatrix of(const Element& x) const {
    RationalMatrix out(n + 1);
    for (const auto& [k, c] : x) out += c * image(k);
    return out;
  }
  bool operator==(const UpperTriangularRep& o) const { return n == o.n && images == o.images; }
};

namespace detail {

inline void validate_rep(const GradedLieAlgebra& g, const UpperTriangularRep& rho) {
  for (const auto& [k, m] : rho.images) {
    if (!g.has(k)) throw Error(ErrorKind::InvalidIndex, "image given for unknown generator e" + std::to_string(k));
    if (m.size() != rho.n + 1) throw Error(ErrorKind::ArityMismatch, "image of e" + std::to_string(k) + " has the wrong size");
    if (!m.strictly_upper())
      throw Error(ErrorKind::InvalidIndex, "image of e" + std::to_string(k) + " is not strictly upper triangular");
  }
}

/// Fills in images of generators that occur alone in a bracket of known ones.
inline UpperTriangularRep complete_images(const GradedLieAlgebra& g, UpperTriangularRep rho) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& x : g.generators()) {
      if (rho.images.count(x.index)) continue;
      for (const auto& [key, terms] : g.brackets()) {
        auto [i, j] = key;
        if (!rho.images.count(i) || !rho.images.count(j)) continue;
        const BracketTerm* own = nullptr;
        bool rest_known = true;
        for (const auto& t : terms) {
          if (t.target == x.index) own = &t;
          else rest_known = rest_known && rho.images.count(t.target);
        }
        if (!own || !rest_known) continue;
        RationalMatrix m = commutator(rho.images.at(i), rho.images.at(j));
        for (const auto& t : terms)
          if (t.target != x.index) m -= t.coeff * rho.images.at(t.target);
        rho.images.emplace(x.index, Rational(1) / own->coeff * m);
        progress = true;
        break;
      }
    }
  }
  for (const auto& x : g.generators())
    if (!rho.images.count(x.index))
      throw Error(ErrorKind::NotApplicable, "image of e" + std::to_string(x.index) + " is missing and cannot be derived");
  return rho;
}

}  // namespace detail

struct HomomorphismCheck {
  bool ok = false;
  std::optional<std::pair<int, int>> failing;  // first pair (i < j) with ρ[e_i, e_j] != [ρe_i, ρe_j]
  UpperTriangularRep completed;                // images on every generator
};

/// Bracket preservation on all generator pairs of the truncated algebra
/// (brackets above the cutoff are zero).
inline HomomorphismCheck check_homomorphism(const GradedLieAlgebra& g, const UpperTriangularRep& rho) {
  detail::validate_rep(g, rho);
  HomomorphismCheck out;
  out.completed = detail::complete_images(g, rho);
  const auto& gens = g.generators();
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = a + 1; b < gens.size(); ++b) {
      int i = gens[a].index, j = gens[b].index;
      const RationalMatrix& ri = out.completed.images.at(i);
      const RationalMatrix& rj = out.completed.images.at(j);
      if (out.completed.of(g.bracket_basis(i, j)) != commutator(ri, rj)) {
        out.failing = std::make_pair(i, j);
        return out;
      }
    }
  out.ok = true;
  return out;
}

/// A with a(r, c) = Σ_k ρ(e_k)_{rc} e^k; satisfies dA − bar(A)∧A = 0.
inline ConnectionMatrix connection_of(const GradedLieAlgebra& g, const UpperTriangularRep& rho) {
  HomomorphismCheck check = check_homomorphism(g, rho);
  if (!check.ok) throw Error(ErrorKind::Unverified, "not a homomorphism");
  ConnectionMatrix a(rho.n);
  for (const auto& [k, m] : check.completed.images)
    for (std::size_t r = 0; r < m.size(); ++r)
      for (std::size_t c = r + 1; c < m.size(); ++c)
        if (m.at(r, c) != 0) a.at(r, c) += Form::generator(k, m.at(r, c));
  return a;
}

/// Inverse of connection_of on matrices of 1-forms solving strong Maurer–Cartan.
inline UpperTriangularRep representation_of(const GradedLieAlgebra& g, const ConnectionMatrix& a) {
  if (!a.strictly_upper()) throw Error(ErrorKind::InvalidIndex, "connection matrix is not strictly upper triangular");
  UpperTriangularRep rho;
  rho.n = a.arity();
  for (const auto& x : g.generators()) rho.images.emplace(x.index, RationalMatrix(a.size()));
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = r + 1; c < a.size(); ++c)
      for (const auto& [m, coeff] : a.at(r, c).terms()) {
        if (m.size() != 1) throw Error(ErrorKind::NotApplicable, "connection entries must be 1-forms");
        if (!g.has(m[0])) throw Error(ErrorKind::InvalidIndex, "entry uses unknown e^" + std::to_string(m[0]));
        rho.images.at(m[0]).at(r, c) = coeff;
      }
  if (!mc_residual(g, a).is_zero()) throw Error(ErrorKind::Unverified, "strong Maurer-Cartan equation fails");
  return rho;
}

/// Lower central series level of each generator; throws unless every term of
/// the series is spanned by generators.
inline std::map<int, int> filtration_levels(const GradedLieAlgebra& g) {
  GradedBasis gb = associated_graded_with_basis(g);
  std::map<int, int> out;
  for (const auto& [idx, e] : gb.representatives) {
    if (e != Element{{idx, Rational(1)}})
      throw Error(ErrorKind::NotApplicable, "generators are not adapted to the central series");
    out[idx] = gb.algebra.weight(idx);
  }
  return out;
}

/// ρ̃ on gr g (same generator indices): each ρ(e_k) cut to its diagonal
/// number level(e_k).
inline UpperTriangularRep associated_graded_rep(const GradedLieAlgebra& g, const UpperTriangularRep& rho) {
  HomomorphismCheck check = check_homomorphism(g, rho);
  if (!check.ok) throw Error(ErrorKind::Unverified, "not a homomorphism");
  std::map<int, int> level = filtration_levels(g);
  UpperTriangularRep out;
  out.n = rho.n;
  for (const auto& [k, m] : check.completed.images) {
    RationalMatrix cut(m.size());
    const std::size_t s = static_cast<std::size_t>(level.at(k));
    for (std::size_t r = 0; r + s < m.size(); ++r) cut.at(r, r + s) = m.at(r, r + s);
    out.images.emplace(k, std::move(cut));
  }
  return out;
}

/// Contragredient module written in the reversed dual basis: ρ'(x) = −P ρ(x)^T P.
inline UpperTriangularRep dualize(const UpperTriangularRep& rho) {
  UpperTriangularRep out;
  out.n = rho.n;
  const std::size_t last = rho.n;
  for (const auto& [k, m] : rho.images) {
    RationalMatrix d(m.size());
    for (std::size_t r = 0; r < m.size(); ++r)
      for (std::size_t c = 0; c < m.size(); ++c) d.at(last - c, last - r) = -m.at(r, c);
    out.images.emplace(k, std::move(d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Thread modules over m0
// ---------------------------------------------------------------------------

inline bool is_m0_like(const GradedLieAlgebra& g) {
  if (detect_preset(g) == Preset::M0) return true;
  try {
    return g == gr_m0(g.cutoff());
  } catch (const Error&) {
    return false;
  }
}

struct ThreadModuleView {
  UpperTriangularRep rep;
  std::vector<OneClass> omegas;  // second diagonal α_i e^1 + β_i e^2

  bool indecomposable() const {
    return std::none_of(omegas.begin(), omegas.end(), [](const OneClass& w) { return w.alpha == 0 && w.beta == 0; });
  }
};

/// Module with e_1 v_i = α_i v_{i-1}, e_2 v_i = β_i v_{i-1} (v_0 = 0); the
/// remaining images follow from the brackets.
inline UpperTriangularRep thread_module(const std::vector<OneClass>& omegas) {
  UpperTriangularRep rho;
  rho.n = omegas.size();
  RationalMatrix e1(rho.n + 1), e2(rho.n + 1);
  for (std::size_t r = 0; r < rho.n; ++r) {
    e1.at(r, r + 1) = omegas[r].alpha;
    e2.at(r, r + 1) = omegas[r].beta;
  }
  rho.images.emplace(1, std::move(e1));
  rho.images.emplace(2, std::move(e2));
  return rho;
}

/// Requires an m0 algebra and a graded representation (ρ = ρ̃).
inline ThreadModuleView thread_view(const GradedLieAlgebra& g, const UpperTriangularRep& rho) {
  if (!is_m0_like(g)) throw Error(ErrorKind::NotApplicable, "thread modules are read over m0 only");
  HomomorphismCheck check = check_homomorphism(g, rho);
  if (!check.ok) throw Error(ErrorKind::Unverified, "not a homomorphism");
  if (associated_graded_rep(g, rho) != check.completed)
    throw Error(ErrorKind::NotApplicable, "representation is not graded");
  ThreadModuleView v{check.completed, {}};
  for (std::size_t r = 0; r < rho.n; ++r)
    v.omegas.push_back({v.rep.image(1).at(r, r + 1), v.rep.image(2).at(r, r + 1)});
  return v;
}

struct ThreadVerdict {
  bool indecomposable = false;
  std::optional<ClassificationTag> tag;  // set for indecomposable modules
};

inline ThreadVerdict thread_tag(const ThreadModuleView& view, const EvalOptions& eo = {}) {
  ThreadVerdict out;
  out.indecomposable = view.indecomposable();
  if (out.indecomposable && view.omegas.size() >= 3) out.tag = classify_trivial_ones(view.omegas, eo);
  return out;
}

// ---------------------------------------------------------------------------
// Lifting T̃_n → T_n
// ---------------------------------------------------------------------------

struct LiftResult {
  std::map<int, ClassCoordinates> obstruction;  // class of c(D) by weight
  std::optional<Form> corner;                    // d corner = c(D), when it exists
  std::optional<UpperTriangularRep> lift;

  bool obstruction_zero() const {
    for (const auto& [w, c] : obstruction)
      if (!c.is_zero()) return false;
    return true;
  }
};

/// Class of c(D) for a defining system of 1-forms, cross-checked against an
/// explicit corner solve.
inline LiftResult lift_obstruction(const CochainComplex& cx, const ConnectionMatrix& d) {
  const GradedLieAlgebra& g = cx.algebra();
  for (std::size_t r = 0; r < d.size(); ++r)
    for (std::size_t c = r + 1; c < d.size(); ++c)
      if (!d.at(r, c).is_zero() && d.at(r, c).degree() != 1)
        throw Error(ErrorKind::NotApplicable, "defining system has entries of degree other than 1");
  Form c = related_cocycle(g, d);
  LiftResult out;
  out.obstruction = cx.class_coordinates_by_weight(c);
  if (auto pre = cx.coboundary_preimage(c)) {
    ConnectionMatrix full = d;
    full.a(1, d.arity()) = pre->particular;
    if (!mc_residual(g, full).is_zero()) throw Error(ErrorKind::Unverified, "corner completion fails strong Maurer-Cartan");
    out.corner = pre->particular;
    out.lift = representation_of(g, full);
  }
  if (out.obstruction_zero() != out.corner.has_value())
    throw Error(ErrorKind::Unverified, "obstruction class disagrees with the corner solve");
  return out;
}

// ---------------------------------------------------------------------------
// Text format: "rep n=<n>" then "e<i> = [[r00, r01, ...], [...], ...]"
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::vector<Rational>> parse_rows(const std::string& text, int line) {
  std::vector<std::vector<Rational>> rows;
  std::size_t p = 0;
  auto fail = [&](const std::string& why) -> void {
    throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ": " + why);
  };
  auto skip = [&] {
    while (p < text.size() && std::isspace(static_cast<unsigned char>(text[p]))) ++p;
  };
  auto expect = [&](char ch) {
    skip();
    if (p >= text.size() || text[p] != ch) fail(std::string("expected '") + ch + "'");
    ++p;
  };
  expect('[');
  for (;;) {
    expect('[');
    std::vector<Rational> row;
    for (;;) {
      skip();
      std::size_t end = text.find_first_of(",]", p);
      if (end == std::string::npos) fail("unterminated row");
      try {
        row.push_back(parse_rational(trim(text.substr(p, end - p))));
      } catch (const Error& e) {
        fail(e.what());
      }
      p = end + 1;
      if (text[end] == ']') break;
    }
    rows.push_back(std::move(row));
    skip();
    if (p < text.size() && text[p] == ',') {
      ++p;
      continue;
    }
    expect(']');
    break;
  }
  skip();
  if (p != text.size()) fail("trailing characters");
  return rows;
}

}  // namespace detail

inline UpperTriangularRep parse_rep(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::optional<UpperTriangularRep> rho;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = detail::trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    if (!rho) {
      if (s.rfind("rep", 0) != 0) throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ": expected 'rep n=<n>'");
      std::string rest = detail::trim(s.substr(3));
      if (rest.rfind("n=", 0) != 0) throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ": expected n=<n>");
      int n = detail::parse_int(detail::trim(rest.substr(2)), line);
      if (n < 1) throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ": n must be positive");
      rho.emplace();
      rho->n = static_cast<std::size_t>(n);
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos || s[0] != 'e')
      throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ": expected e<i> = [[...]]");
    int k = detail::parse_int(detail::trim(s.substr(1, eq - 1)), line);
    auto rows = detail::parse_rows(detail::trim(s.substr(eq + 1)), line);
    if (rows.size() != rho->n + 1)
      throw Error(ErrorKind::ArityMismatch, "line " + std::to_string(line) + ": expected " + std::to_string(rho->n + 1) + " rows");
    RationalMatrix m(rho->n + 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rho->n + 1)
        throw Error(ErrorKind::ArityMismatch, "line " + std::to_string(line) + ": row " + std::to_string(r + 1) + " has the wrong length");
      for (std::size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = rows[r][c];
    }
    if (!m.strictly_upper())
      throw Error(ErrorKind::InvalidIndex, "line " + std::to_string(line) + ": matrix is not strictly upper triangular");
    if (!rho->images.emplace(k, std::move(m)).second)
      throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ": e" + std::to_string(k) + " given twice");
  }
  if (!rho) throw Error(ErrorKind::SyntaxError, "missing 'rep n=<n>' header");
  return *rho;
}

inline std::string write_rep(const UpperTriangularRep& rho) {
  std::string s = "rep n=" + std::to_string(rho.n) + "\n";
  for (const auto& [k, m] : rho.images) {
    s += "e" + std::to_string(k) + " = [";
    for (std::size_t r = 0; r < m.size(); ++r) {
      s += r ? ", [" : "[";
      for (std::size_t c = 0; c < m.size(); ++c) s += (c ? ", " : "") + to_string(m.at(r, c));
      s += "]";
    }
    s += "]\n";
  }
  return s;
}

}  // namespace massey
