#pragma once

// Exterior forms on the dual of a truncated algebra.

#include <massey/algebra.hpp>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace massey {

/// Strictly increasing generator indices i1 < ... < iq; the empty monomial is 1.
using Monomial = std::vector<int>;

class Form {
 public:
  using Terms = std::map<Monomial, Rational>;

  Form() = default;
  explicit Form(const Rational& constant) {
    if (constant != 0) terms_.emplace(Monomial{}, constant);
  }
  /// Builds c * e^{i1}∧...∧e^{iq} from indices in any order.
  static Form monomial(std::vector<int> idx, const Rational& c = 1) {
    Form f;
    f.add_term(std::move(idx), c);
    return f;
  }
  static Form generator(int i, const Rational& c = 1) { return monomial({i}, c); }

  /// Adds c * e^{idx...}, sorting the indices and absorbing the sign.
  void add_term(std::vector<int> idx, Rational c) {
    if (c == 0) return;
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        if (idx[a] == idx[b]) return;
        if (idx[a] > idx[b]) c = -c;
      }
    std::sort(idx.begin(), idx.end());
    add_sorted(idx, c);
  }

  void add_sorted(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Degree of a homogeneous form; -1 for the zero form or mixed degrees.
  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) {
      int q = static_cast<int>(m.size());
      if (d == -1) d = q;
      else if (d != q) return -1;
    }
    return d;
  }

  Form component(int deg) const {
    Form out;
    for (const auto& [m, c] : terms_)
      if (static_cast<int>(m.size()) == deg) out.terms_.emplace(m, c);
    return out;
  }

  Form& operator+=(const Form& o) {
    for (const auto& [m, c] : o.terms_) add_sorted(m, c);
    return *this;
  }
  Form& operator-=(const Form& o) {
    for (const auto& [m, c] : o.terms_) add_sorted(m, -c);
    return *this;
  }
  Form& operator*=(const Rational& a) {
    if (a == 0) terms_.clear();
    else
      for (auto& [m, c] : terms_) c *= a;
    return *this;
  }
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator-(Form a) { return a *= Rational(-1); }
  friend Form operator*(const Rational& s, Form a) { return a *= s; }
  bool operator==(const Form& o) const { return terms_ == o.terms_; }

 private:
  Terms terms_;
};

/// Sign of merging two sorted monomials, 0 when they share an index.
inline int merge_sign(const Monomial& a, const Monomial& b, Monomial& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  int inversions = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      inversions += static_cast<int>(a.size() - i);
      out.push_back(b[j++]);
    } else {
      return 0;
    }
  }
  return inversions % 2 ? -1 : 1;
}

inline Form wedge(const Form& a, const Form& b) {
  Form out;
  Monomial m;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      int s = merge_sign(ma, mb, m);
      if (s != 0) out.add_sorted(m, s > 0 ? Rational(ca * cb) : Rational(-(ca * cb)));
    }
  return out;
}

/// a -> (-1)^{k+1} a on each degree-k component.
inline Form bar(const Form& a) {
  Form out;
  for (const auto& [m, c] : a.terms()) out.add_sorted(m, m.size() % 2 == 1 ? c : Rational(-c));
  return out;
}

inline int weight(const GradedLieAlgebra& g, const Monomial& m) {
  int w = 0;
  for (int i : m) w += g.weight(i);
  return w;
}

/// Weight of a weight-homogeneous form; -1 for zero or mixed weights.
inline int weight(const GradedLieAlgebra& g, const Form& f) {
  int w = -1;
  for (const auto& [m, c] : f.terms()) {
    int x = weight(g, m);
    if (w == -1) w = x;
    else if (w != x) return -1;
  }
  return w;
}

inline std::map<int, Form> weight_components(const GradedLieAlgebra& g, const Form& f) {
  std::map<int, Form> out;
  for (const auto& [m, c] : f.terms()) out[weight(g, m)].add_sorted(m, c);
  return out;
}

/// d e^k = sum_{i<j} c_{ij}^k e^i∧e^j, so that (d f)(X, Y) = f([X, Y]);
/// extended to higher degrees as an antiderivation.
inline Form differential_of_monomial(const GradedLieAlgebra& g, const Monomial& m) {
  Form out;
  Monomial rest, merged;
  for (std::size_t r = 0; r < m.size(); ++r) {
    const auto& terms = g.dual_terms(m[r]);
    if (terms.empty()) continue;
    // e^{i1}..(d e^{ir})..e^{iq} = (-1)^r (d e^{ir}) ∧ (m without ir)
    rest.assign(m.begin(), m.end());
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(r));
    int sign0 = r % 2 ? -1 : 1;
    for (const auto& t : terms) {
      int s = merge_sign(Monomial{t.i, t.j}, rest, merged);
      if (s != 0) out.add_sorted(merged, (s * sign0 > 0) ? t.coeff : Rational(-t.coeff));
    }
  }
  return out;
}

inline Form differential(const GradedLieAlgebra& g, const Form& a) {
  Form out;
  for (const auto& [m, c] : a.terms()) {
    Form dm = differential_of_monomial(g, m);
    for (const auto& [m2, c2] : dm.terms()) out.add_sorted(m2, c * c2);
  }
  return out;
}

/// Multilinear alternating evaluation on vectors; e^{i1}∧...∧e^{iq}(X1..Xq) is
/// the determinant of [e^{ia}(Xb)].
inline Rational evaluate(const Form& a, const std::vector<Element>& vectors) {
  const std::size_t q = vectors.size();
  Rational total = 0;
  for (const auto& [m, c] : a.terms()) {
    if (m.size() != q) throw Error(ErrorKind::ArityMismatch, "evaluate: form degree differs from argument count");
    // determinant by permutation expansion; q is small
    std::vector<std::size_t> perm(q);
    for (std::size_t i = 0; i < q; ++i) perm[i] = i;
    Rational det = 0;
    do {
      Rational p = 1;
      for (std::size_t r = 0; r < q && p != 0; ++r) {
        auto it = vectors[perm[r]].find(m[r]);
        p = it == vectors[perm[r]].end() ? Rational(0) : p * it->second;
      }
      if (p == 0) continue;
      int inv = 0;
      for (std::size_t x = 0; x < q; ++x)
        for (std::size_t y = x + 1; y < q; ++y)
          if (perm[x] > perm[y]) ++inv;
      det += inv % 2 ? Rational(-p) : p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    total += c * det;
  }
  return total;
}

/// All strictly increasing q-tuples of generator indices with weight sum k,
/// in lexicographic order.
inline std::vector<Monomial> slice_basis(const GradedLieAlgebra& g, int q, int k) {
  if (k > g.cutoff())
    throw Error(ErrorKind::CutoffTooSmall,
                "weight " + std::to_string(k) + " exceeds cutoff " + std::to_string(g.cutoff()));
  std::vector<Monomial> out;
  if (q < 0 || k < 0) return out;
  const auto& gens = g.generators();
  Monomial cur;
  auto rec = [&](auto&& self, std::size_t start, int left, int need) -> void {
    if (left == 0) {
      if (need == 0) out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < gens.size(); ++i) {
      if (gens[i].weight > need) continue;
      cur.push_back(gens[i].index);
      self(self, i + 1, left - 1, need - gens[i].weight);
      cur.pop_back();
    }
  };
  rec(rec, 0, q, k);
  return out;
}

// ---------------------------------------------------------------------------
// Text rendering: "-3*e1^e4 + 1*e2^e3"; constants render as plain rationals.
// ---------------------------------------------------------------------------

inline std::string to_string(const Monomial& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "^e" : "e") + std::to_string(m[i]);
  return s;
}

inline std::string to_string(const Form& f) {
  if (f.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    Rational a = c;
    if (first) {
      first = false;
    } else {
      s += a < 0 ? " - " : " + ";
      if (a < 0) a = -a;
    }
    s += to_string(a);
    if (!m.empty()) s += "*" + to_string(m);
  }
  return s;
}

inline Form parse_form(const std::string& text) {
  std::string t = detail::trim(text);
  if (t.empty()) throw Error(ErrorKind::SyntaxError, "empty form");
  if (t == "0") return Form();
  Form out;
  for (auto term : detail::split_terms(t)) {
    auto err = [&](const std::string& m) {
      return Error(ErrorKind::SyntaxError, "form '" + text + "', term '" + term + "': " + m);
    };
    term = detail::trim(term);
    // normalize "- 3*e1" (sign separated by blanks)
    std::string compact;
    for (char c : term)
      if (c != ' ' && c != '\t') compact += c;
    Rational coeff = 1;
    std::string mono = compact;
    auto epos = compact.find('e');
    if (epos == std::string::npos) {
      out += Form(parse_rational(compact));
      continue;
    }
    std::string head = compact.substr(0, epos);
    mono = compact.substr(epos);
    if (head == "-") coeff = -1;
    else if (head == "+" || head.empty()) coeff = 1;
    else {
      if (head.back() != '*') throw err("expected '*' between coefficient and monomial");
      head.pop_back();
      try {
        coeff = parse_rational(head);
      } catch (const Error&) {
        throw err("bad coefficient");
      }
    }
    std::vector<int> idx;
    std::size_t p = 0;
    while (p < mono.size()) {
      if (mono[p] != 'e') throw err("expected 'e<index>'");
      std::size_t q = p + 1;
      while (q < mono.size() && mono[q] >= '0' && mono[q] <= '9') ++q;
      if (q == p + 1) throw err("missing index");
      idx.push_back(std::stoi(mono.substr(p + 1, q - p - 1)));
      if (idx.back() < 1) throw err("index must be positive");
      p = q;
      if (p < mono.size()) {
        if (mono[p] != '^') throw err("expected '^'");
        ++p;
        if (p == mono.size()) throw err("dangling '^'");
      }
    }
    Form f;
    f.add_term(idx, coeff);
    out += f;
  }
  return out;
}

}  // namespace massey
