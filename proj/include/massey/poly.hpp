#pragma once

// Polynomials over Q in parameter variables t0, t1, ..., and forms whose
// coefficients are such polynomials.

#include <massey/forms.hpp>

#include <algorithm>
#include <iterator>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace massey {

/// Sorted multiset of variable ids; {} is the constant monomial.
using VarMonomial = std::vector<int>;

class Poly {
 public:
  using Terms = std::map<VarMonomial, Rational>;

  Poly() = default;
  Poly(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.emplace(VarMonomial{}, c);
  }
  static Poly var(int id, const Rational& c = 1) {
    Poly p;
    if (c != 0) p.terms_.emplace(VarMonomial{id}, c);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
  Rational constant() const {
    auto it = terms_.find({});
    return it == terms_.end() ? Rational(0) : it->second;
  }
  /// -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.size()));
    return d;
  }
  std::set<int> variables() const {
    std::set<int> v;
    for (const auto& [m, c] : terms_) v.insert(m.begin(), m.end());
    return v;
  }
  /// Coefficient of the linear monomial t_id.
  Rational linear(int id) const {
    auto it = terms_.find({id});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add(const VarMonomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add(m, Rational(-c));
    return *this;
  }
  Poly& operator*=(const Rational& s) {
    if (s == 0) terms_.clear();
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        VarMonomial m;
        std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
        out.add(m, Rational(ca * cb));
      }
    return out;
  }
  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  Rational evaluate(const std::map<int, Rational>& at) const {
    Rational total = 0;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (int v : m) {
        auto it = at.find(v);
        t *= it == at.end() ? Rational(0) : it->second;
      }
      total += t;
    }
    return total;
  }

  /// Replaces t_id by the polynomial p.
  Poly substitute(int id, const Poly& p) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
      Poly term(c);
      VarMonomial rest;
      for (int v : m) {
        if (v == id) term = term * p;
        else rest.push_back(v);
      }
      Poly mono;
      mono.add(rest, 1);
      out += term * mono;
    }
    return out;
  }

 private:
  Terms terms_;
};

inline std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rational a = c;
    if (!first) {
      s += a < 0 ? " - " : " + ";
      if (a < 0) a = -a;
    }
    first = false;
    std::string mono;
    for (int v : m) mono += (mono.empty() ? "" : "*") + std::string("t") + std::to_string(v);
    if (mono.empty()) s += to_string(a);
    else if (a == 1) s += mono;
    else if (a == -1) s += "-" + mono;
    else s += to_string(a) + "*" + mono;
  }
  return s;
}

/// A form with polynomial coefficients.
class PForm {
 public:
  using Terms = std::map<Monomial, Poly>;

  PForm() = default;
  explicit PForm(const Form& f) {
    for (const auto& [m, c] : f.terms()) terms_[m] = Poly(c);
  }
  /// p * f
  PForm(const Form& f, const Poly& p) {
    for (const auto& [m, c] : f.terms()) add(m, p * c);
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const Monomial& m, const Poly& p) {
    if (p.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, p);
    if (!inserted) {
      it->second += p;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  PForm& operator+=(const PForm& o) {
    for (const auto& [m, p] : o.terms_) add(m, p);
    return *this;
  }
  PForm& operator-=(const PForm& o) {
    for (const auto& [m, p] : o.terms_) add(m, p * Rational(-1));
    return *this;
  }
  friend PForm operator+(PForm a, const PForm& b) { return a += b; }
  friend PForm operator-(PForm a, const PForm& b) { return a -= b; }
  bool operator==(const PForm& o) const { return terms_ == o.terms_; }

  int degree() const {
    int q = -1;
    for (const auto& [m, p] : terms_) {
      if (q == -1) q = static_cast<int>(m.size());
      else if (q != static_cast<int>(m.size())) return -1;
    }
    return q;
  }

  std::set<int> variables() const {
    std::set<int> v;
    for (const auto& [m, p] : terms_) {
      auto w = p.variables();
      v.insert(w.begin(), w.end());
    }
    return v;
  }

  /// Splits into sum over parameter monomials mu of mu * F_mu.
  std::map<VarMonomial, Form> by_parameter() const {
    std::map<VarMonomial, Form> out;
    for (const auto& [m, p] : terms_)
      for (const auto& [mu, c] : p.terms()) out[mu].add_sorted(m, c);
    return out;
  }

  Form evaluate(const std::map<int, Rational>& at) const {
    Form f;
    for (const auto& [m, p] : terms_) f.add_sorted(m, p.evaluate(at));
    return f;
  }

  PForm substitute(int id, const Poly& by) const {
    PForm out;
    for (const auto& [m, p] : terms_) out.add(m, p.substitute(id, by));
    return out;
  }

  /// Drops monomials of weight above the cutoff.
  PForm truncated(const GradedLieAlgebra& g, int cutoff) const {
    PForm out;
    for (const auto& [m, p] : terms_)
      if (weight(g, m) <= cutoff) out.terms_.emplace(m, p);
    return out;
  }

 private:
  Terms terms_;
};

inline PForm wedge(const PForm& a, const PForm& b) {
  PForm out;
  Monomial m;
  for (const auto& [ma, pa] : a.terms())
    for (const auto& [mb, pb] : b.terms()) {
      int s = merge_sign(ma, mb, m);
      if (s != 0) out.add(m, pa * pb * Rational(s));
    }
  return out;
}

inline PForm bar(const PForm& a) {
  PForm out;
  for (const auto& [m, p] : a.terms()) out.add(m, m.size() % 2 == 1 ? p : p * Rational(-1));
  return out;
}

inline PForm differential(const GradedLieAlgebra& g, const PForm& a) {
  PForm out;
  for (const auto& [m, p] : a.terms()) {
    Form dm = differential_of_monomial(g, m);
    for (const auto& [m2, c2] : dm.terms()) out.add(m2, p * c2);
  }
  return out;
}

inline std::string to_string(const PForm& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (const auto& [m, p] : f.terms()) {
    if (!s.empty()) s += " + ";
    s += "(" + to_string(p) + ")*" + to_string(m);
  }
  return s;
}

}  // namespace massey
