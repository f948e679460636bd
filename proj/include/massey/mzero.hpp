#pragma once

// Operators D1, D-1 on Λ*(e^2, e^3, ...) and the omega cocycles of m0.
// Indices double as weights here (canonical grading of m0).

#include <massey/forms.hpp>

#include <limits>
#include <vector>

namespace massey::mzero {

inline constexpr int kNoCutoff = std::numeric_limits<int>::max();

inline void require_tail(const Form& x, const char* op) {
  for (const auto& [m, c] : x.terms())
    if (!m.empty() && m.front() < 2)
      throw Error(ErrorKind::InvalidIndex, std::string(op) + ": argument has an e^1 factor");
}

inline int index_weight(const Monomial& m) {
  int w = 0;
  for (int i : m) w += i;
  return w;
}

/// Derivation with D1(e^2) = 0, D1(e^i) = e^{i-1}.
inline Form D1(const Form& x) {
  require_tail(x, "D1");
  Form out;
  for (const auto& [m, c] : x.terms())
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (m[r] == 2) continue;
      std::vector<int> idx(m.begin(), m.end());
      idx[r] -= 1;
      out += Form::monomial(idx, c);
    }
  return out;
}

inline Form D1_power(Form x, int l) {
  for (int i = 0; i < l && !x.is_zero(); ++i) x = D1(x);
  return x;
}

/// Right inverse of D1, monomial by monomial on ξ∧e^i (i the largest index):
/// D-1(ξ∧e^i) = Σ_l (-1)^l D1^l(ξ)∧e^{i+1+l}.
inline Form Dm1(const Form& x, int cutoff = kNoCutoff) {
  require_tail(x, "D-1");
  Form out;
  for (const auto& [m, c] : x.terms()) {
    if (m.empty()) throw Error(ErrorKind::InvalidIndex, "D-1 of a constant");
    const int last = m.back();
    Form xi = Form::monomial(Monomial(m.begin(), m.end() - 1), c);
    if (index_weight(m) + 1 > cutoff) throw Error(ErrorKind::CutoffTooSmall, "D-1 output exceeds cutoff");
    for (int l = 0; !xi.is_zero(); ++l) {
      Form term = wedge(xi, Form::generator(last + 1 + l));
      if (l % 2) term *= Rational(-1);
      out += term;
      xi = D1(xi);
    }
  }
  return out;
}

inline Form Dm1_power(Form x, int k, int cutoff = kNoCutoff) {
  for (int i = 0; i < k; ++i) x = Dm1(x, cutoff);
  return x;
}

inline int omega_weight(const std::vector<int>& idx) {
  int w = 0;
  for (int i : idx) w += i;
  return w + idx.back() + 1;
}

inline void require_omega_indices(const std::vector<int>& idx) {
  if (idx.empty()) throw Error(ErrorKind::InvalidIndex, "omega needs at least one index");
  if (idx.front() < 2) throw Error(ErrorKind::InvalidIndex, "omega indices must be >= 2");
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i] <= idx[i - 1]) throw Error(ErrorKind::InvalidIndex, "omega indices must increase strictly");
}

/// ω(e^{i1}∧...∧e^{iq}∧e^{iq+1}) = Σ_l (-1)^l D1^l(e^{i1}∧...∧e^{iq})∧e^{iq+1+l}.
/// A closed (q+1)-form of weight i1+...+i_{q-1}+2 i_q+1.
inline Form omega(const std::vector<int>& idx, int cutoff = kNoCutoff) {
  require_omega_indices(idx);
  if (omega_weight(idx) > cutoff)
    throw Error(ErrorKind::CutoffTooSmall, "omega weight " + std::to_string(omega_weight(idx)) + " exceeds cutoff");
  Form xi = Form::monomial(idx);
  Form out;
  for (int l = 0; !xi.is_zero(); ++l) {
    Form term = wedge(xi, Form::generator(idx.back() + 1 + l));
    if (l % 2) term *= Rational(-1);
    out += term;
    xi = D1(xi);
  }
  return out;
}

/// All omega index lists of degree q (so q-1 indices) and weight w.
inline std::vector<std::vector<int>> omega_indices(int q, int w) {
  std::vector<std::vector<int>> out;
  if (q < 2) return out;
  const int n = q - 1;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start, int left) -> void {
    if (static_cast<int>(cur.size()) == n) {
      if (omega_weight(cur) == w) out.push_back(cur);
      return;
    }
    for (int i = start; i <= left; ++i) {
      cur.push_back(i);
      self(self, i + 1, left);
      cur.pop_back();
    }
  };
  rec(rec, 2, w);
  return out;
}

/// Σ_k (-1)^k D1^k(e^{i1}) ∧ D-1^k(ω), which equals ω(e^{i1}∧tail). Throws when i1 is not below the first tail index.
inline Form sum_identity(int i1, const std::vector<int>& tail) {
  require_omega_indices(tail);
  if (i1 < 2 || i1 >= tail.front()) throw Error(ErrorKind::InvalidIndex, "need 2 <= i1 < first tail index");
  Form w = omega(tail);
  Form e = Form::generator(i1);
  Form out;
  for (int k = 0; !e.is_zero(); ++k) {
    Form term = wedge(e, w);
    if (k % 2) term *= Rational(-1);
    out += term;
    e = D1(e);
    w = Dm1(w);
  }
  return out;
}

/// sum_identity, verified against omega(i1, tail...).
inline Form sum_identity_check(int i1, const std::vector<int>& tail) {
  Form lhs = sum_identity(i1, tail);
  std::vector<int> idx{i1};
  idx.insert(idx.end(), tail.begin(), tail.end());
  if (lhs != omega(idx)) throw Error(ErrorKind::Unverified, "summation identity fails for e" + std::to_string(i1));
  return lhs;
}

}  // namespace massey::mzero
