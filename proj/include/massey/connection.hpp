#pragma once

// Strictly upper triangular matrices of forms (formal connections), the
// Maurer–Cartan residual, related cocycles and conjugation by scalar
// triangular matrices.

#include <massey/mzero.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace massey {

/// (n+1)x(n+1) matrix of forms. Matrix positions are 0-based (row, col);
/// a(i, j), 1 <= i <= j <= n, is the entry at (i-1, j).
class ConnectionMatrix {
 public:
  ConnectionMatrix() = default;
  explicit ConnectionMatrix(std::size_t n) : n_(n), e_((n + 1) * (n + 1)) {}

  std::size_t arity() const { return n_; }
  std::size_t size() const { return n_ + 1; }

  Form& at(std::size_t r, std::size_t c) { return e_.at(r * (n_ + 1) + c); }
  const Form& at(std::size_t r, std::size_t c) const { return e_.at(r * (n_ + 1) + c); }
  Form& a(std::size_t i, std::size_t j) { return at(i - 1, j); }
  const Form& a(std::size_t i, std::size_t j) const { return at(i - 1, j); }

  bool strictly_upper() const {
    for (std::size_t r = 0; r < size(); ++r)
      for (std::size_t c = 0; c <= r; ++c)
        if (!at(r, c).is_zero()) return false;
    return true;
  }
  bool is_zero() const {
    for (const auto& f : e_)
      if (!f.is_zero()) return false;
    return true;
  }
  /// First nonzero entry other than the corner (0, n).
  std::optional<std::pair<std::size_t, std::size_t>> off_corner_support() const {
    for (std::size_t r = 0; r < size(); ++r)
      for (std::size_t c = 0; c < size(); ++c)
        if (!(r == 0 && c == n_) && !at(r, c).is_zero()) return std::make_pair(r, c);
    return std::nullopt;
  }

  ConnectionMatrix& operator+=(const ConnectionMatrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
  }
  ConnectionMatrix& operator-=(const ConnectionMatrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
    return *this;
  }
  friend ConnectionMatrix operator+(ConnectionMatrix a, const ConnectionMatrix& b) { return a += b; }
  friend ConnectionMatrix operator-(ConnectionMatrix a, const ConnectionMatrix& b) { return a -= b; }
  bool operator==(const ConnectionMatrix& o) const { return n_ == o.n_ && e_ == o.e_; }

  template <class F>
  ConnectionMatrix map(F&& f) const {
    ConnectionMatrix out(n_);
    for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = f(e_[i]);
    return out;
  }

 private:
  void check_same(const ConnectionMatrix& o) const {
    if (o.n_ != n_) throw Error(ErrorKind::ArityMismatch, "connection matrices of different sizes");
  }
  std::size_t n_ = 0;
  std::vector<Form> e_;
};

inline ConnectionMatrix operator*(const ConnectionMatrix& a, const ConnectionMatrix& b) {
  if (a.arity() != b.arity()) throw Error(ErrorKind::ArityMismatch, "connection matrices of different sizes");
  ConnectionMatrix out(a.arity());
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a.at(r, k).is_zero()) continue;
      for (std::size_t c = 0; c < a.size(); ++c)
        if (!b.at(k, c).is_zero()) out.at(r, c) += wedge(a.at(r, k), b.at(k, c));
    }
  return out;
}

inline ConnectionMatrix bar(const ConnectionMatrix& a) {
  return a.map([](const Form& f) { return bar(f); });
}

inline ConnectionMatrix differential(const GradedLieAlgebra& g, const ConnectionMatrix& a) {
  return a.map([&](const Form& f) { return differential(g, f); });
}

/// mu(A) = dA - bar(A) A.
inline ConnectionMatrix mc_residual(const GradedLieAlgebra& g, const ConnectionMatrix& a) {
  return differential(g, a) - bar(a) * a;
}

struct FormalCheck {
  bool formal = false;
  Form tau;  // residual at the corner
  std::optional<std::pair<std::size_t, std::size_t>> violation;  // 0-based matrix position
};

inline FormalCheck is_formal_connection(const GradedLieAlgebra& g, const ConnectionMatrix& a) {
  if (!a.strictly_upper()) throw Error(ErrorKind::InvalidIndex, "connection matrix is not strictly upper triangular");
  ConnectionMatrix mu = mc_residual(g, a);
  FormalCheck out;
  out.violation = mu.off_corner_support();
  out.formal = !out.violation;
  out.tau = mu.at(0, a.arity());
  return out;
}

/// c(A) = sum_{r=1}^{n-1} bar(a(1,r)) a(r+1,n), without any verification.
inline Form related_cocycle_unchecked(const ConnectionMatrix& a) {
  Form c;
  const std::size_t n = a.arity();
  for (std::size_t r = 1; r + 1 <= n; ++r) c += wedge(bar(a.a(1, r)), a.a(r + 1, n));
  return c;
}

/// Reason the matrix is not a defining system, or nullopt.
inline std::optional<std::string> defining_system_problem(const GradedLieAlgebra& g, const ConnectionMatrix& a) {
  if (a.arity() < 2) return "arity below 2";
  if (!a.strictly_upper()) return "not strictly upper triangular";
  if (!a.a(1, a.arity()).is_zero()) return "corner entry is not zero";
  auto check = is_formal_connection(g, a);
  if (!check.formal) {
    auto [r, c] = *check.violation;
    return "Maurer-Cartan equation fails at a(" + std::to_string(r + 1) + "," + std::to_string(c) + ")";
  }
  return std::nullopt;
}

inline Form related_cocycle(const GradedLieAlgebra& g, const ConnectionMatrix& a) {
  if (auto p = defining_system_problem(g, a)) throw Error(ErrorKind::Unverified, "not a defining system: " + *p);
  return related_cocycle_unchecked(a);
}

/// Invertible upper triangular matrix over Q.
class ScalarTriangular {
 public:
  explicit ScalarTriangular(std::size_t size) : size_(size), m_(size * size, Rational(0)) {
    for (std::size_t i = 0; i < size; ++i) m_[i * size + i] = 1;
  }
  static ScalarTriangular diagonal(const std::vector<Rational>& d) {
    ScalarTriangular c(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) c.at(i, i) = d[i];
    return c;
  }

  std::size_t size() const { return size_; }
  Rational& at(std::size_t r, std::size_t c) { return m_.at(r * size_ + c); }
  const Rational& at(std::size_t r, std::size_t c) const { return m_.at(r * size_ + c); }

  void validate() const {
    for (std::size_t r = 0; r < size_; ++r) {
      if (at(r, r) == 0) throw Error(ErrorKind::SingularMatrix, "zero on the diagonal");
      for (std::size_t c = 0; c < r; ++c)
        if (at(r, c) != 0) throw Error(ErrorKind::SingularMatrix, "entry below the diagonal");
    }
  }

  ScalarTriangular inverse() const {
    validate();
    ScalarTriangular inv(size_);
    // back substitution column by column
    for (std::size_t c = 0; c < size_; ++c)
      for (std::size_t r = c + 1; r-- > 0;) {
        Rational s = r == c ? Rational(1) : Rational(0);
        for (std::size_t k = r + 1; k <= c; ++k) s -= at(r, k) * inv.at(k, c);
        inv.at(r, c) = s / at(r, r);
      }
    return inv;
  }

 private:
  std::size_t size_;
  std::vector<Rational> m_;
};

/// C^{-1} A C.
inline ConnectionMatrix conjugate(const ConnectionMatrix& a, const ScalarTriangular& c) {
  if (c.size() != a.size()) throw Error(ErrorKind::ArityMismatch, "conjugating matrix has the wrong size");
  ScalarTriangular ci = c.inverse();
  const std::size_t n = a.size();
  ConnectionMatrix ac(a.arity()), out(a.arity());
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k)
      if (!a.at(r, k).is_zero())
        for (std::size_t col = k; col < n; ++col)
          if (c.at(k, col) != 0) ac.at(r, col) += c.at(k, col) * a.at(r, k);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = r; k < n; ++k)
      if (ci.at(r, k) != 0)
        for (std::size_t col = 0; col < n; ++col)
          if (!ac.at(k, col).is_zero()) out.at(r, col) += ci.at(r, k) * ac.at(k, col);
  return out;
}

/// Builds a matrix with the given classes on the second diagonal.
inline ConnectionMatrix with_diagonal(const std::vector<Form>& classes) {
  ConnectionMatrix a(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) a.a(i + 1, i + 1) = classes[i];
  return a;
}

/// Defining system for <e^2, e^1 (2k-3 times), e^2> over m0: first row
/// (-1)^{r+1} e^{r+1}, last column a(i,n) = e^{n-i+2}, zero elsewhere off the
/// second diagonal. Needs cutoff >= 2k+1.
inline ConnectionMatrix two_e2_connection(const GradedLieAlgebra& m0, int k) {
  if (k < 2) throw Error(ErrorKind::InvalidIndex, "k must be >= 2");
  if (m0.cutoff() < 2 * k + 1) throw Error(ErrorKind::CutoffTooSmall, "cutoff must be >= 2k+1");
  const std::size_t n = static_cast<std::size_t>(2 * k - 1);
  std::vector<Form> classes{Form::generator(2)};
  for (std::size_t i = 0; i + 2 < n; ++i) classes.push_back(Form::generator(1));
  classes.push_back(Form::generator(2));
  ConnectionMatrix a = with_diagonal(classes);
  for (std::size_t r = 2; r + 1 <= n; ++r) a.a(1, r) = Form::generator(static_cast<int>(r) + 1, r % 2 ? 1 : -1);
  for (std::size_t i = 2; i + 1 <= n; ++i) a.a(i, n) = Form::generator(static_cast<int>(n - i) + 2);
  if (auto p = defining_system_problem(m0, a)) throw Error(ErrorKind::Unverified, *p);
  return a;
}

/// Defining system for <e^2, e^1 (i1-2 times), omega(tail)> over m0: first row
/// (-1)^{r+1} e^{r+1}, last column D_{-1}^{n-i} omega.
inline ConnectionMatrix omega_tail_connection(const GradedLieAlgebra& m0, int i1, const std::vector<int>& tail) {
  mzero::require_omega_indices(tail);
  if (i1 < 2 || i1 >= tail.front()) throw Error(ErrorKind::InvalidIndex, "need 2 <= i1 < first tail index");
  std::vector<int> full{i1};
  full.insert(full.end(), tail.begin(), tail.end());
  if (mzero::omega_weight(full) > m0.cutoff()) throw Error(ErrorKind::CutoffTooSmall, "cutoff below the product weight");
  const std::size_t n = static_cast<std::size_t>(i1);
  std::vector<Form> classes{Form::generator(2)};
  for (std::size_t i = 0; i + 2 < n; ++i) classes.push_back(Form::generator(1));
  classes.push_back(mzero::omega(tail));
  ConnectionMatrix a = with_diagonal(classes);
  for (std::size_t r = 2; r + 1 <= n; ++r) a.a(1, r) = Form::generator(static_cast<int>(r) + 1, r % 2 ? 1 : -1);
  Form w = classes.back();
  for (std::size_t i = n; i-- > 2;) {
    w = mzero::Dm1(w, m0.cutoff());
    a.a(i, n) = w;
  }
  if (auto p = defining_system_problem(m0, a)) throw Error(ErrorKind::Unverified, *p);
  return a;
}

inline std::string to_string(const ConnectionMatrix& a) {
  std::string s;
  for (std::size_t r = 0; r < a.size(); ++r) {
    s += "[";
    for (std::size_t c = 0; c < a.size(); ++c) s += (c ? ", " : "") + to_string(a.at(r, c));
    s += "]\n";
  }
  return s;
}

}  // namespace massey
