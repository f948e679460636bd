#pragma once

// Exact linear algebra over Q on sparse rows. Everything here is exact; there
// is no floating point anywhere in the library.

#include <massey/core.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace massey {

using SparseVector = std::map<std::size_t, Rational>;
using DenseVector = std::vector<Rational>;

inline void axpy(SparseVector& y, const Rational& a, const SparseVector& x) {
  if (a == 0) return;
  for (const auto& [i, v] : x) {
    auto [it, inserted] = y.try_emplace(i, a * v);
    if (!inserted) {
      it->second += a * v;
      if (it->second == 0) y.erase(it);
    }
  }
}

inline SparseVector to_sparse(const DenseVector& v) {
  SparseVector s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) s.emplace(i, v[i]);
  return s;
}

inline DenseVector to_dense(const SparseVector& v, std::size_t n) {
  DenseVector d(n, Rational(0));
  for (const auto& [i, x] : v) d.at(i) = x;
  return d;
}

/// Sparse row-major matrix. Rows and columns are indexed by the positions of
/// slice monomials in their lexicographic basis order.
struct SliceMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<SparseVector> data;

  SliceMatrix() = default;
  SliceMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r) {}

  static SliceMatrix identity(std::size_t n) {
    SliceMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.data[i].emplace(i, 1);
    return m;
  }

  void add(std::size_t r, std::size_t c, const Rational& v) {
    if (v == 0) return;
    auto [it, inserted] = data.at(r).try_emplace(c, v);
    if (!inserted) {
      it->second += v;
      if (it->second == 0) data[r].erase(it);
    }
  }

  Rational at(std::size_t r, std::size_t c) const {
    auto it = data.at(r).find(c);
    return it == data[r].end() ? Rational(0) : it->second;
  }

  DenseVector apply(const DenseVector& x) const {
    DenseVector y(rows, Rational(0));
    for (std::size_t r = 0; r < rows; ++r)
      for (const auto& [c, v] : data[r]) y[r] += v * x.at(c);
    return y;
  }

  SliceMatrix transposed() const {
    SliceMatrix t(cols, rows);
    for (std::size_t r = 0; r < rows; ++r)
      for (const auto& [c, v] : data[r]) t.data[c].emplace(r, v);
    return t;
  }
};

/// Incrementally maintained reduced row echelon basis of a subspace. The pivot
/// of each row is its smallest index and carries coefficient 1.
class RowReducer {
 public:
  /// Reduces v fully against the current basis.
  SparseVector reduce(SparseVector v) const {
    // Pivots are processed in increasing order; a basis row only touches
    // indices >= its pivot and is zero on all other pivots.
    for (const auto& [p, row] : rows_) {
      auto it = v.find(p);
      if (it == v.end()) continue;
      Rational a = -it->second;
      axpy(v, a, row);
    }
    return v;
  }

  bool contains(const SparseVector& v) const { return reduce(v).empty(); }

  /// Adds v to the span; returns false when v was already dependent.
  bool insert(const SparseVector& v) {
    SparseVector r = reduce(v);
    if (r.empty()) return false;
    std::size_t p = r.begin()->first;
    Rational lead = r.begin()->second;
    for (auto& [i, x] : r) x /= lead;
    for (auto& [q, row] : rows_) {
      auto it = row.find(p);
      if (it != row.end()) {
        Rational a = -it->second;
        axpy(row, a, r);
      }
    }
    rows_.emplace(p, std::move(r));
    return true;
  }

  std::size_t dimension() const { return rows_.size(); }
  const std::map<std::size_t, SparseVector>& rows() const { return rows_; }

  std::vector<SparseVector> basis() const {
    std::vector<SparseVector> out;
    for (const auto& [p, r] : rows_) out.push_back(r);
    return out;
  }

 private:
  std::map<std::size_t, SparseVector> rows_;
};

struct Echelon {
  std::vector<SparseVector> rows;     // reduced, pivot coefficient 1
  std::vector<std::size_t> pivots;    // ascending
};

inline Echelon rref(const SliceMatrix& m) {
  RowReducer red;
  for (const auto& r : m.data) red.insert(r);
  Echelon e;
  for (const auto& [p, r] : red.rows()) {
    e.pivots.push_back(p);
    e.rows.push_back(r);
  }
  return e;
}

/// Rank by fraction-free (Bareiss) elimination on integer-scaled rows.
inline std::size_t rank(const SliceMatrix& m) {
  if (m.rows == 0 || m.cols == 0) return 0;
  std::vector<std::vector<mpz_class>> a(m.rows, std::vector<mpz_class>(m.cols, 0));
  for (std::size_t r = 0; r < m.rows; ++r) {
    mpz_class l = 1;
    for (const auto& [c, v] : m.data[r]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    for (const auto& [c, v] : m.data[r]) a[r][c] = v.get_num() * (l / v.get_den());
  }
  std::size_t rk = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < m.cols && rk < m.rows; ++c) {
    std::size_t piv = rk;
    while (piv < m.rows && a[piv][c] == 0) ++piv;
    if (piv == m.rows) continue;
    std::swap(a[piv], a[rk]);
    for (std::size_t r = rk + 1; r < m.rows; ++r) {
      for (std::size_t j = c + 1; j < m.cols; ++j) {
        a[r][j] = a[rk][c] * a[r][j] - a[r][c] * a[rk][j];
        mpz_divexact(a[r][j].get_mpz_t(), a[r][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[r][c] = 0;
    }
    prev = a[rk][c];
    ++rk;
  }
  return rk;
}

/// Null space basis, one vector per free column, in reduced echelon form
/// (each vector has a 1 on its free column and 0 on the other free columns).
inline std::vector<DenseVector> kernel_basis(const SliceMatrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<DenseVector> out;
  for (std::size_t f = 0; f < m.cols; ++f) {
    if (is_pivot[f]) continue;
    DenseVector v(m.cols, Rational(0));
    v[f] = 1;
    for (std::size_t k = 0; k < e.rows.size(); ++k) {
      auto it = e.rows[k].find(f);
      if (it != e.rows[k].end()) v[e.pivots[k]] = -it->second;
    }
    out.push_back(std::move(v));
  }
  return out;
}

struct Solution {
  DenseVector particular;             // free variables set to zero
  std::vector<DenseVector> kernel;
};

/// Solves m x = target exactly. Returns nullopt when inconsistent.
inline std::optional<Solution> solve(const SliceMatrix& m, const DenseVector& target) {
  if (target.size() != m.rows) throw Error(ErrorKind::ArityMismatch, "solve: target length mismatch");
  // Augmented column m.cols carries the right-hand side.
  RowReducer red;
  for (std::size_t r = 0; r < m.rows; ++r) {
    SparseVector row = m.data[r];
    if (target[r] != 0) row.emplace(m.cols, target[r]);
    red.insert(row);
  }
  Solution s;
  s.particular.assign(m.cols, Rational(0));
  for (const auto& [p, row] : red.rows()) {
    if (p == m.cols) return std::nullopt;
    auto it = row.find(m.cols);
    if (it != row.end()) s.particular[p] = it->second;
  }
  s.kernel = kernel_basis(m);
  return s;
}

}  // namespace massey
