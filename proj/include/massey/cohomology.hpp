#pragma once

// Weight-graded Chevalley–Eilenberg cohomology with trivial coefficients,
// computed slice by slice with exact linear algebra.

#include <massey/forms.hpp>
#include <massey/linalg.hpp>
#include <massey/mzero.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace massey {

struct Slice {
  int q = 0;
  int k = 0;
  std::vector<Monomial> basis;
  std::map<Monomial, std::size_t> position;
};

struct CohomologySlice {
  int q = 0;
  int k = 0;
  std::vector<Form> cocycles;        // kernel basis of d on the slice
  std::vector<Form> coboundaries;    // echelon basis of the image of d
  std::vector<Form> representatives; // one cocycle per class
  std::size_t dimension() const { return representatives.size(); }
};

struct ClassCoordinates {
  int q = 0;
  int k = 0;
  DenseVector coords;  // over CohomologySlice::representatives
  bool is_zero() const {
    for (const auto& c : coords)
      if (c != 0) return false;
    return true;
  }
};

struct Preimage {
  Form particular;
  std::vector<Form> kernel;  // closed forms of the same (degree, weight) slices
};

enum class AlgebraFlavor { Custom, M0, GrM0, L1 };

/// Cochain complex of a truncated algebra with per-slice caches. The caches
/// are guarded by a mutex; all public member functions are safe to call
/// concurrently.
class CochainComplex {
 public:
  explicit CochainComplex(GradedLieAlgebra g) : g_(std::move(g)) {
    if (auto p = detect_preset(g_)) flavor_ = *p == Preset::M0 ? AlgebraFlavor::M0 : AlgebraFlavor::L1;
    else if (g_.cutoff() >= 1 && g_.dimension() >= 3 && g_.dimension() == static_cast<std::size_t>(g_.cutoff() + 1)) {
      try {
        if (associated_graded(load_preset(Preset::M0, g_.cutoff() + 1)) == g_) flavor_ = AlgebraFlavor::GrM0;
      } catch (const Error&) {
      }
    }
  }

  const GradedLieAlgebra& algebra() const { return g_; }
  AlgebraFlavor flavor() const { return flavor_; }

  const Slice& slice(int q, int k) const {
    std::lock_guard lock(mu_);
    return slice_locked(q, k);
  }

  /// Matrix of d from slice (q, k) to slice (q+1, k).
  const SliceMatrix& d_matrix(int q, int k) const {
    std::lock_guard lock(mu_);
    return d_matrix_locked(q, k);
  }

  DenseVector coords(const Form& f, int q, int k) const {
    const Slice& s = slice(q, k);
    DenseVector v(s.basis.size(), Rational(0));
    for (const auto& [m, c] : f.terms()) {
      auto it = s.position.find(m);
      if (it == s.position.end())
        throw Error(ErrorKind::NotApplicable, "form term " + to_string(m) + " is outside slice (" +
                                                  std::to_string(q) + "," + std::to_string(k) + ")");
      v[it->second] = c;
    }
    return v;
  }

  Form form_of(const DenseVector& v, int q, int k) const {
    const Slice& s = slice(q, k);
    Form f;
    for (std::size_t i = 0; i < v.size(); ++i) f.add_sorted(s.basis[i], v[i]);
    return f;
  }

  Form form_of(const SparseVector& v, int q, int k) const {
    const Slice& s = slice(q, k);
    Form f;
    for (const auto& [i, c] : v) f.add_sorted(s.basis.at(i), c);
    return f;
  }

  std::size_t betti(int q, int k) const {
    const Slice& s = slice(q, k);
    std::size_t z = s.basis.size() - rank(d_matrix(q, k));
    std::size_t b = q > 0 ? rank(d_matrix(q - 1, k)) : 0;
    return z - b;
  }

  const CohomologySlice& cohomology(int q, int k) const {
    std::lock_guard lock(mu_);
    auto it = cohomology_.find({q, k});
    if (it != cohomology_.end()) return it->second;
    return cohomology_.emplace(std::make_pair(q, k), build_cohomology(q, k)).first->second;
  }

  /// Solves d x = c for a closed form c (any mix of degrees and weights).
  std::optional<Preimage> coboundary_preimage(const Form& c) const {
    Preimage out;
    if (!differential(g_, c).is_zero()) throw Error(ErrorKind::NotACocycle, "coboundary_preimage: form is not closed");
    std::map<std::pair<int, int>, Form> parts;
    for (const auto& [m, a] : c.terms()) parts[{static_cast<int>(m.size()), weight(g_, m)}].add_sorted(m, a);
    for (const auto& [key, part] : parts) {
      auto [deg, w] = key;
      if (w > g_.cutoff()) throw Error(ErrorKind::CutoffTooSmall, "form weight exceeds cutoff");
      if (deg == 0) return std::nullopt;
      const SliceMatrix& d = d_matrix(deg - 1, w);
      auto sol = solve(d, coords(part, deg, w));
      if (!sol) return std::nullopt;
      out.particular += form_of(sol->particular, deg - 1, w);
      for (const auto& kv : sol->kernel) out.kernel.push_back(form_of(kv, deg - 1, w));
    }
    return out;
  }

  bool is_exact(const Form& c) const { return coboundary_preimage(c).has_value(); }

  /// Coordinates of [c] in the representative basis of slice (q, k).
  ClassCoordinates class_coordinates(const Form& c, int q, int k) const {
    if (!differential(g_, c).is_zero()) throw Error(ErrorKind::NotACocycle, "class_coordinates: form is not closed");
    const CohomologySlice& h = cohomology(q, k);
    const Slice& s = slice(q, k);
    SliceMatrix m(s.basis.size(), h.representatives.size() + h.coboundaries.size());
    std::size_t col = 0;
    for (const auto* group : {&h.representatives, &h.coboundaries})
      for (const auto& f : *group) {
        DenseVector v = coords(f, q, k);
        for (std::size_t r = 0; r < v.size(); ++r) m.add(r, col, v[r]);
        ++col;
      }
    auto sol = solve(m, coords(c, q, k));
    if (!sol) throw Error(ErrorKind::NotACocycle, "class_coordinates: form is outside the cocycle space");
    ClassCoordinates cc{q, k, DenseVector(sol->particular.begin(),
                                          sol->particular.begin() + static_cast<std::ptrdiff_t>(h.representatives.size()))};
    return cc;
  }

  /// Coordinates of [c] for a closed homogeneous-degree form, split by weight.
  std::map<int, ClassCoordinates> class_coordinates_by_weight(const Form& c) const {
    std::map<int, ClassCoordinates> out;
    for (const auto& [w, part] : weight_components(g_, c)) {
      int q = part.degree();
      out.emplace(w, class_coordinates(part, q, w));
    }
    return out;
  }

  /// Cocycles preferred as class representatives: omega cocycles for m0 (and
  /// its gr-graded form), the named generators g^q_± of L1 for q <= 2.
  std::vector<Form> preferred_cocycles(int q, int k) const {
    std::vector<Form> out;
    switch (flavor_) {
      case AlgebraFlavor::M0:
        if (q == 1 && (k == 1 || k == 2)) out.push_back(Form::generator(k));
        for (const auto& idx : mzero::omega_indices(q, k)) out.push_back(mzero::omega(idx));
        break;
      case AlgebraFlavor::GrM0:
        if (q == 1 && k == 1) {
          out.push_back(Form::generator(1));
          out.push_back(Form::generator(2));
        }
        for (const auto& idx : mzero::omega_indices(q, k + q)) out.push_back(mzero::omega(idx));
        break;
      case AlgebraFlavor::L1:
        if (q == 1 && (k == 1 || k == 2)) out.push_back(Form::generator(k));
        if (q == 2 && k == 5) out.push_back(Form::monomial({1, 4}));
        if (q == 2 && k == 7) out.push_back(Form::monomial({2, 5}) - Form::monomial({3, 4}, 3));
        break;
      case AlgebraFlavor::Custom:
        break;
    }
    return out;
  }

 private:
  const Slice& slice_locked(int q, int k) const {
    auto it = slices_.find({q, k});
    if (it != slices_.end()) return it->second;
    Slice s;
    s.q = q;
    s.k = k;
    s.basis = slice_basis(g_, q, k);
    for (std::size_t i = 0; i < s.basis.size(); ++i) s.position.emplace(s.basis[i], i);
    return slices_.emplace(std::make_pair(q, k), std::move(s)).first->second;
  }

  const SliceMatrix& d_matrix_locked(int q, int k) const {
    auto it = dmats_.find({q, k});
    if (it != dmats_.end()) return it->second;
    const Slice& src = slice_locked(q, k);
    const Slice& dst = slice_locked(q + 1, k);
    SliceMatrix m(dst.basis.size(), src.basis.size());
    for (std::size_t c = 0; c < src.basis.size(); ++c) {
      Form dm = differential_of_monomial(g_, src.basis[c]);
      for (const auto& [mono, a] : dm.terms()) m.add(dst.position.at(mono), c, a);
    }
    return dmats_.emplace(std::make_pair(q, k), std::move(m)).first->second;
  }

  CohomologySlice build_cohomology(int q, int k) const {
    CohomologySlice h;
    h.q = q;
    h.k = k;
    const SliceMatrix& d = d_matrix_locked(q, k);
    auto to_form = [&](const SparseVector& v) {
      const Slice& s = slice_locked(q, k);
      Form f;
      for (const auto& [i, c] : v) f.add_sorted(s.basis.at(i), c);
      return f;
    };
    for (const auto& z : kernel_basis(d)) h.cocycles.push_back(to_form(to_sparse(z)));
    RowReducer base;
    if (q > 0) {
      const SliceMatrix& prev = d_matrix_locked(q - 1, k);
      SliceMatrix t = prev.transposed();  // rows = images of basis (q-1)-forms
      for (const auto& row : t.data) base.insert(row);
      for (const auto& b : base.basis()) h.coboundaries.push_back(to_form(b));
    }
    const Slice& s = slice_locked(q, k);
    auto vec_of = [&](const Form& f) {
      SparseVector v;
      for (const auto& [m, c] : f.terms()) v.emplace(s.position.at(m), c);
      return v;
    };
    for (const auto& f : preferred_cocycles(q, k)) {
      if (!differential(g_, f).is_zero()) continue;
      bool inside = true;
      for (const auto& [m, c] : f.terms()) inside = inside && s.position.count(m);
      if (inside && base.insert(vec_of(f))) h.representatives.push_back(f);
    }
    RowReducer extra;
    for (const auto& z : h.cocycles) extra.insert(base.reduce(vec_of(z)));
    for (const auto& r : extra.basis()) h.representatives.push_back(to_form(r));
    return h;
  }

  GradedLieAlgebra g_;
  AlgebraFlavor flavor_ = AlgebraFlavor::Custom;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, Slice> slices_;
  mutable std::map<std::pair<int, int>, SliceMatrix> dmats_;
  mutable std::map<std::pair<int, int>, CohomologySlice> cohomology_;
};

inline std::size_t betti(const GradedLieAlgebra& g, int q, int k) { return CochainComplex(g).betti(q, k); }

/// P_q(k): partitions of k into exactly q positive parts.
inline std::uint64_t partition_count(int q, int k) {
  if (q < 0 || k < 0) return 0;
  // p[j][n] = p[j-1][n-1] + p[j][n-j]
  std::vector<std::vector<std::uint64_t>> p(static_cast<std::size_t>(q) + 1,
                                            std::vector<std::uint64_t>(static_cast<std::size_t>(k) + 1, 0));
  p[0][0] = 1;
  for (int j = 1; j <= q; ++j)
    for (int n = 1; n <= k; ++n)
      p[j][n] = p[j - 1][n - 1] + (n >= j ? p[j][n - j] : 0);
  return p[q][k];
}

struct ReportRow {
  int q = 0;
  int k = 0;
  std::int64_t computed = 0;
  std::int64_t expected = 0;
  bool match() const { return computed == expected; }
};

struct DimensionReport {
  std::string name;
  std::vector<ReportRow> rows;
  bool all_match() const {
    for (const auto& r : rows)
      if (!r.match()) return false;
    return true;
  }
};

inline bool is_pentagonal_weight(int q, int k) { return 2 * k == 3 * q * q + q || 2 * k == 3 * q * q - q; }

/// dim H^q_k(L1) against the pentagonal-number pattern, 1 <= q <= max_q,
/// 1 <= k <= max_k.
inline DimensionReport check_goncharova(int max_q, int max_k) {
  if (2 * max_k < 3 * max_q * max_q + max_q)
    throw Error(ErrorKind::CutoffTooSmall, "weight range must reach (3q^2+q)/2 for the largest q");
  CochainComplex cx(load_preset(Preset::L1, std::max(max_k, 2)));
  DimensionReport rep{"goncharova", {}};
  for (int q = 1; q <= max_q; ++q)
    for (int k = 1; k <= max_k; ++k)
      rep.rows.push_back({q, k, static_cast<std::int64_t>(cx.betti(q, k)), is_pentagonal_weight(q, k) ? 1 : 0});
  return rep;
}

/// dim H^q_{k+q(q+1)/2}(m0) against P_q(k) - P_q(k-1), k >= 1, second grading
/// up to max_weight. Rows report the second grading in column k.
inline DimensionReport check_m0_dimensions(int max_q, int max_weight, int cutoff = 0) {
  if (cutoff == 0) cutoff = std::max(max_weight, 2);
  if (cutoff < max_weight) throw Error(ErrorKind::CutoffTooSmall, "cutoff below the requested weight range");
  CochainComplex cx(load_preset(Preset::M0, cutoff));
  DimensionReport rep{"m0dims", {}};
  for (int q = 1; q <= max_q; ++q) {
    const int shift = q * (q + 1) / 2;
    for (int k = 1; k + shift <= max_weight; ++k) {
      auto expected = static_cast<std::int64_t>(partition_count(q, k)) - static_cast<std::int64_t>(partition_count(q, k - 1));
      rep.rows.push_back({q, k + shift, static_cast<std::int64_t>(cx.betti(q, k + shift)), expected});
    }
  }
  return rep;
}

inline std::string to_csv(const DimensionReport& r) {
  std::string s = "q,k,computed,expected,match\n";
  for (const auto& row : r.rows)
    s += std::to_string(row.q) + "," + std::to_string(row.k) + "," + std::to_string(row.computed) + "," +
         std::to_string(row.expected) + "," + (row.match() ? "true" : "false") + "\n";
  return s;
}

}  // namespace massey
