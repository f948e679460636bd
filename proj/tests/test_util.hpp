#pragma once

#include <massey/forms.hpp>

#include <ostream>
#include <random>

namespace massey {

inline void PrintTo(const Form& f, std::ostream* os) { *os << to_string(f); }

inline Rational rat(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// Random combination of the monomials of slice (q, k); zero above the cutoff.
inline Form random_form(std::mt19937& rng, const GradedLieAlgebra& g, int q, int k) {
  Form f;
  if (k > g.cutoff()) return f;
  for (const auto& m : slice_basis(g, q, k)) {
    int c = static_cast<int>(rng() % 7) - 3;
    if (c != 0) f.add_sorted(m, rat(c, static_cast<long>(1 + rng() % 3)));
  }
  return f;
}

}  // namespace massey
