#pragma once

#include <massey/cohomology.hpp>

#include <map>
#include <vector>

namespace massey {

/// Whether d x = c has a 1-form solution, by a dense solve over all e^k.
inline bool corner_solvable(const GradedLieAlgebra& g, const Form& c) {
  std::map<Monomial, std::size_t> row;
  std::vector<Form> cols;
  for (const auto& x : g.generators()) cols.push_back(differential(g, Form::generator(x.index)));
  for (const auto& f : cols)
    for (const auto& [m, a] : f.terms()) row.emplace(m, row.size());
  for (const auto& [m, a] : c.terms())
    if (!row.count(m)) return false;
  SliceMatrix mat(row.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [m, a] : cols[j].terms()) mat.add(row.at(m), j, a);
  DenseVector rhs(row.size(), Rational(0));
  for (const auto& [m, a] : c.terms()) rhs[row.at(m)] = a;
  return solve(mat, rhs).has_value();
}

}  // namespace massey
