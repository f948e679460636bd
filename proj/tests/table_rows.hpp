#pragma once

#include <massey/massey.hpp>

#include "test_util.hpp"

#include <vector>

namespace massey {

/// Instances of the four table rows of arity n with parameters in [lo, hi].
inline std::vector<std::vector<OneClass>> table_row_instances(std::size_t n, int lo = -2, int hi = 2) {
  std::vector<std::vector<OneClass>> rows;
  for (int a = lo; a <= hi; ++a)
    for (int b = lo; b <= hi; ++b) {
      if (a != 0 || b != 0) rows.emplace_back(n, OneClass{rat(a), rat(b)});
      std::vector<OneClass> B;
      for (std::size_t i = 1; i <= n; ++i) B.push_back({rat(static_cast<long>(i) * a + b), rat(1)});
      if (a != 0) rows.push_back(B);
      for (std::size_t l = 0; l < n && b == lo; ++l) {
        std::vector<OneClass> C(n, OneClass{rat(1), rat(0)});
        C[l] = {rat(a), rat(1)};
        rows.push_back(C);
      }
      if (n % 2 == 0 && n >= 4) {
        std::vector<OneClass> D(n, OneClass{rat(1), rat(0)});
        D.front() = {rat(a), rat(1)};
        D.back() = {rat(b), rat(1)};
        rows.push_back(D);
      }
    }
  return rows;
}

}  // namespace massey
