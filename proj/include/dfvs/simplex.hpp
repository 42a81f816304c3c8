#pragma once

#include <stdexcept>
#include <vector>

#include "dfvs/rational.hpp"

namespace dfvs {

// Dense primal simplex with Bland's rule for
//   max d.z   s.t.  A z <= b,  z >= 0,   b >= 0.
// T is mpq_class (exact) or double (tol > 0).
template <class T>
struct SimplexResult {
  T objective{};
  std::vector<T> z;      // optimal variables
  std::vector<T> duals;  // one per constraint row
};

template <class T>
SimplexResult<T> simplex_max(const std::vector<std::vector<T>>& A,
                             const std::vector<T>& b, const std::vector<T>& d,
                             T tol = T(0)) {
  size_t m = A.size(), n = d.size();
  std::vector<std::vector<T>> tab(m + 1, std::vector<T>(n + m + 1, T(0)));
  for (size_t j = 0; j < n; ++j) tab[0][j] = -d[j];
  for (size_t i = 0; i < m; ++i) {
    if (b[i] < T(0)) throw std::invalid_argument("simplex: negative rhs");
    for (size_t j = 0; j < n; ++j) tab[i + 1][j] = A[i][j];
    tab[i + 1][n + i] = T(1);
    tab[i + 1][n + m] = b[i];
  }
  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) basis[i] = n + i;

  size_t guard = 0, guard_cap = 50000 + 200 * (n + m);
  while (true) {
    if (++guard > guard_cap) throw std::runtime_error("simplex: pivot cap");
    size_t enter = n + m;
    for (size_t j = 0; j < n + m; ++j)
      if (tab[0][j] < -tol) {
        enter = j;
        break;  // Bland: smallest index
      }
    if (enter == n + m) break;
    size_t leave = m + 1;
    for (size_t i = 1; i <= m; ++i) {
      if (!(tab[i][enter] > tol)) continue;
      if (leave == m + 1) {
        leave = i;
        continue;
      }
      T lhs = tab[i][n + m] * tab[leave][enter];
      T rhs = tab[leave][n + m] * tab[i][enter];
      if (lhs < rhs || (lhs == rhs && basis[i - 1] < basis[leave - 1]))
        leave = i;
    }
    if (leave == m + 1) throw std::runtime_error("simplex: unbounded");

    T piv = tab[leave][enter];
    for (auto& x : tab[leave]) x /= piv;
    for (size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      T f = tab[i][enter];
      if (f == T(0)) continue;
      for (size_t j = 0; j <= n + m; ++j) tab[i][j] -= f * tab[leave][j];
    }
    basis[leave - 1] = enter;
  }

  SimplexResult<T> res;
  res.objective = tab[0][n + m];
  res.z.assign(n, T(0));
  for (size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.z[basis[i]] = tab[i + 1][n + m];
  res.duals.assign(m, T(0));
  for (size_t i = 0; i < m; ++i) res.duals[i] = tab[0][n + i];
  return res;
}

}  // namespace dfvs
