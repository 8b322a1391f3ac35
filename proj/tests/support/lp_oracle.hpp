// Test-only brute-force LP oracle: enumerates candidate vertices from all
// choices of n active constraints (rows at equality, variables at a bound),
// solves the small linear system, and keeps the best feasible point. Used to
// cross-check the simplex implementation on tiny random programs; it shares
// no code with the production solve path.
#ifndef BILICOVER_TESTS_LP_ORACLE_HPP
#define BILICOVER_TESTS_LP_ORACLE_HPP

#include <cmath>
#include <optional>
#include <vector>

namespace bilicover::testsupport {

struct OracleRow {
  std::vector<double> coeffs;  // dense, length n
  char sense;                  // 'G' or 'L'
  double rhs;
};

struct OracleLp {
  std::vector<double> lower, upper, obj;  // length n, finite bounds
  std::vector<OracleRow> rows;
};

struct OracleAnswer {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> point;
};

// Gaussian elimination with partial pivoting; false if singular.
inline bool solve_dense(std::vector<std::vector<double>> a, std::vector<double> b,
                        std::vector<double>& out) {
  const int n = static_cast<int>(b.size());
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int r = k + 1; r < n; ++r)
      if (std::abs(a[r][k]) > std::abs(a[piv][k])) piv = r;
    if (std::abs(a[piv][k]) < 1e-11) return false;
    std::swap(a[piv], a[k]);
    std::swap(b[piv], b[k]);
    for (int r = k + 1; r < n; ++r) {
      double f = a[r][k] / a[k][k];
      if (f == 0.0) continue;
      for (int c = k; c < n; ++c) a[r][c] -= f * a[k][c];
      b[r] -= f * b[k];
    }
  }
  out.assign(n, 0.0);
  for (int k = n - 1; k >= 0; --k) {
    double acc = b[k];
    for (int c = k + 1; c < n; ++c) acc -= a[k][c] * out[c];
    out[k] = acc / a[k][k];
  }
  return true;
}

inline bool oracle_point_feasible(const OracleLp& lp, const std::vector<double>& x,
                                  double tol = 1e-7) {
  const int n = static_cast<int>(lp.obj.size());
  for (int i = 0; i < n; ++i)
    if (x[i] < lp.lower[i] - tol || x[i] > lp.upper[i] + tol) return false;
  for (const OracleRow& row : lp.rows) {
    double act = 0.0;
    for (int i = 0; i < n; ++i) act += row.coeffs[i] * x[i];
    if (row.sense == 'G' && act < row.rhs - tol) return false;
    if (row.sense == 'L' && act > row.rhs + tol) return false;
  }
  return true;
}

// Minimize obj over the polytope. Bounds must be finite so the feasible
// region, when nonempty, has a vertex.
inline OracleAnswer vertex_enum_solve(const OracleLp& lp) {
  const int n = static_cast<int>(lp.obj.size());
  const int m = static_cast<int>(lp.rows.size());
  const int ncons = m + 2 * n;  // rows, lower bounds, upper bounds
  OracleAnswer best;

  std::vector<int> pick(n, 0);
  // enumerate all subsets of size n from ncons constraints
  std::vector<int> comb(n);
  for (int i = 0; i < n; ++i) comb[i] = i;
  auto advance = [&]() {
    int i = n - 1;
    while (i >= 0 && comb[i] == ncons - n + i) --i;
    if (i < 0) return false;
    ++comb[i];
    for (int k = i + 1; k < n; ++k) comb[k] = comb[k - 1] + 1;
    return true;
  };
  if (ncons < n) return best;

  do {
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    std::vector<double> b(n, 0.0);
    for (int k = 0; k < n; ++k) {
      int c = comb[k];
      if (c < m) {
        a[k] = lp.rows[c].coeffs;
        b[k] = lp.rows[c].rhs;
      } else if (c < m + n) {
        a[k][c - m] = 1.0;
        b[k] = lp.lower[c - m];
      } else {
        a[k][c - m - n] = 1.0;
        b[k] = lp.upper[c - m - n];
      }
    }
    std::vector<double> x;
    if (!solve_dense(a, b, x)) continue;
    if (!oracle_point_feasible(lp, x)) continue;
    double z = 0.0;
    for (int i = 0; i < n; ++i) z += lp.obj[i] * x[i];
    if (!best.feasible || z < best.objective) {
      best.feasible = true;
      best.objective = z;
      best.point = x;
    }
  } while (advance());
  return best;
}

}  // namespace bilicover::testsupport

#endif
