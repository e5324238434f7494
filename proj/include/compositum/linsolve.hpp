#pragma once

// Dense Gauss-Jordan elimination over CycloNum.

#include <vector>

#include "compositum/cyclo.hpp"

namespace compositum {

using Matrix = std::vector<std::vector<CycloNum>>;

/// Reduced row echelon form in place; returns the pivot column of each nonzero row.
inline std::vector<int> row_reduce(Matrix& a) {
  std::vector<int> pivots;
  if (a.empty()) return pivots;
  const int rows = static_cast<int>(a.size()), cols = static_cast<int>(a[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const CycloNum inv = a[r][c].inverse();
    for (int j = c; j < cols; ++j)
      if (!a[r][j].is_zero()) a[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      const CycloNum f = a[i][c];
      for (int j = c; j < cols; ++j)
        if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

/// Basis of { x : A x = 0 }.
inline std::vector<std::vector<CycloNum>> kernel(Matrix a, int cols) {
  std::vector<int> pivots = row_reduce(a);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<CycloNum>> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<CycloNum> x(cols);
    x[f] = CycloNum(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -a[r][f];
    basis.push_back(std::move(x));
  }
  return basis;
}

/// Determinant by elimination.
inline CycloNum determinant(Matrix a) {
  const std::size_t n = a.size();
  CycloNum det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c].is_zero()) ++p;
    if (p == n) return CycloNum();
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    const CycloNum inv = a[c][c].inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c].is_zero()) continue;
      const CycloNum f = a[i][c] * inv;
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

}  // namespace compositum
