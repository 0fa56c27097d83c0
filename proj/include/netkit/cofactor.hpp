#pragma once
// First, second and generalized cofactors with the sign bookkeeping for
// deleted rows/columns, plus second-order Laplace expansions and the
// Sylvester cofactor identity as a residual check. All indices are 1-based.
#include "netkit/matrix.hpp"

#include <vector>

namespace netkit {

// Sign exponent for the pair (a,b) of a second cofactor.
inline int sigma(int a, int b) {
  if (a == b) throw std::invalid_argument("sigma requires distinct indices");
  return a < b ? a + b - 1 : a + b;
}

// Index of row/column p after row/column `deleted` has been removed.
inline int shifted_index(int deleted, int p) { return sigma(deleted, p) - deleted; }

template <class T>
T cofactor1(const Matrix<T>& a, int j, int k) {
  if (a.rows() != a.cols()) throw NotSquare();
  if (j < 1 || j > a.rows() || k < 1 || k > a.cols())
    throw std::out_of_range("cofactor index out of range");
  T d = det(drop_rows_cols(a, {j}, {k}));
  return ((j + k) % 2) ? -d : d;
}

template <class T>
T cofactor2(const Matrix<T>& a, int j, int p, int k, int q) {
  if (a.rows() != a.cols()) throw NotSquare();
  int n = a.rows();
  if (j < 1 || j > n || p < 1 || p > n || k < 1 || k > n || q < 1 || q > n)
    throw std::out_of_range("cofactor index out of range");
  if (j == p || k == q) return scalar_traits<T>::zero();
  T d = det(drop_rows_cols(a, {j, p}, {k, q}));
  return ((sigma(j, p) + sigma(k, q)) % 2) ? -d : d;
}

// Generalized cofactor, defined recursively: C with empty index lists is
// det(A); a repeated row or column index gives zero; otherwise
// C_{a1 a2..., b1 b2...}(A) = (-1)^{a1+b1} C_{a2'..., b2'...}(A_(a1,b1)).
template <class T>
T cofactor_gen(const Matrix<T>& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  if (a.rows() != a.cols()) throw NotSquare();
  if (rows.size() != cols.size()) throw std::invalid_argument("cofactor index length mismatch");
  if (rows.empty()) return det(a);
  int n = a.rows();
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 1 || rows[i] > n || cols[i] < 1 || cols[i] > n)
      throw std::out_of_range("cofactor index out of range");
    for (size_t l = i + 1; l < rows.size(); ++l)
      if (rows[i] == rows[l] || cols[i] == cols[l]) return scalar_traits<T>::zero();
  }
  int a1 = rows.front(), b1 = cols.front();
  std::vector<int> rrest, crest;
  for (size_t i = 1; i < rows.size(); ++i) {
    rrest.push_back(shifted_index(a1, rows[i]));
    crest.push_back(shifted_index(b1, cols[i]));
  }
  T d = cofactor_gen(drop_rows_cols(a, {a1}, {b1}), rrest, crest);
  return ((a1 + b1) % 2) ? -d : d;
}

// det(A) by the double sum over second cofactors along rows j and p.
template <class T>
T laplace2_expand(const Matrix<T>& a, int j, int p) {
  if (a.rows() != a.cols()) throw NotSquare();
  if (j == p) throw std::invalid_argument("laplace2 rows must be distinct");
  int n = a.rows();
  T sum = scalar_traits<T>::zero();
  for (int k = 1; k <= n; ++k)
    for (int q = 1; q <= n; ++q) {
      if (q == k) continue;
      sum += a(j - 1, k - 1) * a(p - 1, q - 1) * cofactor2(a, j, p, k, q);
    }
  return sum;
}

// det(A) by the expansion over unordered column pairs k < q.
template <class T>
T laplace2_expand_pairs(const Matrix<T>& a, int j, int p) {
  if (a.rows() != a.cols()) throw NotSquare();
  if (j == p) throw std::invalid_argument("laplace2 rows must be distinct");
  int n = a.rows();
  T sum = scalar_traits<T>::zero();
  for (int k = 1; k <= n; ++k)
    for (int q = k + 1; q <= n; ++q) {
      T m2 = a(j - 1, k - 1) * a(p - 1, q - 1) - a(j - 1, q - 1) * a(p - 1, k - 1);
      sum += m2 * cofactor2(a, j, p, k, q);
    }
  return sum;
}

// LHS - RHS of the Sylvester cofactor identity
//   C_{p a, r b} C_{q a, s b} - C_{p a, s b} C_{q a, r b} = C_{pq a, rs b} C_{a, b}.
template <class T>
T sylvester_residual(const Matrix<T>& a, int p, int q, int r, int s,
                     const std::vector<int>& alpha, const std::vector<int>& beta) {
  if (alpha.size() != beta.size()) throw std::invalid_argument("alpha/beta length mismatch");
  for (int i : alpha)
    if (i == p || i == q) throw std::invalid_argument("row index conflicts with alpha");
  for (int i : beta)
    if (i == r || i == s) throw std::invalid_argument("column index conflicts with beta");
  auto prepend = [](std::initializer_list<int> head, const std::vector<int>& tail) {
    std::vector<int> v(head);
    v.insert(v.end(), tail.begin(), tail.end());
    return v;
  };
  T lhs = cofactor_gen(a, prepend({p}, alpha), prepend({r}, beta)) *
              cofactor_gen(a, prepend({q}, alpha), prepend({s}, beta)) -
          cofactor_gen(a, prepend({p}, alpha), prepend({s}, beta)) *
              cofactor_gen(a, prepend({q}, alpha), prepend({r}, beta));
  T rhs = cofactor_gen(a, prepend({p, q}, alpha), prepend({r, s}, beta)) *
          cofactor_gen(a, alpha, beta);
  return lhs - rhs;
}

}  // namespace netkit
