#pragma once
// Network modification algebra: node contraction, expansion by a pendant
// branch, branch augmentation, and the incremental cofactor/impedance
// formulas that avoid recomputing from scratch.
#include "netkit/solve.hpp"

namespace netkit {

// Node index of p after contracting the pair (j, k). The merged node keeps
// the smaller of the two labels; everything above the larger label shifts
// down by one.
inline int contract_index(int j, int k, int p) {
  int keep = std::min(j, k), drop = std::max(j, k);
  if (p == drop) return keep;
  return shifted_index(drop, p);
}

// Merge nodes j and k: add row k into row j, then column k into column j,
// then delete row and column k (with j the smaller label).
template <class T>
Matrix<T> contract(const Matrix<T>& y, int j, int k) {
  int n = y.rows();
  if (j == k) throw std::invalid_argument("cannot contract a node with itself");
  if (j < 1 || k < 1 || j > n || k > n) throw std::out_of_range("node out of range");
  if (j > k) std::swap(j, k);
  Matrix<T> a = y;
  for (int c = 0; c < n; ++c) a(j - 1, c) += a(k - 1, c);
  for (int r = 0; r < n; ++r) a(r, j - 1) += a(r, k - 1);
  return drop_rows_cols(a, {k}, {k});
}

// Attach a new node n+1 to node k through a branch of admittance yplus.
template <class T>
Matrix<T> expand(const Matrix<T>& y, int k, const T& yplus) {
  int n = y.rows();
  if (k < 1 || k > n) throw std::out_of_range("node out of range");
  Matrix<T> out(n + 1, n + 1);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out(r, c) = y(r, c);
  out(k - 1, k - 1) += yplus;
  out(n, n) = yplus;
  out(k - 1, n) = -yplus;
  out(n, k - 1) = -yplus;
  return out;
}

// Add a branch of admittance yplus between existing nodes j and k.
template <class T>
Matrix<T> augment(const Matrix<T>& y, int j, int k, const T& yplus) {
  int n = y.rows();
  if (j == k) throw std::invalid_argument("augmentation needs two distinct nodes");
  if (j < 1 || k < 1 || j > n || k > n) throw std::out_of_range("node out of range");
  Matrix<T> out = y;
  out(j - 1, j - 1) += yplus;
  out(k - 1, k - 1) += yplus;
  out(j - 1, k - 1) -= yplus;
  out(k - 1, j - 1) -= yplus;
  return out;
}

// Transfer impedance of the network after contracting (j, k), computed from
// the original network only. All node arguments refer to original labels.
template <class T>
T contracted_transfer_impedance(const Matrix<T>& y, int p, int q, int r, int s, int j, int k) {
  T zjk = driving_point_impedance(y, j, k);
  if (scalar_traits<T>::is_zero(zjk)) throw SingularNetwork();
  return transfer_impedance(y, p, q, r, s) -
         transfer_impedance(y, p, q, j, k) * transfer_impedance(y, r, s, j, k) / zjk;
}

template <class T>
T contracted_impedance(const Matrix<T>& y, int p, int q, int j, int k) {
  return contracted_transfer_impedance(y, p, q, p, q, j, k);
}

// Common first cofactor after adding yplus between j and k.
template <class T>
T augmented_common_cofactor(const Matrix<T>& y, int j, int k, const T& yplus) {
  return common_cofactor(y) + yplus * cofactor2(y, j, k, j, k);
}

// Second cofactor after adding yplus between j and k, from original cofactors.
template <class T>
T augmented_second_cofactor(const Matrix<T>& y, int p, int q, int r, int s, int j, int k,
                            const T& yplus) {
  T c = common_cofactor(y);
  if (scalar_traits<T>::is_zero(c)) throw SingularNetwork();
  return cofactor2(y, p, q, r, s) +
         (yplus / c) * (cofactor2(y, p, q, r, s) * cofactor2(y, j, k, j, k) -
                        cofactor2(y, p, q, j, k) * cofactor2(y, r, s, j, k));
}

template <class T>
T augmented_transfer_impedance(const Matrix<T>& y, int p, int q, int r, int s, int j, int k,
                               const T& yplus) {
  return augmented_second_cofactor(y, p, q, r, s, j, k, yplus) /
         augmented_common_cofactor(y, j, k, yplus);
}

template <class T>
T augmented_impedance(const Matrix<T>& y, int p, int q, int j, int k, const T& yplus) {
  return augmented_transfer_impedance(y, p, q, p, q, j, k, yplus);
}

// Impedance from any original node p to the pendant node added at k.
template <class T>
T expanded_impedance(const Matrix<T>& y, int p, int k, const T& yplus) {
  if (scalar_traits<T>::is_zero(yplus)) throw SingularNetwork();
  if (p == k) return scalar_traits<T>::one() / yplus;
  return scalar_traits<T>::one() / yplus + driving_point_impedance(y, p, k);
}

}  // namespace netkit
