#pragma once
// Admittance matrix construction (direct stamping and G Y G^T) and
// structural property checks.
#include "netkit/cofactor.hpp"
#include "netkit/netlist.hpp"

#include <string>
#include <vector>

namespace netkit {

struct NonDirectBranch : std::invalid_argument {
  NonDirectBranch() : std::invalid_argument("netlist has unevaluated (g,c,r,l) branches") {}
};

template <class T>
struct Ymat {
  Matrix<T> Y;
  std::vector<std::string> node_names;
  int n() const { return Y.rows(); }
};

template <class T>
Ymat<T> build(const Netlist& nl) {
  int n = nl.n();
  Ymat<T> out{Matrix<T>(n, n), nl.nodes};
  for (const auto& b : nl.branches) {
    if (b.kind != BranchKind::Direct) throw NonDirectBranch();
    T y = scalar_traits<T>::from_value(b.y);
    int j = b.head - 1, k = b.tail - 1;
    out.Y(j, j) += y;
    out.Y(k, k) += y;
    out.Y(j, k) -= y;
    out.Y(k, j) -= y;
  }
  return out;
}

template <class T>
Ymat<T> build_via_incidence(const Netlist& nl) {
  for (const auto& b : nl.branches)
    if (b.kind != BranchKind::Direct) throw NonDirectBranch();
  auto g = graph_of(nl);
  auto gm = incidence<T>(g);
  int m = static_cast<int>(nl.branches.size());
  Matrix<T> upsilon(m, m);
  for (int e = 0; e < m; ++e) upsilon(e, e) = scalar_traits<T>::from_value(nl.branches[e].y);
  return {gm * upsilon * gm.transpose(), nl.nodes};
}

struct StructureReport {
  bool symmetric = false;
  bool zero_row_sums = false;
  bool zero_col_sums = false;
  bool diag_dominant = false;
  int rank = 0;
};

template <class T>
StructureReport check_structure(const Matrix<T>& y, double tol = default_tolerance()) {
  StructureReport rep;
  int n = y.rows();
  rep.symmetric = true;
  rep.zero_row_sums = rep.zero_col_sums = true;
  rep.diag_dominant = true;
  for (int r = 0; r < n; ++r) {
    T rsum = scalar_traits<T>::zero(), csum = scalar_traits<T>::zero();
    double offmax = 0.0;
    for (int c = 0; c < n; ++c) {
      rsum += y(r, c);
      csum += y(c, r);
      if (!approx_equal(y(r, c), y(c, r), tol, tol)) rep.symmetric = false;
      if (c != r) offmax = std::max(offmax, scalar_traits<T>::magnitude(y(r, c)));
    }
    if (!scalar_traits<T>::is_zero(rsum, tol)) rep.zero_row_sums = false;
    if (!scalar_traits<T>::is_zero(csum, tol)) rep.zero_col_sums = false;
    if (scalar_traits<T>::magnitude(y(r, r)) + tol < offmax) rep.diag_dominant = false;
  }
  rep.rank = rank(y, tol);
  return rep;
}

// The common first cofactor of a zero-row/column-sum matrix.
template <class T>
T common_cofactor(const Matrix<T>& y) {
  return cofactor1(y, 1, 1);
}

}  // namespace netkit
