#pragma once
// Grounded node-voltage solutions, transfer and driving-point impedances,
// and the power/identity checks that go with them.
#include "netkit/admittance.hpp"

#include <vector>

namespace netkit {

struct SingularNetwork : std::runtime_error {
  SingularNetwork() : std::runtime_error("network admittance matrix is rank-deficient") {}
};
struct UnbalancedInjection : std::runtime_error {
  UnbalancedInjection() : std::runtime_error("current injections do not sum to zero") {}
};

// Unique solution of Yv = i with v[ground-1] = 0, via the grounded minor.
template <class T>
std::vector<T> solve_grounded(const Matrix<T>& y, const std::vector<T>& i, int ground,
                              double tol = default_tolerance()) {
  int n = y.rows();
  if (ground < 1 || ground > n) throw std::out_of_range("ground node out of range");
  T total = scalar_traits<T>::zero();
  for (const auto& v : i) total += v;
  if (!scalar_traits<T>::is_zero(total, tol)) throw UnbalancedInjection();
  auto minor = drop_rows_cols(y, {ground}, {ground});
  std::vector<T> rhs;
  for (int r = 0; r < n; ++r)
    if (r != ground - 1) rhs.push_back(i[r]);
  std::vector<T> reduced;
  try {
    reduced = gauss_solve(minor, rhs);
  } catch (const SingularMatrix&) {
    throw SingularNetwork();
  }
  std::vector<T> v(n, scalar_traits<T>::zero());
  int rr = 0;
  for (int r = 0; r < n; ++r)
    if (r != ground - 1) v[r] = reduced[rr++];
  return v;
}

// Test oracle: same solution computed by replacing row `ground` of Y with
// the ground row e_k^T instead of deleting it.
template <class T>
std::vector<T> solve_row_replaced(const Matrix<T>& y, const std::vector<T>& i, int ground) {
  int n = y.rows();
  Matrix<T> m = y;
  std::vector<T> rhs = i;
  for (int c = 0; c < n; ++c) m(ground - 1, c) = scalar_traits<T>::zero();
  m(ground - 1, ground - 1) = scalar_traits<T>::one();
  rhs[ground - 1] = scalar_traits<T>::zero();
  try {
    return gauss_solve(m, rhs);
  } catch (const SingularMatrix&) {
    throw SingularNetwork();
  }
}

template <class T>
T transfer_impedance(const Matrix<T>& y, int p, int q, int j, int k) {
  T c = common_cofactor(y);
  if (scalar_traits<T>::is_zero(c)) throw SingularNetwork();
  return cofactor2(y, p, q, j, k) / c;
}

template <class T>
T driving_point_impedance(const Matrix<T>& y, int j, int k) {
  return transfer_impedance(y, j, k, j, k);
}

// Transfer impedance recovered from driving-point impedances alone.
template <class T>
T transfer_from_dp(const T& zpk, const T& zqj, const T& zpj, const T& zqk) {
  T two = scalar_traits<T>::one() + scalar_traits<T>::one();
  return (zpk + zqj - zpj - zqk) / two;
}

// T = inverse of the grounded minor; T_ab = tz(a k; b k).
template <class T>
Matrix<T> transfer_matrix(const Matrix<T>& y, int ground) {
  auto minor = drop_rows_cols(y, {ground}, {ground});
  try {
    return inverse(minor);
  } catch (const SingularMatrix&) {
    throw SingularNetwork();
  }
}

// Sum over branches of y_a Z_a minus (n - 1); zero on connected networks.
template <class T>
T foster_residual(const Netlist& nl, const Matrix<T>& y) {
  T sum = scalar_traits<T>::zero();
  for (const auto& b : nl.branches)
    sum += scalar_traits<T>::from_value(b.y) * driving_point_impedance(y, b.head, b.tail);
  T expect = scalar_traits<T>::zero();
  for (int i = 1; i < nl.n(); ++i) expect += scalar_traits<T>::one();
  return sum - expect;
}

// Largest magnitude over (j,p) of  sum_k y_jk tz(jp; jk) - 1, the per-node
// current-law identity behind Foster's theorem.
template <class T>
double per_node_identity_residual(const Matrix<T>& y) {
  int n = y.rows();
  double worst = 0.0;
  for (int j = 1; j <= n; ++j)
    for (int p = 1; p <= n; ++p) {
      if (p == j) continue;
      T sum = scalar_traits<T>::zero();
      for (int k = 1; k <= n; ++k) {
        if (k == j) continue;
        T yjk = -y(j - 1, k - 1);
        if (scalar_traits<T>::is_zero(yjk, 0.0)) continue;
        sum += yjk * transfer_impedance(y, j, p, j, k);
      }
      worst = std::max(worst, scalar_traits<T>::magnitude(sum - scalar_traits<T>::one()));
    }
  return worst;
}

template <class T>
struct TellegenReport {
  T sum_vi{};        // sum of v_a i_a over branches and sources
  T sum_conj_v_i{};  // sum of conj(v_a) i_a
  T sum_v_conj_i{};  // sum of v_a conj(i_a)
  T p_tot{};         // v^T i
  T p_tot_quadratic{};  // v^T Y v
};

template <class T>
TellegenReport<T> check_tellegen(const Netlist& nl, const Matrix<T>& y, const std::vector<T>& v) {
  TellegenReport<T> rep;
  rep.sum_vi = rep.sum_conj_v_i = rep.sum_v_conj_i = scalar_traits<T>::zero();
  for (const auto& b : nl.branches) {
    T va = v[b.head - 1] - v[b.tail - 1];
    T ia = scalar_traits<T>::from_value(b.y) * va;
    rep.sum_vi += va * ia;
    rep.sum_conj_v_i += scalar_traits<T>::conj(va) * ia;
    rep.sum_v_conj_i += va * scalar_traits<T>::conj(ia);
  }
  for (const auto& s : nl.sources) {
    if (s.kind != SourceKind::Current) continue;
    // internally the source carries its current from node a to node b
    T drop = v[s.a - 1] - v[s.b - 1];
    T cur = scalar_traits<T>::from_value(s.value);
    rep.sum_vi += drop * cur;
    rep.sum_conj_v_i += scalar_traits<T>::conj(drop) * cur;
    rep.sum_v_conj_i += drop * scalar_traits<T>::conj(cur);
  }
  auto inj = injection_vector<T>(nl);
  rep.p_tot = scalar_traits<T>::zero();
  for (size_t k = 0; k < inj.size(); ++k) rep.p_tot += v[k] * inj[k];
  rep.p_tot_quadratic = scalar_traits<T>::zero();
  for (int r = 0; r < y.rows(); ++r)
    for (int c = 0; c < y.cols(); ++c) rep.p_tot_quadratic += v[r] * y(r, c) * v[c];
  return rep;
}

}  // namespace netkit
