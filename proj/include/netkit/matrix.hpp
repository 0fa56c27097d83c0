#pragma once
// Dense matrices over any scalar in the tower, with two independent
// determinant paths (fraction-free Bareiss for exact scalars, partial-pivot
// LU for floats) plus a Leibniz permanent-style oracle for cross-checks.
#include "netkit/scalar.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace netkit {

struct NotSquare : std::invalid_argument {
  NotSquare() : std::invalid_argument("matrix is not square") {}
};
struct SingularMatrix : std::runtime_error {
  SingularMatrix() : std::runtime_error("singular matrix") {}
};
struct TooLarge : std::invalid_argument {
  explicit TooLarge(const std::string& what) : std::invalid_argument(what) {}
};

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, scalar_traits<T>::zero()) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  }
  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = scalar_traits<T>::one();
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const T& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  Matrix transpose() const {
    Matrix m(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
    return m;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix m(a.rows_, b.cols_);
    for (int r = 0; r < a.rows_; ++r)
      for (int k = 0; k < a.cols_; ++k) {
        const T& v = a(r, k);
        if (scalar_traits<T>::is_zero(v, 0.0)) continue;
        for (int c = 0; c < b.cols_; ++c) m(r, c) += v * b(k, c);
      }
    return m;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("shape mismatch");
    Matrix m = a;
    for (size_t i = 0; i < m.data_.size(); ++i) m.data_[i] += b.data_[i];
    return m;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("shape mismatch");
    Matrix m = a;
    for (size_t i = 0; i < m.data_.size(); ++i) m.data_[i] -= b.data_[i];
    return m;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

// Deletes the given 1-based rows and columns.
template <class T>
Matrix<T> drop_rows_cols(const Matrix<T>& a, std::vector<int> rows, std::vector<int> cols) {
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  auto keep = [](const std::vector<int>& del, int idx1) {
    return !std::binary_search(del.begin(), del.end(), idx1);
  };
  Matrix<T> m(a.rows() - static_cast<int>(rows.size()), a.cols() - static_cast<int>(cols.size()));
  int rr = 0;
  for (int r = 0; r < a.rows(); ++r) {
    if (!keep(rows, r + 1)) continue;
    int cc = 0;
    for (int c = 0; c < a.cols(); ++c) {
      if (!keep(cols, c + 1)) continue;
      m(rr, cc++) = a(r, c);
    }
    ++rr;
  }
  return m;
}

template <class T>
T det_bareiss(const Matrix<T>& a) {
  if (a.rows() != a.cols()) throw NotSquare();
  int n = a.rows();
  if (n == 0) return scalar_traits<T>::one();
  Matrix<T> m = a;
  T prev = scalar_traits<T>::one();
  bool flip = false;
  for (int k = 0; k + 1 < n; ++k) {
    if (scalar_traits<T>::is_zero(m(k, k), 0.0)) {
      int r = k + 1;
      while (r < n && scalar_traits<T>::is_zero(m(r, k), 0.0)) ++r;
      if (r == n) return scalar_traits<T>::zero();
      for (int c = k; c < n; ++c) std::swap(m(k, c), m(r, c));
      flip = !flip;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  T d = m(n - 1, n - 1);
  return flip ? -d : d;
}

template <class T>
T det_lu(const Matrix<T>& a) {
  if (a.rows() != a.cols()) throw NotSquare();
  int n = a.rows();
  if (n == 0) return scalar_traits<T>::one();
  Matrix<T> m = a;
  T d = scalar_traits<T>::one();
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = scalar_traits<T>::magnitude(m(k, k));
    for (int r = k + 1; r < n; ++r) {
      double v = scalar_traits<T>::magnitude(m(r, k));
      if (v > best) { best = v; piv = r; }
    }
    if (best == 0.0) return scalar_traits<T>::zero();
    if (piv != k) {
      for (int c = k; c < n; ++c) std::swap(m(k, c), m(piv, c));
      d = -d;
    }
    d *= m(k, k);
    for (int r = k + 1; r < n; ++r) {
      T f = m(r, k) / m(k, k);
      for (int c = k; c < n; ++c) m(r, c) -= f * m(k, c);
    }
  }
  return d;
}

template <class T>
T det(const Matrix<T>& a) {
  if constexpr (scalar_traits<T>::exact)
    return det_bareiss(a);
  else
    return det_lu(a);
}

template <class T>
T det_leibniz(const Matrix<T>& a) {
  if (a.rows() != a.cols()) throw NotSquare();
  int n = a.rows();
  if (n > 9) throw TooLarge("det_leibniz limited to n <= 9");
  if (n == 0) return scalar_traits<T>::one();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  T sum = scalar_traits<T>::zero();
  do {
    // parity by counting inversions
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inv;
    T prod = scalar_traits<T>::one();
    for (int i = 0; i < n; ++i) prod *= a(i, perm[i]);
    if (inv % 2)
      sum -= prod;
    else
      sum += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

// Solves Ax = b by Gaussian elimination. Exact scalars use the first nonzero
// pivot; floats use partial pivoting.
template <class T>
std::vector<T> gauss_solve(const Matrix<T>& a, const std::vector<T>& b) {
  if (a.rows() != a.cols()) throw NotSquare();
  int n = a.rows();
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("rhs size mismatch");
  Matrix<T> m = a;
  std::vector<T> x = b;
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    if constexpr (scalar_traits<T>::exact) {
      for (int r = k; r < n; ++r)
        if (!scalar_traits<T>::is_zero(m(r, k), 0.0)) { piv = r; break; }
    } else {
      double best = 0.0;
      for (int r = k; r < n; ++r) {
        double v = scalar_traits<T>::magnitude(m(r, k));
        if (v > best) { best = v; piv = r; }
      }
    }
    if (piv < 0) throw SingularMatrix();
    if (piv != k) {
      for (int c = k; c < n; ++c) std::swap(m(k, c), m(piv, c));
      std::swap(x[k], x[piv]);
    }
    for (int r = k + 1; r < n; ++r) {
      if (scalar_traits<T>::is_zero(m(r, k), 0.0)) continue;
      T f = m(r, k) / m(k, k);
      for (int c = k; c < n; ++c) m(r, c) -= f * m(k, c);
      x[r] -= f * x[k];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    T s = x[k];
    for (int c = k + 1; c < n; ++c) s -= m(k, c) * x[c];
    if (scalar_traits<T>::is_zero(m(k, k), 0.0)) throw SingularMatrix();
    x[k] = s / m(k, k);
  }
  return x;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
  if (a.rows() != a.cols()) throw NotSquare();
  int n = a.rows();
  Matrix<T> m = a;
  Matrix<T> inv = Matrix<T>::identity(n);
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    if constexpr (scalar_traits<T>::exact) {
      for (int r = k; r < n; ++r)
        if (!scalar_traits<T>::is_zero(m(r, k), 0.0)) { piv = r; break; }
    } else {
      double best = 0.0;
      for (int r = k; r < n; ++r) {
        double v = scalar_traits<T>::magnitude(m(r, k));
        if (v > best) { best = v; piv = r; }
      }
    }
    if (piv < 0) throw SingularMatrix();
    if (piv != k)
      for (int c = 0; c < n; ++c) {
        std::swap(m(k, c), m(piv, c));
        std::swap(inv(k, c), inv(piv, c));
      }
    T p = m(k, k);
    for (int c = 0; c < n; ++c) {
      m(k, c) /= p;
      inv(k, c) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == k || scalar_traits<T>::is_zero(m(r, k), 0.0)) continue;
      T f = m(r, k);
      for (int c = 0; c < n; ++c) {
        m(r, c) -= f * m(k, c);
        inv(r, c) -= f * inv(k, c);
      }
    }
  }
  return inv;
}

template <class T>
int rank(const Matrix<T>& a, double tol = default_tolerance()) {
  Matrix<T> m = a;
  int rows = m.rows(), cols = m.cols();
  int rk = 0;
  for (int c = 0; c < cols && rk < rows; ++c) {
    int piv = -1;
    double best = 0.0;
    for (int r = rk; r < rows; ++r) {
      if constexpr (scalar_traits<T>::exact) {
        if (!scalar_traits<T>::is_zero(m(r, c), 0.0)) { piv = r; break; }
      } else {
        double v = scalar_traits<T>::magnitude(m(r, c));
        if (v > best && v > tol) { best = v; piv = r; }
      }
    }
    if (piv < 0) continue;
    if (piv != rk)
      for (int cc = 0; cc < cols; ++cc) std::swap(m(rk, cc), m(piv, cc));
    for (int r = rk + 1; r < rows; ++r) {
      if (scalar_traits<T>::is_zero(m(r, c), 0.0)) continue;
      T f = m(r, c) / m(rk, c);
      for (int cc = c; cc < cols; ++cc) m(r, cc) -= f * m(rk, cc);
    }
    ++rk;
  }
  return rk;
}

template <class T>
bool matrix_approx_equal(const Matrix<T>& a, const Matrix<T>& b,
                         double rel = default_tolerance(), double abs = kAbsTolerance) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      if (!approx_equal(a(r, c), b(r, c), rel, abs)) return false;
  return true;
}

}  // namespace netkit
