#pragma once
// Rational-function calculus in the Laplace variable: polynomial arithmetic
// over doubles or exact rationals, companion-matrix root finding, the
// positive-real / reactance test battery, and symbolic network impedances
// assembled from spanning trees with a cofactor cross-check.
#include "netkit/kirchhoff.hpp"
#include "netkit/solve.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace netkit {

struct DivideByZero : std::domain_error {
  DivideByZero() : std::domain_error("division by a zero polynomial or rational function") {}
};
struct RootFindingFailed : std::runtime_error {
  RootFindingFailed() : std::runtime_error("eigenvalue root finding did not converge") {}
};
struct NotPositiveReal : std::runtime_error {
  explicit NotPositiveReal(const std::string& why) : std::runtime_error(why) {}
};
struct Disconnected : std::runtime_error {
  Disconnected() : std::runtime_error("network is disconnected") {}
};

// Real-coefficient polynomial, ascending powers, no trailing zeros.
template <class T>
struct Poly {
  std::vector<T> c;

  Poly() = default;
  Poly(std::initializer_list<T> v) : c(v) { trim(); }
  explicit Poly(std::vector<T> v) : c(std::move(v)) { trim(); }
  static Poly constant(const T& v) { return Poly(std::vector<T>{v}); }

  void trim() {
    while (!c.empty() && scalar_traits<T>::is_zero(c.back(), 0.0)) c.pop_back();
  }
  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for the zero polynomial
  bool is_zero() const { return c.empty(); }
  const T& leading() const { return c.back(); }
  T coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c.size())) ? c[k] : scalar_traits<T>::zero();
  }

  template <class U>
  U eval(const U& x) const {
    U acc{};
    for (int i = degree(); i >= 0; --i) acc = acc * x + U(c[i]);
    return acc;
  }

  Poly derivative() const {
    Poly d;
    for (int k = 1; k <= degree(); ++k) d.c.push_back(c[k] * T(k));
    d.trim();
    return d;
  }
  // p(-s): flips the sign of odd-power coefficients
  Poly reflect() const {
    Poly r = *this;
    for (int k = 1; k <= degree(); k += 2) r.c[k] = -r.c[k];
    return r;
  }
  Poly monic() const {
    if (is_zero()) return *this;
    Poly m = *this;
    for (auto& v : m.c) v = v / leading();
    return m;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly s;
    s.c.resize(std::max(a.c.size(), b.c.size()), scalar_traits<T>::zero());
    for (size_t i = 0; i < a.c.size(); ++i) s.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) s.c[i] += b.c[i];
    s.trim();
    return s;
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    Poly s;
    s.c.resize(std::max(a.c.size(), b.c.size()), scalar_traits<T>::zero());
    for (size_t i = 0; i < a.c.size(); ++i) s.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) s.c[i] -= b.c[i];
    s.trim();
    return s;
  }
  friend Poly operator-(const Poly& a) {
    Poly s = a;
    for (auto& v : s.c) v = -v;
    return s;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    Poly p;
    p.c.resize(a.c.size() + b.c.size() - 1, scalar_traits<T>::zero());
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j) p.c[i + j] += a.c[i] * b.c[j];
    p.trim();
    return p;
  }
  friend Poly operator*(const Poly& a, const T& v) {
    Poly p = a;
    for (auto& x : p.c) x *= v;
    p.trim();
    return p;
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
};

template <class T>
std::pair<Poly<T>, Poly<T>> divmod(const Poly<T>& a, const Poly<T>& b) {
  if (b.is_zero()) throw DivideByZero();
  Poly<T> r = a;
  Poly<T> q;
  if (a.degree() >= b.degree())
    q.c.resize(a.degree() - b.degree() + 1, scalar_traits<T>::zero());
  while (!r.is_zero() && r.degree() >= b.degree()) {
    int shift = r.degree() - b.degree();
    T f = r.leading() / b.leading();
    q.c[shift] = f;
    for (int i = 0; i <= b.degree(); ++i) r.c[shift + i] -= f * b.c[i];
    // force exact cancellation of the leading term so float division terminates
    r.c[shift + b.degree()] = scalar_traits<T>::zero();
    r.trim();
  }
  q.trim();
  return {q, r};
}

// Euclidean polynomial GCD, monic result. Float coefficients are chopped with
// a relative tolerance so near-cancellations terminate; exact coefficients
// reduce exactly.
template <class T>
Poly<T> poly_gcd(Poly<T> a, Poly<T> b, double tol = 1e-10) {
  auto max_mag = [](const Poly<T>& p) {
    double m = 0.0;
    for (const auto& v : p.c) m = std::max(m, scalar_traits<T>::magnitude(v));
    return m;
  };
  while (!b.is_zero()) {
    double scale = std::max({1.0, max_mag(a), max_mag(b)});
    auto r = divmod(a, b).second;
    if constexpr (!scalar_traits<T>::exact) {
      while (!r.c.empty() && scalar_traits<T>::magnitude(r.c.back()) <= tol * scale)
        r.c.pop_back();
    }
    a = b;
    b = r.is_zero() ? r : r.monic();
  }
  return a.monic();
}

// Ratio of two polynomials, kept GCD-reduced with a monic denominator.
template <class T>
struct RationalFunction {
  Poly<T> num, den;

  RationalFunction() : den(Poly<T>::constant(scalar_traits<T>::one())) {}
  RationalFunction(const T& v)
      : num(Poly<T>::constant(v)), den(Poly<T>::constant(scalar_traits<T>::one())) {}
  RationalFunction(Poly<T> n, Poly<T> d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw DivideByZero();
    reduce();
  }

  bool is_zero() const { return num.is_zero(); }

  void reduce() {
    if (num.is_zero()) {
      den = Poly<T>::constant(scalar_traits<T>::one());
      return;
    }
    Poly<T> g = poly_gcd(num, den);
    if (g.degree() > 0) {
      num = divmod(num, g).first;
      den = divmod(den, g).first;
    }
    T lead = den.leading();
    for (auto& v : num.c) v = v / lead;
    for (auto& v : den.c) v = v / lead;
    num.trim();
    den.trim();
  }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend RationalFunction operator-(const RationalFunction& a) {
    RationalFunction r = a;
    r.num = -r.num;
    return r;
  }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num * b.num, a.den * b.den);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw DivideByZero();
    return RationalFunction(a.num * b.den, a.den * b.num);
  }
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) {
    return !(a == b);
  }
};

// Substitutes g for the variable of f, staying in the rational-function field.
template <class T>
RationalFunction<T> compose(const RationalFunction<T>& f, const RationalFunction<T>& g) {
  RationalFunction<T> n = f.num.eval(g);
  RationalFunction<T> d = f.den.eval(g);
  return n / d;
}

template <class T>
struct scalar_traits<RationalFunction<T>> {
  using RF = RationalFunction<T>;
  static constexpr bool exact = scalar_traits<T>::exact;
  static constexpr bool complex_valued = scalar_traits<T>::complex_valued;
  static RF zero() { return RF(); }
  static RF one() { return RF(scalar_traits<T>::one()); }
  static RF conj(const RF& x) { return x; }
  static double magnitude(const RF&) {
    throw std::logic_error("rational functions have no scalar magnitude");
  }
  static bool is_zero(const RF& x, double = 0.0) { return x.is_zero(); }
  static RF from_value(const CRat& v) { return RF(scalar_traits<T>::from_value(v)); }
  static std::complex<double> to_c(const RF&) {
    throw std::logic_error("rational functions have no complex value");
  }
};

inline Poly<double> to_double_poly(const Poly<Rat>& p) {
  std::vector<double> c;
  c.reserve(p.c.size());
  for (const auto& v : p.c) c.push_back(to_double(v));
  return Poly<double>(std::move(c));
}

inline RationalFunction<double> to_double_rf(const RationalFunction<Rat>& f) {
  return RationalFunction<double>(to_double_poly(f.num), to_double_poly(f.den));
}

inline std::complex<double> rf_eval(const RationalFunction<double>& f,
                                    const std::complex<double>& s) {
  return f.num.eval(s) / f.den.eval(s);
}

inline RationalFunction<double> rf_derivative(const RationalFunction<double>& f) {
  return RationalFunction<double>(f.num.derivative() * f.den - f.num * f.den.derivative(),
                                  f.den * f.den);
}

// All complex roots via companion-matrix eigenvalues, refined by Newton
// polishing and forced into exact conjugate pairs.
inline std::vector<std::complex<double>> poly_roots(const Poly<double>& p) {
  if (p.is_zero()) throw std::invalid_argument("roots of the zero polynomial");
  int n = p.degree();
  if (n <= 0) return {};
  std::vector<double> a(p.c.begin(), p.c.end());
  for (auto& v : a) v /= a.back();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) m(i, n - 1) = -a[i];
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw RootFindingFailed();
  std::vector<std::complex<double>> roots;
  roots.reserve(n);
  for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()[i]);

  auto horner2 = [&](const std::complex<double>& z) {
    std::complex<double> f{}, d{};
    for (int i = n; i >= 0; --i) {
      d = d * z + f;
      f = f * z + a[i];
    }
    return std::pair{f, d};
  };
  for (auto& z : roots) {
    for (int it = 0; it < 60; ++it) {
      auto [f, d] = horner2(z);
      if (std::abs(d) < 1e-300) break;
      std::complex<double> step = f / d;
      z -= step;
      if (std::abs(step) <= 1e-12 * (1.0 + std::abs(z))) break;
    }
    if (std::abs(z.imag()) <= 1e-7 * (1.0 + std::abs(z))) z = {z.real(), 0.0};
  }
  // enforce conjugate symmetry by averaging matched pairs
  std::vector<bool> used(roots.size(), false);
  for (size_t i = 0; i < roots.size(); ++i) {
    if (used[i] || roots[i].imag() <= 0.0) continue;
    size_t best = roots.size();
    double bd = 1e-6 * (1.0 + std::abs(roots[i]));
    for (size_t j = 0; j < roots.size(); ++j) {
      if (used[j] || roots[j].imag() >= 0.0) continue;
      double d = std::abs(roots[i] - std::conj(roots[j]));
      if (d <= bd) { bd = d; best = j; }
    }
    if (best < roots.size()) {
      roots[i] = (roots[i] + std::conj(roots[best])) / 2.0;
      roots[best] = std::conj(roots[i]);
      used[i] = used[best] = true;
    }
  }
  return roots;
}

struct RootGroup {
  std::complex<double> value;
  int multiplicity = 0;
  bool simple = false;                // multiplicity one, residue filled in
  std::complex<double> residue{};
};

inline std::vector<RootGroup> cluster_roots(const std::vector<std::complex<double>>& roots,
                                            double tol = 1e-7) {
  std::vector<RootGroup> groups;
  for (const auto& r : roots) {
    RootGroup* hit = nullptr;
    for (auto& g : groups)
      if (std::abs(r - g.value) <= tol * (1.0 + std::abs(g.value))) { hit = &g; break; }
    if (hit) {
      hit->value = (hit->value * double(hit->multiplicity) + r) / double(hit->multiplicity + 1);
      ++hit->multiplicity;
    } else {
      groups.push_back({r, 1});
    }
  }
  std::sort(groups.begin(), groups.end(), [](const RootGroup& a, const RootGroup& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return groups;
}

struct PoleZeroReport {
  std::vector<RootGroup> zeros, poles;
  int degree_at_infinity = 0;  // deg num - deg den: positive means a pole at infinity
};

inline PoleZeroReport poles_zeros(const RationalFunction<double>& f) {
  if (f.is_zero()) throw std::invalid_argument("pole-zero report of the zero function");
  PoleZeroReport rep;
  rep.zeros = cluster_roots(poly_roots(f.num));
  rep.poles = cluster_roots(poly_roots(f.den));
  rep.degree_at_infinity = f.num.degree() - f.den.degree();
  for (auto& p : rep.poles)
    if (p.multiplicity == 1) {
      p.simple = true;
      p.residue = f.num.eval(p.value) / f.den.derivative().eval(p.value);
    }
  for (auto& z : rep.zeros)
    if (z.multiplicity == 1) {
      z.simple = true;
      // residue of the reciprocal function at this point
      z.residue = f.den.eval(z.value) / f.num.derivative().eval(z.value);
    }
  return rep;
}

// Even polynomial E(u), u = omega^2, whose value is Re f(j omega): the even
// part of num(s) * den(-s) with alternating signs.
inline Poly<double> axis_real_part(const RationalFunction<double>& f) {
  Poly<double> h = f.num * f.den.reflect();
  std::vector<double> e;
  for (int m = 0; 2 * m <= h.degree(); ++m)
    e.push_back((m % 2 ? -1.0 : 1.0) * h.coeff(2 * m));
  return Poly<double>(std::move(e));
}

struct PositiveRealReport {
  bool ok = true;
  std::string reason;
  bool has_witness = false;
  std::complex<double> witness{};
};

namespace detail {
inline bool on_axis(const std::complex<double>& z, double tol = 1e-7) {
  return std::abs(z.real()) <= tol * (1.0 + std::abs(z));
}

// grid of sample points covering the closed right half-plane
inline std::vector<std::complex<double>> rhp_grid() {
  std::vector<std::complex<double>> pts;
  for (int d = -3; d <= 3; ++d) {
    double mag = std::pow(10.0, d);
    for (int t = -4; t <= 4; ++t) {
      double th = t * (std::acos(-1.0) / 8.0);
      pts.push_back(std::polar(mag, th));
    }
  }
  return pts;
}
}  // namespace detail

inline PositiveRealReport is_positive_real(const RationalFunction<double>& f) {
  if (f.is_zero()) throw std::invalid_argument("positive-real test of the zero function");
  PositiveRealReport rep;
  auto fail = [&](std::string why, std::complex<double> w, bool has = true) {
    rep.ok = false;
    rep.reason = std::move(why);
    rep.has_witness = has;
    rep.witness = w;
    return rep;
  };
  auto grid_witness = [&]() -> std::pair<bool, std::complex<double>> {
    for (const auto& s : detail::rhp_grid()) {
      std::complex<double> d = f.den.eval(s);
      if (std::abs(d) < 1e-12) continue;
      std::complex<double> v = f.num.eval(s) / d;
      if (v.real() < -1e-9 * (1.0 + std::abs(v))) return {true, s};
    }
    return {false, {}};
  };

  const double axis_tol = 1e-7;
  auto proots = poly_roots(f.den);
  auto zroots = poly_roots(f.num);
  for (const auto& r : proots)
    if (r.real() > axis_tol * (1.0 + std::abs(r)))
      return fail("pole in the open right half-plane", r);
  for (const auto& r : zroots)
    if (r.real() > axis_tol * (1.0 + std::abs(r)))
      return fail("zero in the open right half-plane", r);

  if (std::abs(f.num.degree() - f.den.degree()) > 1) {
    auto [found, w] = grid_witness();
    return fail("numerator and denominator degrees differ by more than one", w, found);
  }

  // imaginary-axis poles of f and of 1/f must be simple with real positive residues
  auto axis_residues = [&](const std::vector<std::complex<double>>& roots, const Poly<double>& n,
                           const Poly<double>& d,
                           const char* label) -> std::pair<bool, std::complex<double>> {
    for (const auto& g : cluster_roots(roots)) {
      if (!detail::on_axis(g.value, axis_tol)) continue;
      if (g.multiplicity > 1) return {false, g.value};
      std::complex<double> res = n.eval(g.value) / d.derivative().eval(g.value);
      if (std::abs(res.imag()) > 1e-6 * std::abs(res) + 1e-12 || res.real() <= 0.0)
        return {false, g.value};
    }
    (void)label;
    return {true, {}};
  };
  if (auto [ok, w] = axis_residues(proots, f.num, f.den, "pole"); !ok)
    return fail("imaginary-axis pole is repeated or lacks a positive real residue", w);
  if (auto [ok, w] = axis_residues(zroots, f.den, f.num, "zero"); !ok)
    return fail("imaginary-axis zero is repeated or lacks a positive real reciprocal residue", w);

  // Re f(j omega) >= 0 for all omega, via the even polynomial in u = omega^2
  Poly<double> e = axis_real_part(f);
  if (!e.is_zero()) {
    double scale = 0.0;
    for (double v : e.c) scale = std::max(scale, std::fabs(v));
    // deflate an exact zero at u = 0 (function vanishing at the origin) so it
    // is not mistaken for a positive sign-change root; u^k leaves signs alone
    size_t shift = 0;
    while (shift < e.c.size() && std::fabs(e.c[shift]) <= 1e-12 * scale) ++shift;
    e = Poly<double>(std::vector<double>(e.c.begin() + shift, e.c.end()));
    std::vector<double> samples{0.0, 1e-6, 1e-3, 1.0, 1e3, 1e6};
    if (e.degree() > 0)
      for (const auto& g : cluster_roots(poly_roots(e))) {
        if (std::abs(g.value.imag()) > 1e-7 * (1.0 + std::abs(g.value))) continue;
        double u = g.value.real();
        if (u <= 0.0) continue;
        samples.push_back(u * 0.5);
        samples.push_back(u * 2.0);
        if (g.multiplicity % 2)
          return fail("real part changes sign on the imaginary axis",
                      {0.0, std::sqrt(u)});
      }
    for (double u : samples) {
      double v = e.eval(u);
      if (v < -1e-9 * scale * std::max(1.0, std::pow(u, e.degree())))
        return fail("negative real part on the imaginary axis", {0.0, std::sqrt(u)});
    }
  }

  // sampled angle-contraction check: |arg f(s)| <= |arg s| on the closed right half-plane
  for (const auto& s : detail::rhp_grid()) {
    std::complex<double> d = f.den.eval(s), n = f.num.eval(s);
    if (std::abs(d) < 1e-9 * (1.0 + std::abs(n)) || std::abs(n) < 1e-12) continue;
    std::complex<double> v = n / d;
    if (std::abs(std::arg(v)) > std::abs(std::arg(s)) + 1e-6)
      return fail("angle condition violated on sample grid", s);
  }
  return rep;
}

struct ReactanceReport {
  bool ok = true;
  std::string reason;
  std::vector<double> pole_omegas, zero_omegas;  // sorted frequencies on the axis
};

inline ReactanceReport is_reactance_function(const RationalFunction<double>& f) {
  auto pr = is_positive_real(f);
  if (!pr.ok) throw NotPositiveReal("not positive-real: " + pr.reason);
  ReactanceReport rep;

  Poly<double> h = f.num * f.den.reflect();
  double hscale = 0.0;
  for (double v : h.c) hscale = std::max(hscale, std::fabs(v));
  Poly<double> e = axis_real_part(f);
  for (double v : e.c)
    if (std::fabs(v) > 1e-9 * hscale) {
      rep.ok = false;
      rep.reason = "real part is not identically zero on the imaginary axis";
      return rep;
    }

  for (const auto& g : cluster_roots(poly_roots(f.den)))
    rep.pole_omegas.push_back(g.value.imag());
  for (const auto& g : cluster_roots(poly_roots(f.num)))
    rep.zero_omegas.push_back(g.value.imag());
  std::sort(rep.pole_omegas.begin(), rep.pole_omegas.end());
  std::sort(rep.zero_omegas.begin(), rep.zero_omegas.end());

  // poles and zeros of X(omega) must strictly alternate along the axis
  std::vector<std::pair<double, int>> merged;
  for (double w : rep.pole_omegas) merged.push_back({w, 0});
  for (double w : rep.zero_omegas) merged.push_back({w, 1});
  std::sort(merged.begin(), merged.end());
  for (size_t i = 1; i < merged.size(); ++i) {
    if (merged[i].second == merged[i - 1].second ||
        merged[i].first - merged[i - 1].first <= 1e-7 * (1.0 + std::fabs(merged[i].first))) {
      rep.ok = false;
      rep.reason = "poles and zeros do not interleave";
      return rep;
    }
  }

  // dX/domega > 0 wherever it exists
  RationalFunction<double> fd = rf_derivative(f);
  for (int d = -3; d <= 3; ++d)
    for (double sgn : {-1.0, 1.0}) {
      double w = sgn * std::pow(10.0, d) * 1.37;  // offbeat factor avoids landing on poles
      std::complex<double> jw{0.0, w};
      if (std::abs(f.den.eval(jw)) < 1e-9) continue;
      double slope = rf_eval(fd, jw).real();
      if (slope <= 0.0) {
        rep.ok = false;
        rep.reason = "reactance is not strictly increasing";
        return rep;
      }
    }
  return rep;
}

// Branch admittance (g + c s) / (r + l s) as a pair of polynomials.
inline std::pair<Poly<Rat>, Poly<Rat>> branch_polys(const Branch& b) {
  if (b.kind != BranchKind::GCRL) throw NonDirectBranch();
  return {Poly<Rat>{b.g, b.c}, Poly<Rat>{b.r, b.l}};
}

// Characteristic polynomial: over all spanning trees, the product of the
// numerators of tree branches and the denominators of the rest.
inline Poly<Rat> characteristic_poly(const Netlist& nl) {
  MultiGraph g = graph_of(nl);
  auto trees = spanning_trees(g);
  if (trees.empty()) throw Disconnected();
  std::vector<std::pair<Poly<Rat>, Poly<Rat>>> pq;
  pq.reserve(nl.branches.size());
  for (const auto& b : nl.branches) pq.push_back(branch_polys(b));
  Poly<Rat> sum;
  for (const auto& tree : trees) {
    std::vector<bool> in(nl.branches.size(), false);
    for (int e : tree) in[e] = true;
    Poly<Rat> prod = Poly<Rat>::constant(Rat(1));
    for (size_t e = 0; e < pq.size(); ++e) prod = prod * (in[e] ? pq[e].first : pq[e].second);
    sum = sum + prod;
  }
  return sum;
}

// Numerator of Z_jk(s) over the characteristic polynomial: separating tree
// pairs contribute their branch numerators, all other branches denominators.
inline Poly<Rat> impedance_numerator_poly(const Netlist& nl, int j, int k) {
  MultiGraph g = graph_of(nl);
  std::vector<std::pair<Poly<Rat>, Poly<Rat>>> pq;
  pq.reserve(nl.branches.size());
  for (const auto& b : nl.branches) pq.push_back(branch_polys(b));
  Poly<Rat> sum;
  for (const auto& [tj, tk] : tree_pairs(g, j, k)) {
    std::vector<bool> in(nl.branches.size(), false);
    for (int e : tj) in[e] = true;
    for (int e : tk) in[e] = true;
    Poly<Rat> prod = Poly<Rat>::constant(Rat(1));
    for (size_t e = 0; e < pq.size(); ++e) prod = prod * (in[e] ? pq[e].first : pq[e].second);
    sum = sum + prod;
  }
  return sum;
}

// Admittance matrix over the rational-function field.
inline Matrix<RationalFunction<Rat>> admittance_rf(const Netlist& nl) {
  int n = nl.n();
  Matrix<RationalFunction<Rat>> y(n, n);
  for (const auto& b : nl.branches) {
    auto [p, q] = branch_polys(b);
    RationalFunction<Rat> v(p, q);
    int j = b.head - 1, k = b.tail - 1;
    y(j, j) += v;
    y(k, k) += v;
    y(j, k) -= v;
    y(k, j) -= v;
  }
  return y;
}

// Symbolic driving-point impedance, assembled from trees and cross-checked
// against the cofactor route over the rational-function field.
inline RationalFunction<Rat> network_impedance_s(const Netlist& nl, int j, int k) {
  Poly<Rat> c = characteristic_poly(nl);
  if (c.is_zero()) throw Disconnected();
  RationalFunction<Rat> z(impedance_numerator_poly(nl, j, k), c);
  auto y = admittance_rf(nl);
  RationalFunction<Rat> z2 = cofactor2(y, j, k, j, k) / cofactor1(y, 1, 1);
  if (!(z == z2)) throw std::logic_error("tree and cofactor impedance routes disagree");
  return z;
}

// Direct definition check: positive-real with no finite poles or zeros on the
// imaginary axis.
inline bool strictly_positive_real_direct(const RationalFunction<double>& f) {
  if (!is_positive_real(f).ok) return false;
  for (const auto& r : poly_roots(f.den))
    if (detail::on_axis(r)) return false;
  for (const auto& r : poly_roots(f.num))
    if (detail::on_axis(r)) return false;
  return true;
}

struct StrictPrReport {
  bool ok = false;
  std::string reason;
};

// Criteria route: no transfer impedance into the port may have an
// imaginary-axis pole, and some non-conjugate branch with g > 0, r > 0 must
// see a transfer impedance free of imaginary-axis zeros.
inline StrictPrReport is_strictly_positive_real(const Netlist& nl, int j, int k) {
  auto y = admittance_rf(nl);
  RationalFunction<Rat> c = cofactor1(y, 1, 1);
  if (c.is_zero()) throw Disconnected();
  bool witness = false;
  for (const auto& b : nl.branches) {
    RationalFunction<Rat> tz = cofactor2(y, b.head, b.tail, j, k) / c;
    if (tz.is_zero()) continue;  // conjugate pair: no poles, cannot be a witness
    auto tzd = to_double_rf(tz);
    for (const auto& r : poly_roots(tzd.den))
      if (detail::on_axis(r))
        return {false, "a transfer impedance into the port has an imaginary-axis pole"};
    if (witness || !(b.g > 0 && b.r > 0)) continue;
    bool axis_zero = false;
    if (tzd.num.degree() > 0)
      for (const auto& r : poly_roots(tzd.num))
        if (detail::on_axis(r)) { axis_zero = true; break; }
    if (!axis_zero) witness = true;
  }
  if (!witness)
    return {false, "no strictly passive branch couples to the port without an axis zero"};
  return {true, ""};
}

}  // namespace netkit
