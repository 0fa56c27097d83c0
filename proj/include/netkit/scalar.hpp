#pragma once
// Scalar tower: real doubles, complex doubles, exact rationals and exact
// complex rationals share one trait interface so the matrix/cofactor code
// can be written once.
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>

namespace netkit {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double default_tolerance() {
  static const double tol = [] {
    if (const char* s = std::getenv("NETKIT_TOLERANCE")) {
      char* end = nullptr;
      double v = std::strtod(s, &end);
      if (end != s && v > 0) return v;
    }
    return 1e-9;
  }();
  return tol;
}

inline constexpr double kAbsTolerance = 1e-12;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Exact complex number with rational real and imaginary parts.
struct CRat {
  Rat re{}, im{};
  CRat() = default;
  CRat(int v) : re(v) {}
  CRat(Rat r) : re(std::move(r)) {}
  CRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
};

inline CRat operator+(const CRat& a, const CRat& b) { return {a.re + b.re, a.im + b.im}; }
inline CRat operator-(const CRat& a, const CRat& b) { return {a.re - b.re, a.im - b.im}; }
inline CRat operator-(const CRat& a) { return {-a.re, -a.im}; }
inline CRat operator*(const CRat& a, const CRat& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Rat norm(const CRat& a) { return a.re * a.re + a.im * a.im; }
inline CRat conj(const CRat& a) { return {a.re, -a.im}; }
inline CRat operator/(const CRat& a, const CRat& b) {
  Rat n = norm(b);
  if (n == 0) throw std::domain_error("CRat division by zero");
  return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}
inline CRat& operator+=(CRat& a, const CRat& b) { a = a + b; return a; }
inline CRat& operator-=(CRat& a, const CRat& b) { a = a - b; return a; }
inline CRat& operator*=(CRat& a, const CRat& b) { a = a * b; return a; }
inline CRat& operator/=(CRat& a, const CRat& b) { a = a / b; return a; }
inline bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }

inline std::complex<double> to_complex(const CRat& a) {
  return {to_double(a.re), to_double(a.im)};
}

// Parses REAL := [+-]?digits(.digits)?([eE][+-]?digits)? | [+-]?digits/digits
inline Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty number");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string nums = s.substr(0, slash);
    if (!nums.empty() && nums[0] == '+') nums.erase(0, 1);
    BigInt num(nums);
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rat(num, den);
  }
  size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') { neg = (s[i] == '-'); ++i; }
  std::string digits;
  long exp10 = 0;
  bool any = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { digits += s[i++]; any = true; }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i++];
      --exp10;
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("malformed number '" + s + "'");
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) { eneg = (s[i] == '-'); ++i; }
    if (i >= s.size()) throw std::invalid_argument("malformed exponent in '" + s + "'");
    long e = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) e = e * 10 + (s[i++] - '0');
    exp10 += eneg ? -e : e;
  }
  if (i != s.size()) throw std::invalid_argument("malformed number '" + s + "'");
  BigInt mant(digits.empty() ? "0" : digits);
  Rat r(mant);
  if (exp10 > 0) {
    BigInt p = 1;
    for (long k = 0; k < exp10; ++k) p *= 10;
    r *= Rat(p);
  } else if (exp10 < 0) {
    BigInt p = 1;
    for (long k = 0; k < -exp10; ++k) p *= 10;
    r /= Rat(p);
  }
  return neg ? -r : r;
}

inline std::string rat_to_string(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

// CPLX := REAL | REAL "j" | REAL SIGN REAL "j"
inline CRat cplx_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty complex literal");
  // locate a sign that separates real and imaginary parts (not leading, not after e/E or /)
  size_t split = std::string::npos;
  for (size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E' && s[i - 1] != '/') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    if (s.back() == 'j') return CRat(Rat(0), rat_from_string(s.substr(0, s.size() - 1)));
    return CRat(rat_from_string(s));
  }
  if (s.back() != 'j') throw std::invalid_argument("malformed complex literal '" + s + "'");
  Rat re = rat_from_string(s.substr(0, split));
  Rat im = rat_from_string(s.substr(split, s.size() - split - 1));
  return CRat(std::move(re), std::move(im));
}

inline std::string cplx_to_string(const CRat& v) {
  if (v.im == 0) return rat_to_string(v.re);
  std::string s = rat_to_string(v.re);
  s += (v.im < 0) ? "-" : "+";
  s += rat_to_string(v.im < 0 ? Rat(-v.im) : v.im);
  s += "j";
  return s;
}

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr bool complex_valued = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double conj(double x) { return x; }
  static double magnitude(double x) { return std::fabs(x); }
  static bool is_zero(double x, double tol = default_tolerance()) { return std::fabs(x) <= tol; }
  static double from_value(const CRat& v) {
    if (v.im != 0) throw std::domain_error("complex value in real-scalar context");
    return to_double(v.re);
  }
  static std::complex<double> to_c(double x) { return {x, 0.0}; }
};

template <>
struct scalar_traits<std::complex<double>> {
  static constexpr bool exact = false;
  static constexpr bool complex_valued = true;
  static std::complex<double> zero() { return {}; }
  static std::complex<double> one() { return {1.0, 0.0}; }
  static std::complex<double> conj(const std::complex<double>& x) { return std::conj(x); }
  static double magnitude(const std::complex<double>& x) { return std::abs(x); }
  static bool is_zero(const std::complex<double>& x, double tol = default_tolerance()) {
    return std::abs(x) <= tol;
  }
  static std::complex<double> from_value(const CRat& v) { return to_complex(v); }
  static std::complex<double> to_c(const std::complex<double>& x) { return x; }
};

template <>
struct scalar_traits<Rat> {
  static constexpr bool exact = true;
  static constexpr bool complex_valued = false;
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static Rat conj(const Rat& x) { return x; }
  static double magnitude(const Rat& x) { return std::fabs(to_double(x)); }
  static bool is_zero(const Rat& x, double = 0.0) { return x == 0; }
  static Rat from_value(const CRat& v) {
    if (v.im != 0) throw std::domain_error("complex value in rational-scalar context");
    return v.re;
  }
  static std::complex<double> to_c(const Rat& x) { return {to_double(x), 0.0}; }
};

template <>
struct scalar_traits<CRat> {
  static constexpr bool exact = true;
  static constexpr bool complex_valued = true;
  static CRat zero() { return CRat(); }
  static CRat one() { return CRat(1); }
  static CRat conj(const CRat& x) { return netkit::conj(x); }
  static double magnitude(const CRat& x) { return std::sqrt(to_double(norm(x))); }
  static bool is_zero(const CRat& x, double = 0.0) { return x.re == 0 && x.im == 0; }
  static CRat from_value(const CRat& v) { return v; }
  static std::complex<double> to_c(const CRat& x) { return to_complex(x); }
};

template <class T>
inline bool approx_equal(const T& a, const T& b, double rel = default_tolerance(),
                         double abs = kAbsTolerance) {
  if constexpr (scalar_traits<T>::exact) {
    (void)rel;
    (void)abs;
    return a == b;
  } else {
    double d = scalar_traits<T>::magnitude(a - b);
    double scale = std::max(scalar_traits<T>::magnitude(a), scalar_traits<T>::magnitude(b));
    return d <= std::max(abs, rel * scale);
  }
}

}  // namespace netkit
