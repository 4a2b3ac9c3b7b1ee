#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace resodim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

/// A real number in one of two backends: exact rational or double.
///
/// Arithmetic between two exact values stays exact. As soon as a float
/// operand participates, the result is float-mode, so an exact chain of
/// computation can never absorb rounding error without changing mode.
/// Integer literals construct exact values.
class Scalar {
 public:
  Scalar() : v_(Rational(0)) {}
  Scalar(int n) : v_(Rational(n)) {}
  Scalar(long n) : v_(Rational(n)) {}
  Scalar(long long n) : v_(Rational(n)) {}

  static Scalar exact(Rational r) {
    Scalar s;
    s.v_ = std::move(r);
    return s;
  }
  static Scalar exact(long long num, long long den) {
    if (den == 0) throw DomainError("Scalar: zero denominator");
    return exact(Rational(num, den));
  }
  static Scalar approx(double x) {
    if (!std::isfinite(x)) throw NumericError("Scalar: non-finite value");
    Scalar s;
    s.v_ = x;
    return s;
  }

  bool is_exact() const { return std::holds_alternative<Rational>(v_); }

  const Rational& rat() const {
    if (!is_exact())
      throw InternalError("Scalar: rational value requested from float mode");
    return std::get<Rational>(v_);
  }

  double dbl() const {
    if (is_exact()) return std::get<Rational>(v_).convert_to<double>();
    return std::get<double>(v_);
  }

  Scalar to_approx() const { return approx(dbl()); }

  Scalar operator-() const {
    if (is_exact()) return exact(-rat());
    return approx(-dbl());
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return exact(a.rat() + b.rat());
    return approx(a.dbl() + b.dbl());
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return exact(a.rat() - b.rat());
    return approx(a.dbl() - b.dbl());
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return exact(a.rat() * b.rat());
    return approx(a.dbl() * b.dbl());
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) {
      if (b.rat() == 0) throw DomainError("Scalar: division by zero");
      return exact(a.rat() / b.rat());
    }
    return approx(a.dbl() / b.dbl());
  }

  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar& operator/=(const Scalar& b) { return *this = *this / b; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return a.rat() == b.rat();
    return a.dbl() == b.dbl();
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  friend bool operator<(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return a.rat() < b.rat();
    return a.dbl() < b.dbl();
  }
  friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return !(b < a); }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return !(a < b); }

  Scalar abs() const {
    if (is_exact()) return exact(boost::multiprecision::abs(rat()));
    return approx(std::fabs(dbl()));
  }

  int sign() const {
    if (is_exact()) return rat().sign();
    return dbl() > 0 ? 1 : (dbl() < 0 ? -1 : 0);
  }

  /// Integer power; exact stays exact.
  Scalar pow(long e) const {
    if (is_exact()) {
      if (e >= 0) {
        Rational r(1);
        Rational base = rat();
        for (long i = 0; i < e; ++i) r *= base;
        return exact(r);
      }
      if (rat() == 0) throw DomainError("Scalar: 0 to negative power");
      Rational r(1);
      Rational base = rat();
      for (long i = 0; i < -e; ++i) r *= base;
      return exact(1 / r);
    }
    return approx(std::pow(dbl(), static_cast<double>(e)));
  }

  /// Largest integer <= value.
  BigInt floor() const {
    if (is_exact()) {
      const Rational& r = rat();
      BigInt q = numerator(r) / denominator(r);
      if (r < 0 && q * denominator(r) != numerator(r)) --q;
      return q;
    }
    double f = std::floor(dbl());
    return BigInt(static_cast<long long>(f));
  }

  std::string str() const {
    if (is_exact()) return rat().str();
    return std::to_string(dbl());
  }

 private:
  std::variant<Rational, double> v_;
};

inline Scalar abs(const Scalar& s) { return s.abs(); }

/// Parses "p/q", integer, or decimal text. In exact mode decimals become
/// rationals over a power of ten; in float mode everything becomes double.
Scalar parse_scalar(const std::string& text, bool exact_mode);

}  // namespace resodim
