#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>

#include "kahler/rational.hpp"

namespace kahler {

/// Polynomial in the two catalog parameters (a, lambda) with exact rational
/// coefficients. Keys are (power of a, power of lambda).
class ParamPoly {
 public:
  using Key = std::pair<int, int>;

  ParamPoly() = default;
  ParamPoly(Rational c) { add_term(0, 0, c); }  // NOLINT(implicit)
  ParamPoly(std::int64_t c) : ParamPoly(Rational(c)) {}  // NOLINT(implicit)

  static ParamPoly a(Rational c = 1) { return monomial(1, 0, c); }
  static ParamPoly lambda(Rational c = 1) { return monomial(0, 1, c); }
  static ParamPoly monomial(int pa, int pl, Rational c) {
    ParamPoly p;
    p.add_term(pa, pl, c);
    return p;
  }

  const std::map<Key, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// True when the polynomial is a constant; `value` receives it.
  bool is_constant(Rational* value = nullptr) const;

  /// Coefficient of a^pa lambda^pl (zero when absent).
  Rational coeff(int pa, int pl) const;

  double evaluate(double a, double lambda) const;

  ParamPoly operator-() const;
  friend ParamPoly operator+(const ParamPoly& x, const ParamPoly& y);
  friend ParamPoly operator-(const ParamPoly& x, const ParamPoly& y) { return x + (-y); }
  friend ParamPoly operator*(const ParamPoly& x, const ParamPoly& y);
  ParamPoly& operator+=(const ParamPoly& y) { return *this = *this + y; }
  ParamPoly& operator-=(const ParamPoly& y) { return *this = *this - y; }
  ParamPoly& operator*=(const ParamPoly& y) { return *this = *this * y; }
  friend bool operator==(const ParamPoly& x, const ParamPoly& y) { return x.terms_ == y.terms_; }
  friend bool operator!=(const ParamPoly& x, const ParamPoly& y) { return !(x == y); }

  /// Human-readable form such as "12*a + 84*a^2".
  std::string str() const;

 private:
  void add_term(int pa, int pl, const Rational& c);
  std::map<Key, Rational> terms_;
};

/// Complex number whose real and imaginary parts are ParamPoly values.
struct ExactComplex {
  ParamPoly re;
  ParamPoly im;

  ExactComplex() = default;
  ExactComplex(ParamPoly r, ParamPoly i = {}) : re(std::move(r)), im(std::move(i)) {}  // NOLINT(implicit)
  ExactComplex(Rational r) : re(r) {}  // NOLINT(implicit)
  ExactComplex(std::int64_t r) : re(Rational(r)) {}  // NOLINT(implicit)

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  ExactComplex conj() const { return {re, -im}; }
  std::complex<double> evaluate(double a, double lambda) const {
    return {re.evaluate(a, lambda), im.evaluate(a, lambda)};
  }

  ExactComplex operator-() const { return {-re, -im}; }
  friend ExactComplex operator+(const ExactComplex& x, const ExactComplex& y) { return {x.re + y.re, x.im + y.im}; }
  friend ExactComplex operator-(const ExactComplex& x, const ExactComplex& y) { return {x.re - y.re, x.im - y.im}; }
  friend ExactComplex operator*(const ExactComplex& x, const ExactComplex& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  ExactComplex& operator+=(const ExactComplex& y) { return *this = *this + y; }
  ExactComplex& operator-=(const ExactComplex& y) { return *this = *this - y; }
  ExactComplex& operator*=(const ExactComplex& y) { return *this = *this * y; }
  friend bool operator==(const ExactComplex& x, const ExactComplex& y) { return x.re == y.re && x.im == y.im; }
  friend bool operator!=(const ExactComplex& x, const ExactComplex& y) { return !(x == y); }

  std::string str() const;
};

/// Operations the polynomial and series templates need from a coefficient type.
template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<std::complex<double>> {
  using Scalar = std::complex<double>;
  static Scalar from_rational(const Rational& q) { return {q.to_double(), 0.0}; }
  static bool is_zero(const Scalar& x) { return x == Scalar(0.0, 0.0); }
  static Scalar conj(const Scalar& x) { return std::conj(x); }
  static Scalar imag_unit() { return {0.0, 1.0}; }
  /// Inverse of a constant; throws when the inverse cannot be represented.
  static Scalar inverse(const Scalar& x) { return 1.0 / x; }
};

template <>
struct ScalarTraits<ExactComplex> {
  using Scalar = ExactComplex;
  static Scalar from_rational(const Rational& q) { return Scalar(q); }
  static bool is_zero(const Scalar& x) { return x.is_zero(); }
  static Scalar conj(const Scalar& x) { return x.conj(); }
  static Scalar imag_unit() { return {ParamPoly{}, ParamPoly(Rational(1))}; }
  static Scalar inverse(const Scalar& x);
};

}  // namespace kahler
