#pragma once

#include <algorithm>
#include <complex>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "kahler/exact_scalar.hpp"

namespace kahler {

/// Exponent key of a monomial z^alpha zbar^beta: alpha (n entries) followed by beta (n entries).
using Exponents = std::vector<int>;

/// Finite polynomial in (z, zbar) on C^n with coefficients of type Scalar.
///
/// Terms are kept in a map ordered lexicographically by exponent key, merged,
/// and free of zero coefficients, so two polynomials compare equal iff they are
/// the same polynomial.
template <typename Scalar>
class HermitianPolynomial {
 public:
  using Traits = ScalarTraits<Scalar>;
  using TermMap = std::map<Exponents, Scalar>;

  HermitianPolynomial() = default;
  explicit HermitianPolynomial(int n) : n_(n) {}

  static HermitianPolynomial constant(int n, const Scalar& c) {
    HermitianPolynomial p(n);
    p.add_term(Exponents(2 * n, 0), c);
    return p;
  }
  static HermitianPolynomial monomial(std::span<const int> alpha, std::span<const int> beta, const Scalar& c) {
    if (alpha.size() != beta.size()) throw std::invalid_argument("monomial: alpha/beta size mismatch");
    HermitianPolynomial p(static_cast<int>(alpha.size()));
    Exponents key(alpha.begin(), alpha.end());
    key.insert(key.end(), beta.begin(), beta.end());
    p.add_term(std::move(key), c);
    return p;
  }
  /// |z_i|^2 as a polynomial.
  static HermitianPolynomial abs2(int n, int i) {
    Exponents key(2 * n, 0);
    key[i] = 1;
    key[n + i] = 1;
    HermitianPolynomial p(n);
    p.add_term(std::move(key), Traits::from_rational(1));
    return p;
  }

  int n() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(Exponents key, const Scalar& c) {
    if (static_cast<int>(key.size()) != 2 * n_) throw std::invalid_argument("add_term: exponent size mismatch");
    if (Traits::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(key), c);
    if (!inserted) {
      it->second += c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  Scalar coeff(const Exponents& key) const {
    const auto it = terms_.find(key);
    return it == terms_.end() ? Scalar{} : it->second;
  }

  static int degree_of(const Exponents& key) {
    int d = 0;
    for (int e : key) d += e;
    return d;
  }
  int max_degree() const {
    int d = -1;
    for (const auto& [key, c] : terms_) d = std::max(d, degree_of(key));
    return d;
  }

  /// Terms of total degree <= max_deg.
  HermitianPolynomial truncated(int max_deg) const {
    HermitianPolynomial out(n_);
    for (const auto& [key, c] : terms_)
      if (degree_of(key) <= max_deg) out.terms_.emplace(key, c);
    return out;
  }
  HermitianPolynomial homogeneous_part(int deg) const {
    HermitianPolynomial out(n_);
    for (const auto& [key, c] : terms_)
      if (degree_of(key) == deg) out.terms_.emplace(key, c);
    return out;
  }

  HermitianPolynomial operator-() const {
    HermitianPolynomial out(n_);
    for (const auto& [key, c] : terms_) out.terms_.emplace(key, -c);
    return out;
  }
  friend HermitianPolynomial operator+(const HermitianPolynomial& x, const HermitianPolynomial& y) {
    HermitianPolynomial out = x;
    out.n_ = std::max(x.n_, y.n_);
    for (const auto& [key, c] : y.terms_) out.add_term(key, c);
    return out;
  }
  friend HermitianPolynomial operator-(const HermitianPolynomial& x, const HermitianPolynomial& y) {
    return x + (-y);
  }
  friend HermitianPolynomial operator*(const Scalar& s, const HermitianPolynomial& x) {
    HermitianPolynomial out(x.n_);
    for (const auto& [key, c] : x.terms_) out.add_term(key, s * c);
    return out;
  }
  HermitianPolynomial& operator+=(const HermitianPolynomial& y) { return *this = *this + y; }
  HermitianPolynomial& operator-=(const HermitianPolynomial& y) { return *this = *this - y; }
  friend bool operator==(const HermitianPolynomial& x, const HermitianPolynomial& y) {
    return x.terms_ == y.terms_;
  }

  /// Product keeping only terms of total degree <= max_deg (exact for those degrees).
  static HermitianPolynomial multiply(const HermitianPolynomial& x, const HermitianPolynomial& y,
                                      int max_deg = 1 << 20) {
    HermitianPolynomial out(std::max(x.n_, y.n_));
    for (const auto& [kx, cx] : x.terms_) {
      const int dx = degree_of(kx);
      for (const auto& [ky, cy] : y.terms_) {
        if (dx + degree_of(ky) > max_deg) continue;
        Exponents key(kx.size());
        for (std::size_t i = 0; i < kx.size(); ++i) key[i] = kx[i] + ky[i];
        out.add_term(std::move(key), cx * cy);
      }
    }
    return out;
  }
  friend HermitianPolynomial operator*(const HermitianPolynomial& x, const HermitianPolynomial& y) {
    return multiply(x, y);
  }

  /// d/dz_i.
  HermitianPolynomial d(int i) const { return derivative(i); }
  /// d/dzbar_j.
  HermitianPolynomial dbar(int j) const { return derivative(n_ + j); }

  /// The polynomial conj(p(z)), i.e. terms (beta, alpha, conj c).
  HermitianPolynomial adjoint() const {
    HermitianPolynomial out(n_);
    for (const auto& [key, c] : terms_) {
      Exponents swapped(key.size());
      for (int i = 0; i < n_; ++i) {
        swapped[i] = key[n_ + i];
        swapped[n_ + i] = key[i];
      }
      out.add_term(std::move(swapped), Traits::conj(c));
    }
    return out;
  }

  Scalar constant_term() const { return coeff(Exponents(2 * n_, 0)); }

  /// Evaluate at z (requires a floating coefficient type convertible to complex<double>).
  std::complex<double> evaluate(const Eigen::VectorXcd& z) const
    requires std::is_same_v<Scalar, std::complex<double>>
  {
    std::complex<double> sum = 0.0;
    for (const auto& [key, c] : terms_) {
      std::complex<double> m = c;
      for (int i = 0; i < n_; ++i) {
        for (int e = 0; e < key[i]; ++e) m *= z[i];
        for (int e = 0; e < key[n_ + i]; ++e) m *= std::conj(z[i]);
      }
      sum += m;
    }
    return sum;
  }

 private:
  HermitianPolynomial derivative(int slot) const {
    HermitianPolynomial out(n_);
    for (const auto& [key, c] : terms_) {
      if (key[slot] == 0) continue;
      Exponents k = key;
      const int e = k[slot]--;
      out.add_term(std::move(k), Traits::from_rational(e) * c);
    }
    return out;
  }

  int n_ = 0;
  TermMap terms_;
};

using ComplexPolynomial = HermitianPolynomial<std::complex<double>>;
using ExactPolynomial = HermitianPolynomial<ExactComplex>;

/// Substitute numeric parameter values into an exact polynomial.
ComplexPolynomial evaluate_parameters(const ExactPolynomial& p, double a, double lambda);

}  // namespace kahler
