#pragma once

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Core>
#include <Eigen/QR>

#include "kahler/potential.hpp"

namespace kt {

inline Eigen::VectorXcd random_point(std::mt19937_64& rng, int n, double radius) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::VectorXcd z(n);
  for (int i = 0; i < n; ++i) z[i] = {N(rng), N(rng)};
  std::uniform_real_distribution<double> U(0.0, 1.0);
  return z.normalized() * radius * U(rng);
}

inline Eigen::VectorXd random_direction(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::VectorXd v(2 * n);
  for (int i = 0; i < 2 * n; ++i) v[i] = N(rng);
  return v.normalized();
}

inline Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = {N(rng), N(rng)};
  return Eigen::HouseholderQR<Eigen::MatrixXcd>(A).householderQ();
}

/// Potential f(U z) expanded as a polynomial in z.
inline kahler::RealAnalyticPotential compose_linear(const kahler::RealAnalyticPotential& f, const Eigen::MatrixXcd& U) {
  using kahler::ComplexPolynomial;
  const int n = f.n();
  std::vector<ComplexPolynomial> w(n, ComplexPolynomial(n)), wb(n, ComplexPolynomial(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      kahler::Exponents k(2 * n, 0), kb(2 * n, 0);
      k[j] = 1;
      kb[n + j] = 1;
      w[i].add_term(k, U(i, j));
      wb[i].add_term(kb, std::conj(U(i, j)));
    }
  ComplexPolynomial out(n);
  for (const auto& m : f.terms()) {
    ComplexPolynomial t = ComplexPolynomial::constant(n, m.coeff);
    for (int i = 0; i < n; ++i) {
      for (int e = 0; e < m.alpha[i]; ++e) t = t * w[i];
      for (int e = 0; e < m.beta[i]; ++e) t = t * wb[i];
    }
    out += t;
  }
  std::vector<kahler::Monomial> terms;
  for (const auto& [key, c] : out.terms()) {
    if (std::abs(c) < 1e-15) continue;
    terms.push_back({{key.begin(), key.begin() + n}, {key.begin() + n, key.end()}, c});
  }
  // Rounding can break exact Hermitian pairing; symmetrize.
  for (auto& t : terms) {
    for (const auto& s : terms)
      if (s.alpha == t.beta && s.beta == t.alpha) t.coeff = 0.5 * (t.coeff + std::conj(s.coeff));
  }
  return kahler::RealAnalyticPotential(n, terms, f.max_degree(), f.validity_radius());
}

}  // namespace kt
