#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kahler/hermitian_poly.hpp"

namespace kahler {

/// One term coeff * z^alpha * zbar^beta of a potential.
struct Monomial {
  std::vector<int> alpha;
  std::vector<int> beta;
  std::complex<double> coeff;

  int degree() const;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Name and parameters of a catalog entry, kept so a catalog potential
/// serializes back to its catalog form.
struct CatalogId {
  std::string name;
  std::map<std::string, double> params;
  friend bool operator==(const CatalogId&, const CatalogId&) = default;
};

/// Real-analytic Kähler potential on a ball around the origin of C^n, given as a
/// finite Hermitian polynomial. Immutable after construction.
class RealAnalyticPotential {
 public:
  /// Validates and canonicalizes the term list: rejects negative exponents,
  /// degrees above max_degree, non-Hermitian lists and metrics that are not
  /// positive definite at the origin.
  RealAnalyticPotential(int n, std::vector<Monomial> terms, int max_degree, double validity_radius);

  int n() const { return n_; }
  int max_degree() const { return max_degree_; }
  double validity_radius() const { return validity_radius_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  const ComplexPolynomial& polynomial() const { return poly_; }

  /// Exact coefficient form, present for catalog entries with rational structure.
  const std::optional<ExactPolynomial>& exact() const { return exact_; }
  /// Parameter values (a, lambda) substituted into exact() to get terms().
  std::pair<double, double> exact_parameters() const { return exact_params_; }
  const std::optional<CatalogId>& catalog_id() const { return catalog_; }

  /// Short label for reports.
  std::string label() const;

  /// f(z, zbar); real for a valid potential.
  double evaluate(const Eigen::VectorXcd& z) const;

  /// d^|holo| d^|antiholo| f / dz_{holo[0]}... dzbar_{antiholo[0]}... at z.
  /// Indices are variable numbers 0..n-1; order does not matter. Orders above
  /// max_degree give exact zero.
  std::complex<double> mixed_partial(std::span<const int> holo, std::span<const int> antiholo,
                                     const Eigen::VectorXcd& z) const;

  RealAnalyticPotential with_exact(ExactPolynomial exact, double a, double lambda) const;
  RealAnalyticPotential with_catalog_id(CatalogId id) const;

 private:
  int n_;
  int max_degree_;
  double validity_radius_;
  std::vector<Monomial> terms_;
  ComplexPolynomial poly_;
  std::optional<ExactPolynomial> exact_;
  std::pair<double, double> exact_params_{0.0, 0.0};
  std::optional<CatalogId> catalog_;
};

namespace catalog {

/// sum_i |z_i|^2.
RealAnalyticPotential flat(int n);

/// Polynomial truncation (to max_degree) of (1/kappa) log(1 + kappa |z|^2),
/// kappa = K/(n+1): the complex space form with Ric = K near the origin.
RealAnalyticPotential space_form(int n, double K, int max_degree = 16);

/// The dimension-2 counterexample potential with quartic, sextic and degree-8
/// correction terms; exact() carries the coefficients as polynomials in (a, lambda).
RealAnalyticPotential section6(double a, double lambda);

/// Exact term list of section6 with symbolic a and lambda.
ExactPolynomial section6_exact();

/// |z|^2 plus random Hermitian terms of degree 4 and 6 scaled by magnitude.
/// Even in z, so invariant under z -> -z.
RealAnalyticPotential perturbed(int n, std::uint64_t seed, double magnitude);

/// Look up by name: "flat" (n), "space_form" (n, K), "section6" (a, lambda),
/// "perturbed" (n, seed, magnitude).
RealAnalyticPotential by_id(const CatalogId& id);

}  // namespace catalog

}  // namespace kahler
