#pragma once

#include <vector>

#include "kahler/hermitian_poly.hpp"

namespace kahler::exact {

/// Matrix of exact polynomials, row-major: m[i][j].
using PolyMatrix = std::vector<std::vector<ExactPolynomial>>;

/// g_{i jbar} = d_i dbar_j f, each truncated to total degree <= max_degree.
PolyMatrix metric(const ExactPolynomial& f, int max_degree);

/// Determinant of a polynomial matrix (Leibniz expansion), truncated to max_degree.
ExactPolynomial determinant(const PolyMatrix& g, int max_degree);

/// log(1 + x) truncated to total degree max_degree; x must have no constant term.
ExactPolynomial log1p(const ExactPolynomial& x, int max_degree);

/// Potential of Ric - K g: -log det g - K f, truncated to max_degree.
/// Requires det g to have constant term 1.
ExactPolynomial ricci_shift_potential(const ExactPolynomial& f, const ExactComplex& K, int max_degree);

/// Components d_i dbar_j of a potential (degrees shift down by two).
PolyMatrix hessian(const ExactPolynomial& phi);

/// Smallest total degree carrying a nonzero coefficient in any entry; -1 if all vanish.
int lowest_degree(const PolyMatrix& m);

/// Curvature R_{i jbar k lbar} at the origin: -d_k dbar_l g_{i jbar}(0) + g^{p qbar} d_k g_{i qbar} dbar_l g_{p jbar}
/// at 0. Requires g(0) = identity; flat index ((i n + j) n + k) n + l.
std::vector<ExactComplex> curvature_at_origin(const ExactPolynomial& f);

}  // namespace kahler::exact
