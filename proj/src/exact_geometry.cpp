#include "kahler/exact_geometry.hpp"

#include <numeric>
#include <stdexcept>

#include "kahler/errors.hpp"

namespace kahler::exact {

namespace {

ExactComplex rational(std::int64_t p, std::int64_t q = 1) { return ExactComplex(Rational(p, q)); }

ExactComplex coefficient_at_origin(const ExactPolynomial& p) { return p.constant_term(); }

}  // namespace

PolyMatrix metric(const ExactPolynomial& f, int max_degree) {
  const int n = f.n();
  PolyMatrix g(n, std::vector<ExactPolynomial>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[i][j] = f.d(i).dbar(j).truncated(max_degree);
  return g;
}

ExactPolynomial determinant(const PolyMatrix& g, int max_degree) {
  const int n = static_cast<int>(g.size());
  if (n == 0 || n > 4) throw ValidationError("exact determinant: supported sizes are 1..4");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  ExactPolynomial det(g[0][0].n());
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    ExactPolynomial term = ExactPolynomial::constant(g[0][0].n(), rational(inversions % 2 ? -1 : 1));
    for (int i = 0; i < n; ++i) term = ExactPolynomial::multiply(term, g[i][perm[i]], max_degree);
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

ExactPolynomial log1p(const ExactPolynomial& x, int max_degree) {
  if (!x.constant_term().is_zero()) throw ValidationError("log1p: argument has a constant term");
  int min_degree = max_degree + 1;
  for (const auto& [key, c] : x.terms()) min_degree = std::min(min_degree, ExactPolynomial::degree_of(key));
  ExactPolynomial out(x.n());
  if (min_degree > max_degree) return out;
  ExactPolynomial power = x.truncated(max_degree);
  for (int k = 1; k * min_degree <= max_degree; ++k) {
    out += rational(k % 2 ? 1 : -1, k) * power;
    power = ExactPolynomial::multiply(power, x, max_degree);
  }
  return out;
}

ExactPolynomial ricci_shift_potential(const ExactPolynomial& f, const ExactComplex& K, int max_degree) {
  // det g to degree max_degree needs f to degree max_degree + 2.
  const PolyMatrix g = metric(f, max_degree);
  const ExactPolynomial det = determinant(g, max_degree);
  if (det.constant_term() != rational(1)) throw ValidationError("ricci_shift_potential: det g(0) must be 1");
  const ExactPolynomial x = det - ExactPolynomial::constant(f.n(), rational(1));
  return (-log1p(x, max_degree) - K * f).truncated(max_degree);
}

PolyMatrix hessian(const ExactPolynomial& phi) { return metric(phi, 1 << 20); }

int lowest_degree(const PolyMatrix& m) {
  int lowest = -1;
  for (const auto& row : m)
    for (const auto& p : row)
      for (const auto& [key, c] : p.terms()) {
        const int d = ExactPolynomial::degree_of(key);
        if (lowest < 0 || d < lowest) lowest = d;
      }
  return lowest;
}

std::vector<ExactComplex> curvature_at_origin(const ExactPolynomial& f) {
  const int n = f.n();
  const PolyMatrix g = metric(f, 1 << 20);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (coefficient_at_origin(g[i][j]) != rational(i == j ? 1 : 0))
        throw ValidationError("curvature_at_origin: g(0) must be the identity");
  std::vector<ExactComplex> R(static_cast<std::size_t>(n * n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          ExactComplex v = -coefficient_at_origin(g[i][j].d(k).dbar(l));
          for (int p = 0; p < n; ++p)
            v += coefficient_at_origin(g[i][p].d(k)) * coefficient_at_origin(g[p][j].dbar(l));
          R[((i * n + j) * n + k) * n + l] = v;
        }
  return R;
}

}  // namespace kahler::exact
