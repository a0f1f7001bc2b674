#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace kahler {

/// Quadrature rule on the unit sphere S^{2n-1} of C^n = R^{2n}. Nodes are real
/// 2n-vectors (Re z_1, Im z_1, ..., Re z_n, Im z_n); weights sum to the sphere
/// volume 2 pi^n / (n-1)!.
struct SphereRule {
  int n = 0;
  int degree = 0;
  std::vector<Eigen::VectorXd> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Tensor rule in coordinates z_k = sqrt(t_k) e^{i phi_k}: Gauss-Legendre on the
/// simplex of (t_k) (collapsed coordinates for n = 3) times an even trapezoid
/// rule in each phase, so the rule is invariant under z -> -z. Exact for real
/// polynomials of total degree <= degree. Supports n in {2, 3}, degree <= 20.
SphereRule build_rule(int n, int degree);

/// Default exactness: 12 for n = 2, 8 for n = 3.
int default_rule_degree(int n);

/// Gauss-Legendre nodes and weights on [0, 1] (Golub-Welsch).
void gauss_legendre01(int points, std::vector<double>& x, std::vector<double>& w);

/// Integral of f over the sphere (the weighted node sum, fixed order, compensated).
double sphere_average(const SphereRule& rule, const std::function<double(const Eigen::VectorXd&)>& f);

/// Same integral from precomputed node values (values[i] belongs to rule.nodes[i]).
double sphere_sum(const SphereRule& rule, const std::vector<double>& values);

/// Exact integral over S^{2n-1} of prod_k |z_k|^{2 m_k}: 2 pi^n prod m_k! / (n - 1 + sum m_k)!.
double sphere_monomial_integral(const std::vector<int>& m);

}  // namespace kahler
