#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "kahler/curvature.hpp"
#include "kahler/metric_field.hpp"
#include "kahler/power_series.hpp"
#include "kahler/sphere_quadrature.hpp"

namespace kahler {

/// Taylor coefficients of the Jacobi fields J_u(r) = sum_i C^v_{u,i} r^i e_v in
/// the parallel frame. A[i](v, u) = C^v_{u,i}; A[0] is zero.
struct JacobiCoefficients {
  Eigen::VectorXd e0;
  int order = 0;
  std::vector<Eigen::MatrixXd> A;

  double C(int u, int i, int v) const { return A[i](v, u); }
};

/// Solves J'' = R(r) J coefficientwise:
/// C^v_{u,i} = sum_{k+j=i-2} sum_w C^w_{u,k} R^{(j)}_{vw} / (j! i (i-1)).
/// Needs jets through order N - 3.
JacobiCoefficients jacobi_recursion(const CurvatureJets& jets, int N);

/// Per-direction expansion of sqrt det <J_u, J_v> / r^{2n-1} through r^{N-1},
/// from the Gram determinant and a series square root.
SeriesExpansion density_series(const JacobiCoefficients& coeffs, int N);

/// Rule nodes carried to unit-speed directions at p (Euclidean sphere to the
/// unit sphere of g(p)), so weighted sums are integrals over the unit tangent sphere.
std::vector<Eigen::VectorXd> tangent_directions(const KahlerMetricField& field, const Eigen::VectorXcd& p,
                                                const SphereRule& rule);

/// Per-direction series to r^order from a direction at p (jets, recursion, density).
SeriesExpansion direction_series(std::shared_ptr<const KahlerMetricField> field, const Eigen::VectorXcd& p,
                                 const Eigen::VectorXd& e0, int order);

/// Sphere average of per-direction series: c_k = sum_i w_i d_k(theta_i).
/// Provenance "quadrature".
SeriesExpansion averaged_series(std::shared_ptr<const KahlerMetricField> field, const Eigen::VectorXcd& p,
                                const SphereRule& rule, int order, int threads = 0);

struct C4Average {
  double value = 0.0;
  bool einstein = false;        ///< Ric = K g held at p
  double einstein_residual = 0.0;
  double K = 0.0;               ///< s / n at p
  std::string warning;
};

/// Sphere integral of the per-direction r^4 coefficient at p. When Ric is not
/// a multiple of g the raw integral is returned with a warning.
C4Average c4_sphere_average(std::shared_ptr<const KahlerMetricField> field, const Eigen::VectorXcd& p,
                            const SphereRule& rule, int threads = 0);

struct FitOptions {
  bool even_only = true;  ///< fit only even powers (sphere-averaged W is even in r)
  double max_condition = 1e12;
};

/// Least-squares polynomial fit of W(r) through r^N. Requires at least 2 samples
/// per unknown. The condition number is that of the column-scaled design
/// matrix; the cross-validation residual is the max relative misfit on
/// `validation` (empty means none).
SeriesExpansion fit_w_series(const std::vector<std::pair<double, double>>& samples, int N,
                             const std::vector<std::pair<double, double>>& validation = {},
                             const FitOptions& options = {});

/// Geometric grid of `count` radii in [r_min, r_max].
std::vector<double> geometric_grid(double r_min, double r_max, int count);

/// W(r) = sum_i w_i density_i(r) / r^{2n-1} sampled on the radii by shooting one
/// ray per quadrature node.
std::vector<std::pair<double, double>> sample_w(std::shared_ptr<const KahlerMetricField> field,
                                                const Eigen::VectorXcd& p, const SphereRule& rule,
                                                const std::vector<double>& radii, double tol = 1e-12,
                                                int threads = 0);

struct R11Identity {
  double lhs = 0.0;  ///< sphere integral of R_11 = R(e0, Je0, e0, Je0)
  double rhs = 0.0;  ///< C3 * s
  double residual = 0.0;
  double C3 = 0.0;
};

/// Calibrates C3 = (integral of R_11) / s on the space form of dimension n with Ric = K_cal.
double calibrate_c3(int n, const SphereRule& rule, double K_cal = 1.0);

/// Compares the sphere integral of R_11 at p with C3 * s(p).
R11Identity kahler_r11_identity_check(const KahlerMetricField& field, const Eigen::VectorXcd& p,
                                      const SphereRule& rule, double C3);

}  // namespace kahler
