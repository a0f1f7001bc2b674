#pragma once

#include <vector>

#include <Eigen/Core>

#include "kahler/metric_field.hpp"
#include "kahler/potential.hpp"

namespace kahler {

struct HermitianMetric {
  Eigen::VectorXcd point;
  Eigen::MatrixXcd g;      ///< g(i, j) = g_{i jbar}, Hermitian positive definite
  Eigen::MatrixXcd g_inv;  ///< matrix inverse of g
};

/// Curvature components R_{i jbar k lbar} in the convention where the
/// Fubini-Study metric has R_{1 1bar 1 1bar} > 0. Conversion to the Jacobi
/// convention R_uv = <R(e0, e_u) e0, e_v> happens in real_frame_components.
struct CurvatureTensor {
  HermitianMetric metric;
  KahlerTensor components;
};

/// R_uv = R(e0, e_u, e0, e_v) in a J-adapted orthonormal frame with e_1 = J e_0.
/// With this convention the Jacobi equation reads J'' = R J and
/// sum_u R_uu = -Ric(e0, e0).
struct RealFrameCurvature {
  Eigen::VectorXd e0;            ///< unit tangent, real coordinates (x_1, y_1, x_2, y_2, ...)
  Eigen::MatrixXcd unitary;      ///< columns eps_a; e_{2a} = eps_a, e_{2a+1} = J eps_a
  Eigen::MatrixXd frame;         ///< 2n x 2n, column u = e_u in real coordinates
  Eigen::MatrixXd R;             ///< (2n-1) x (2n-1), indices u, v = 1..2n-1
};

/// Derivatives of R_uv along the geodesic from p in direction e0, in the
/// parallel frame. R[j] is the j-th derivative; ricci[j] = -trace(R[j]).
struct CurvatureJets {
  Eigen::VectorXd e0;
  int order = 0;
  std::vector<Eigen::MatrixXd> R;
  std::vector<double> ricci;
  std::vector<double> error_estimate;  ///< max-abs Richardson correction per order
};

struct JetOptions {
  int max_order = 4;
  std::vector<double> steps = {2e-2, 1e-2, 5e-3, 2.5e-3};        ///< orders 1-2
  std::vector<double> high_order_steps = {4e-2, 2e-2, 1e-2};     ///< orders 3-4
  double tol = 1e-13;
};

HermitianMetric metric_at(const KahlerMetricField& field, const Eigen::VectorXcd& z);
HermitianMetric metric_at(const RealAnalyticPotential& pot, const Eigen::VectorXcd& z);

CurvatureTensor curvature_at(const KahlerMetricField& field, const Eigen::VectorXcd& z);
CurvatureTensor curvature_at(const RealAnalyticPotential& pot, const Eigen::VectorXcd& z);

/// Complex Ricci form R_{i jbar} = g^{k lbar} R_{i jbar k lbar}; Ric = K g means R_{i jbar} = K g_{i jbar}.
Eigen::MatrixXcd ricci_at(const CurvatureTensor& tensor);
Eigen::MatrixXcd ricci_at(const RealAnalyticPotential& pot, const Eigen::VectorXcd& z);

/// s = g^{i jbar} R_{i jbar}; equals nK when Ric = K g.
double scalar_at(const CurvatureTensor& tensor);
double scalar_at(const RealAnalyticPotential& pot, const Eigen::VectorXcd& z);

/// Ric(e0, e0) for a real unit vector, in the same normalization as ricci_at.
double ricci_in_direction(const CurvatureTensor& tensor, const Eigen::VectorXd& e0);

/// Normalizes e0 (rejecting near-zero input) and completes a J-adapted orthonormal frame.
RealFrameCurvature real_frame_components(const CurvatureTensor& tensor, const Eigen::VectorXd& e0);
/// Same with a caller-supplied unitary frame (first column along e0).
RealFrameCurvature real_frame_components_in_frame(const CurvatureTensor& tensor, const Eigen::MatrixXcd& unitary);

/// Covariant-derivative jets by Richardson-extrapolated central differences of
/// R_uv sampled along the geodesic in the parallel frame.
CurvatureJets curvature_jets_along(std::shared_ptr<const KahlerMetricField> field, const Eigen::VectorXcd& p,
                                   const Eigen::VectorXd& e0, int order, const JetOptions& options = {});
CurvatureJets curvature_jets_along(const RealAnalyticPotential& pot, const Eigen::VectorXcd& p,
                                   const Eigen::VectorXd& e0, int order, const JetOptions& options = {});

}  // namespace kahler
