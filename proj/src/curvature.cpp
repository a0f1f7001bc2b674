#include "kahler/curvature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "kahler/errors.hpp"
#include "kahler/geodesic_flow.hpp"

namespace kahler {

namespace {

void require_positive(const Eigen::MatrixXcd& g) {
  const Eigen::MatrixXcd h = 0.5 * (g + g.adjoint());
  const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues()[0];
  if (!(lo > 0.0)) throw OutsideKahlerDomain("metric is not positive definite at this point", lo);
}

HermitianMetric make_metric(const MetricJet& jet) {
  require_positive(jet.g);
  return {jet.point, jet.g, jet.g.inverse()};
}

}  // namespace

HermitianMetric metric_at(const KahlerMetricField& field, const Eigen::VectorXcd& z) {
  return make_metric(field.evaluate(z, false));
}

HermitianMetric metric_at(const RealAnalyticPotential& pot, const Eigen::VectorXcd& z) {
  return metric_at(PolynomialMetricField(pot), z);
}

CurvatureTensor curvature_at(const KahlerMetricField& field, const Eigen::VectorXcd& z) {
  MetricJet jet = field.evaluate(z, true);
  HermitianMetric metric = make_metric(jet);
  return {std::move(metric), std::move(jet.curvature)};
}

CurvatureTensor curvature_at(const RealAnalyticPotential& pot, const Eigen::VectorXcd& z) {
  return curvature_at(PolynomialMetricField(pot), z);
}

Eigen::MatrixXcd ricci_at(const CurvatureTensor& tensor) {
  const int n = tensor.components.n();
  const Eigen::MatrixXcd H = tensor.metric.g_inv.transpose();  // H(k, l) = g^{k lbar}
  Eigen::MatrixXcd ric = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) ric(i, j) += H(k, l) * tensor.components(i, j, k, l);
  return ric;
}

Eigen::MatrixXcd ricci_at(const RealAnalyticPotential& pot, const Eigen::VectorXcd& z) {
  return ricci_at(curvature_at(pot, z));
}

double scalar_at(const CurvatureTensor& tensor) {
  return (tensor.metric.g_inv.transpose().cwiseProduct(ricci_at(tensor))).sum().real();
}

double scalar_at(const RealAnalyticPotential& pot, const Eigen::VectorXcd& z) {
  return scalar_at(curvature_at(pot, z));
}

double ricci_in_direction(const CurvatureTensor& tensor, const Eigen::VectorXd& e0) {
  const Eigen::VectorXcd xi = to_holomorphic(e0);
  return real_inner(ricci_at(tensor), xi, xi);
}

RealFrameCurvature real_frame_components(const CurvatureTensor& tensor, const Eigen::VectorXd& e0) {
  const int n = tensor.components.n();
  if (e0.size() != 2 * n) throw ValidationError("real_frame_components: direction has wrong size");
  if (e0.norm() < 1e-12) throw ValidationError("real_frame_components: degenerate direction");
  return real_frame_components_in_frame(tensor, unitary_frame(tensor.metric.g, to_holomorphic(e0)));
}

RealFrameCurvature real_frame_components_in_frame(const CurvatureTensor& tensor, const Eigen::MatrixXcd& unitary) {
  const int n = tensor.components.n();
  RealFrameCurvature out;
  out.unitary = unitary;
  out.e0 = to_real(unitary.col(0));
  out.frame.resize(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    out.frame.col(2 * a) = to_real(unitary.col(a));
    out.frame.col(2 * a + 1) = to_real(std::complex<double>(0.0, 1.0) * unitary.col(a));
  }
  out.R = frame_curvature(tensor.components, unitary);
  return out;
}

namespace {

// Central difference of order `order` with step h from samples f(k h), k = -2..2.
Eigen::MatrixXd central(int order, double h, const Eigen::MatrixXd& fm2, const Eigen::MatrixXd& fm1,
                        const Eigen::MatrixXd& f0, const Eigen::MatrixXd& f1, const Eigen::MatrixXd& f2) {
  switch (order) {
    case 0: return f0;
    case 1: return (f1 - fm1) / (2.0 * h);
    case 2: return (f1 - 2.0 * f0 + fm1) / (h * h);
    case 3: return (f2 - 2.0 * f1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
    case 4: return (f2 - 4.0 * f1 + 6.0 * f0 - 4.0 * fm1 + fm2) / (h * h * h * h);
    default: throw ValidationError("curvature jets: order above 4 is not supported");
  }
}

}  // namespace

CurvatureJets curvature_jets_along(std::shared_ptr<const KahlerMetricField> field, const Eigen::VectorXcd& p,
                                   const Eigen::VectorXd& e0, int order, const JetOptions& options) {
  if (order < 0 || order > options.max_order || order > 4)
    throw ValidationError("curvature_jets_along: order outside [0, " + std::to_string(options.max_order) + "]");
  if (e0.norm() < 1e-12) throw ValidationError("curvature_jets_along: degenerate direction");
  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    if (v.empty()) throw ValidationError("curvature_jets_along: empty step list");
    return v;
  };
  const std::vector<double> low = sorted(options.steps);
  const std::vector<double> high = sorted(options.high_order_steps);
  const double reach = std::max(low.front(), order >= 3 ? 2.0 * high.front() : 0.0);

  RayOptions ro;
  ro.tol = options.tol;
  ro.r_back = reach;
  ro.jacobi = false;
  for (double h : low) ro.checkpoints.insert(ro.checkpoints.end(), {-h, h});
  if (order >= 3)
    for (double h : high) ro.checkpoints.insert(ro.checkpoints.end(), {-2 * h, -h, h, 2 * h});
  const GeodesicRay ray = shoot(field, p, e0, reach, ro);
  if (ray.truncated()) throw TruncationError("curvature_jets_along: geodesic leaves the validity ball", 0.0);

  auto R_at = [&](double r) { return frame_curvature_along(ray, r); };
  const Eigen::MatrixXd R0 = R_at(0.0);
  const int m = static_cast<int>(R0.rows());
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(m, m);

  // D[j][s]: j-th central difference at the s-th step of its step list.
  std::vector<std::vector<Eigen::MatrixXd>> D(order + 1);
  std::vector<std::vector<double>> step_of(order + 1);
  for (double h : low) {
    const Eigen::MatrixXd f1 = R_at(h), fm1 = R_at(-h);
    for (int j = 1; j <= std::min(order, 2); ++j) {
      D[j].push_back(central(j, h, zero, fm1, R0, f1, zero));
      step_of[j].push_back(h);
    }
  }
  if (order >= 3)
    for (double h : high) {
      const Eigen::MatrixXd f2 = R_at(2 * h), f1 = R_at(h), fm1 = R_at(-h), fm2 = R_at(-2 * h);
      for (int j = 3; j <= order; ++j) {
        D[j].push_back(central(j, h, fm2, fm1, R0, f1, f2));
        step_of[j].push_back(h);
      }
    }

  CurvatureJets jets;
  jets.e0 = ray.direction();
  jets.order = order;
  for (int j = 0; j <= order; ++j) {
    if (j == 0) {
      jets.R.push_back(R0);
      jets.ricci.push_back(-R0.trace());
      jets.error_estimate.push_back(0.0);
      continue;
    }
    // Richardson tableau for error expansions in even powers of h.
    std::vector<Eigen::MatrixXd> col = D[j];
    const std::vector<double>& steps = step_of[j];
    double correction = 0.0;
    int power = 2;
    while (col.size() > 1) {
      std::vector<Eigen::MatrixXd> next;
      for (std::size_t s = 0; s + 1 < col.size(); ++s) {
        const double ratio = steps[s] / steps[s + power / 2];  // Neville form in h^2
        const double w = ratio * ratio;
        next.push_back((w * col[s + 1] - col[s]) / (w - 1.0));
      }
      correction = (next.back() - col.back()).cwiseAbs().maxCoeff();
      col = std::move(next);
      power += 2;
    }
    jets.R.push_back(col.front());
    jets.ricci.push_back(-col.front().trace());
    jets.error_estimate.push_back(correction);
  }
  return jets;
}

CurvatureJets curvature_jets_along(const RealAnalyticPotential& pot, const Eigen::VectorXcd& p,
                                   const Eigen::VectorXd& e0, int order, const JetOptions& options) {
  return curvature_jets_along(make_field(pot), p, e0, order, options);
}

}  // namespace kahler
