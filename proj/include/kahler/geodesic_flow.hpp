#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "kahler/metric_field.hpp"
#include "kahler/ode.hpp"

namespace kahler {

struct RayOptions {
  double tol = 1e-10;
  /// Also integrate to r = -r_back (needed for central differences along the ray).
  double r_back = 0.0;
  /// Radii (either sign) that step endpoints must hit exactly.
  std::vector<double> checkpoints;
  /// Unitary frame at p with first column along e0; default completes one.
  std::optional<Eigen::MatrixXcd> initial_frame;
  /// > 0 switches to fixed-step RK5 with this step (convergence studies).
  double fixed_step = 0.0;
  /// Integrate the Jacobi system and the radial volume integral with the ray.
  bool jacobi = true;
};

/// Jacobi matrices in the parallel frame: column u holds the components of J_u.
struct JacobiSystemState {
  double r = 0.0;
  Eigen::MatrixXd J;
  Eigen::MatrixXd Jp;
};

struct RadialDensity {
  double r = 0.0;
  double value = 0.0;           ///< sqrt det <J_u, J_v>
  double log_derivative = 0.0;  ///< d/dr log value
};

struct RayQuality {
  double speed_drift = 0.0;      ///< max | |velocity| - 1 |
  double frame_drift = 0.0;      ///< max entry of (real Gram matrix of the frame) - I
  double wronskian_drift = 0.0;  ///< max entry of J'^T J - J^T J'
};

/// Geodesic from p with unit initial direction e0, its parallel frame and
/// (optionally) the Jacobi system, with dense output on [r_min, r_max].
class GeodesicRay {
 public:
  int n() const { return field_->n(); }
  int m() const { return 2 * field_->n() - 1; }
  const KahlerMetricField& field() const { return *field_; }
  std::shared_ptr<const KahlerMetricField> field_ptr() const { return field_; }
  const Eigen::VectorXcd& base_point() const { return p_; }
  const Eigen::VectorXd& direction() const { return e0_; }
  const Eigen::MatrixXcd& initial_frame() const { return frame0_; }

  double r_max() const { return r_max_; }
  double r_min() const { return r_min_; }
  bool truncated() const { return truncated_; }
  bool has_jacobi() const { return jacobi_; }
  /// Bracket [lo, hi] of the first conjugate point on r > 0, if one was crossed.
  const std::optional<std::pair<double, double>>& conjugate_bracket() const { return conjugate_; }

  Eigen::VectorXcd position(double r) const;
  /// Holomorphic components of the unit velocity.
  Eigen::VectorXcd velocity(double r) const;
  /// Parallel unitary frame eps_a(r); real frame e_{2a} = eps_a, e_{2a+1} = i eps_a.
  Eigen::MatrixXcd frame(double r) const;
  /// Integral of det J from 0 to r (the radial volume element integrated).
  double volume_integral(double r) const;

  /// Drift measures at every accepted step endpoint.
  RayQuality quality() const;
  double speed_defect(double r) const;
  double frame_defect(double r) const;

  /// Raw state vector at r; layout z (2n), frame (2n^2), J (m^2), J' (m^2), vol (1).
  ode::State state(double r) const;
  std::size_t step_count() const { return forward_.steps.size() + backward_.steps.size(); }

 private:
  friend GeodesicRay shoot(std::shared_ptr<const KahlerMetricField>, const Eigen::VectorXcd&, const Eigen::VectorXd&,
                           double, const RayOptions&);
  void check_range(double r) const;

  std::shared_ptr<const KahlerMetricField> field_;
  Eigen::VectorXcd p_;
  Eigen::VectorXd e0_;
  Eigen::MatrixXcd frame0_;
  double r_max_ = 0.0;
  double r_min_ = 0.0;
  bool truncated_ = false;
  bool jacobi_ = true;
  ode::Solution forward_;
  ode::Solution backward_;
  std::optional<std::pair<double, double>> conjugate_;
};

/// Integrates the ray with an embedded Dormand-Prince 5(4) pair. Leaving the
/// field's validity ball truncates the ray (r_max reduced, truncated() set).
GeodesicRay shoot(std::shared_ptr<const KahlerMetricField> field, const Eigen::VectorXcd& p, const Eigen::VectorXd& e0,
                  double r_max, const RayOptions& options = {});
GeodesicRay shoot(const RealAnalyticPotential& pot, const Eigen::VectorXcd& p, const Eigen::VectorXd& e0,
                  double r_max, const RayOptions& options = {});

JacobiSystemState jacobi_integrate(const GeodesicRay& ray, double r);

/// sqrt det <J_u, J_v> and its log-derivative 1/2 tr(G^{-1} G') = tr(J^{-1} J').
/// Below r = 1e-4 both come from the short-time expansion of J.
RadialDensity radial_density(const GeodesicRay& ray, double r);

/// Jacobi curvature matrix R_uv at parameter r in the parallel frame.
Eigen::MatrixXd frame_curvature_along(const GeodesicRay& ray, double r);

/// CSV rows: r, |velocity|-1, det, value, log_derivative.
void write_trace_csv(const GeodesicRay& ray, const std::vector<double>& radii, std::ostream& out);

}  // namespace kahler
