#include "kahler/geodesic_flow.hpp"

#include <cmath>
#include <iomanip>

#include <Eigen/LU>

#include "kahler/errors.hpp"

namespace kahler {

namespace {

struct Layout {
  int n, m;
  long z() const { return 0; }
  long frame() const { return 2L * n; }
  long J() const { return frame() + 2L * n * n; }
  long Jp() const { return J() + long(m) * m; }
  long vol() const { return Jp() + long(m) * m; }
  long size(bool jacobi) const { return jacobi ? vol() + 1 : J(); }
};

using CMap = Eigen::Map<const Eigen::VectorXcd>;
using CMatMap = Eigen::Map<const Eigen::MatrixXcd>;
using MatMap = Eigen::Map<const Eigen::MatrixXd>;

const std::complex<double>* as_complex(const double* p) { return reinterpret_cast<const std::complex<double>*>(p); }
std::complex<double>* as_complex(double* p) { return reinterpret_cast<std::complex<double>*>(p); }

// 2 E^T g conj(E): the real frame is orthonormal iff this is the identity.
Eigen::MatrixXcd frame_gram(const Eigen::MatrixXcd& g, const Eigen::MatrixXcd& E) {
  return 2.0 * E.transpose() * g * E.conjugate();
}

}  // namespace

GeodesicRay shoot(std::shared_ptr<const KahlerMetricField> field, const Eigen::VectorXcd& p, const Eigen::VectorXd& e0,
                  double r_max, const RayOptions& options) {
  const int n = field->n();
  const int m = 2 * n - 1;
  if (p.size() != n || e0.size() != 2 * n) throw ValidationError("shoot: dimension mismatch");
  if (e0.norm() < 1e-12) throw ValidationError("shoot: degenerate direction");
  if (p.norm() >= field->validity_radius()) throw ValidationError("shoot: base point outside validity ball");

  GeodesicRay ray;
  ray.field_ = field;
  ray.p_ = p;
  ray.jacobi_ = options.jacobi;

  const MetricJet jet0 = field->evaluate(p, false);
  Eigen::VectorXcd xi = to_holomorphic(e0);
  xi /= std::sqrt(real_inner(jet0.g, xi, xi));
  ray.e0_ = to_real(xi);
  if (options.initial_frame) {
    Eigen::MatrixXcd F = *options.initial_frame;
    if (F.rows() != n || F.cols() != n) throw ValidationError("shoot: initial frame has wrong shape");
    if ((F.col(0) - xi).norm() > 1e-8 * (1.0 + xi.norm()))
      throw ValidationError("shoot: initial frame does not start with the unit direction");
    if ((frame_gram(jet0.g, F) - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-8)
      throw ValidationError("shoot: initial frame is not unitary");
    ray.frame0_ = F;
  } else {
    ray.frame0_ = unitary_frame(jet0.g, xi);
  }

  const Layout L{n, m};
  const bool jac = options.jacobi;
  ode::State y0 = ode::State::Zero(L.size(jac));
  Eigen::Map<Eigen::VectorXcd>(as_complex(y0.data() + L.z()), n) = p;
  Eigen::Map<Eigen::MatrixXcd>(as_complex(y0.data() + L.frame()), n, n) = ray.frame0_;
  if (jac) Eigen::Map<Eigen::MatrixXd>(y0.data() + L.Jp(), m, m).setIdentity();

  const KahlerMetricField& F = *field;
  auto rhs = [&F, n, m, L, jac](double, const ode::State& y, ode::State& dy) {
    dy.resize(y.size());
    const CMap z(as_complex(y.data() + L.z()), n);
    const CMatMap E(as_complex(y.data() + L.frame()), n, n);
    const MetricJet jet = F.evaluate(z, jac);
    const Eigen::VectorXcd xi = E.col(0);
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) D += xi[i] * jet.dg[i];
    // Christoffel action Gamma(xi)^k_j = g^{k lbar} xi^i d_i g_{j lbar} = (g^T)^{-1} D^T
    const Eigen::MatrixXcd Gamma = jet.g.transpose().partialPivLu().solve(D.transpose());
    Eigen::Map<Eigen::VectorXcd>(as_complex(dy.data() + L.z()), n) = xi;
    Eigen::Map<Eigen::MatrixXcd>(as_complex(dy.data() + L.frame()), n, n) = -Gamma * E;
    if (!jac) return;
    const MatMap J(y.data() + L.J(), m, m);
    const MatMap Jp(y.data() + L.Jp(), m, m);
    const Eigen::MatrixXd R = frame_curvature(jet.curvature, E);
    Eigen::Map<Eigen::MatrixXd>(dy.data() + L.J(), m, m) = Jp;
    Eigen::Map<Eigen::MatrixXd>(dy.data() + L.Jp(), m, m) = R * J;
    dy[L.vol()] = J.determinant();
  };

  const double radius = field->validity_radius();
  auto outside = [&](double, const ode::State& y) { return CMap(as_complex(y.data() + L.z()), n).norm() >= radius; };

  ode::Options opt;
  opt.rtol = options.tol;
  opt.atol = options.tol * 1e-3;
  opt.fixed_step = options.fixed_step;

  auto run = [&](double t_end, ode::Solution& out, double& reached) {
    std::vector<double> stops;
    for (double c : options.checkpoints)
      if (c * t_end > 0.0 && std::abs(c) < std::abs(t_end)) stops.push_back(c);
    std::sort(stops.begin(), stops.end(), [t_end](double a, double b) { return t_end > 0 ? a < b : a > b; });
    out = ode::integrate(rhs, 0.0, y0, t_end, opt, stops, outside);
    if (out.stopped) {
      // Drop the step that crossed the boundary so every stored point is inside.
      out.steps.pop_back();
      ray.truncated_ = true;
      if (out.steps.empty()) throw TruncationError("shoot: ray leaves the validity ball immediately", 0.0);
    }
    reached = out.steps.back().t0 + out.steps.back().h;
    out.t_end = reached;
  };
  run(r_max, ray.forward_, ray.r_max_);
  if (options.r_back > 0.0) run(-options.r_back, ray.backward_, ray.r_min_);

  if (jac) {
    // First sign change of det J on r > 0, bisected on the dense output.
    auto det_at = [&](double r) { return MatMap(ray.state(r).data() + L.J(), m, m).determinant(); };
    for (const auto& s : ray.forward_.steps) {
      const double t1 = s.t0 + s.h;
      if (det_at(t1) > 0.0) continue;
      double lo = s.t0, hi = t1;
      if (lo == 0.0) lo = 0.5 * hi;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (det_at(mid) > 0.0 ? lo : hi) = mid;
      }
      ray.conjugate_ = std::make_pair(lo, hi);
      break;
    }
  }
  return ray;
}

GeodesicRay shoot(const RealAnalyticPotential& pot, const Eigen::VectorXcd& p, const Eigen::VectorXd& e0,
                  double r_max, const RayOptions& options) {
  return shoot(make_field(pot), p, e0, r_max, options);
}

void GeodesicRay::check_range(double r) const {
  const double slack = 1e-14 * std::max(1.0, std::abs(r));
  if (r > r_max_ + slack || r < r_min_ - slack) {
    throw TruncationError("ray evaluated outside its integrated range", r > 0 ? r_max_ : r_min_);
  }
}

ode::State GeodesicRay::state(double r) const {
  check_range(r);
  if (r >= 0.0) return forward_.at(r);
  return backward_.at(r);
}

Eigen::VectorXcd GeodesicRay::position(double r) const {
  const ode::State y = state(r);
  return CMap(as_complex(y.data()), n());
}

Eigen::MatrixXcd GeodesicRay::frame(double r) const {
  const ode::State y = state(r);
  return CMatMap(as_complex(y.data() + 2 * n()), n(), n());
}

Eigen::VectorXcd GeodesicRay::velocity(double r) const { return frame(r).col(0); }

double GeodesicRay::volume_integral(double r) const {
  if (!jacobi_) throw ValidationError("volume_integral: ray integrated without the Jacobi system");
  const Layout L{n(), m()};
  return state(r)[L.vol()];
}

double GeodesicRay::speed_defect(double r) const {
  const Eigen::MatrixXcd E = frame(r);
  const Eigen::MatrixXcd g = field_->evaluate(position(r), false).g;
  return real_inner(g, E.col(0), E.col(0)) - 1.0;
}

double GeodesicRay::frame_defect(double r) const {
  const Eigen::MatrixXcd E = frame(r);
  const Eigen::MatrixXcd g = field_->evaluate(position(r), false).g;
  return (frame_gram(g, E) - Eigen::MatrixXcd::Identity(n(), n())).cwiseAbs().maxCoeff();
}

RayQuality GeodesicRay::quality() const {
  RayQuality q;
  auto visit = [&](const ode::Solution& sol) {
    for (const auto& s : sol.steps) {
      const double r = s.t0 + s.h;
      q.speed_drift = std::max(q.speed_drift, std::abs(speed_defect(r)));
      q.frame_drift = std::max(q.frame_drift, frame_defect(r));
      if (jacobi_) {
        const JacobiSystemState js = jacobi_integrate(*this, r);
        const Eigen::MatrixXd W = js.Jp.transpose() * js.J - js.J.transpose() * js.Jp;
        q.wronskian_drift = std::max(q.wronskian_drift, W.cwiseAbs().maxCoeff());
      }
    }
  };
  visit(forward_);
  visit(backward_);
  return q;
}

JacobiSystemState jacobi_integrate(const GeodesicRay& ray, double r) {
  if (!ray.has_jacobi()) throw ValidationError("jacobi_integrate: ray integrated without the Jacobi system");
  const int n = ray.n(), m = ray.m();
  const Layout L{n, m};
  const ode::State y = ray.state(r);
  return {r, MatMap(y.data() + L.J(), m, m), MatMap(y.data() + L.Jp(), m, m)};
}

Eigen::MatrixXd frame_curvature_along(const GeodesicRay& ray, double r) {
  const MetricJet jet = ray.field().evaluate(ray.position(r), true);
  return frame_curvature(jet.curvature, ray.frame(r));
}

RadialDensity radial_density(const GeodesicRay& ray, double r) {
  if (r <= 0.0) throw ValidationError("radial_density: r must be positive");
  const int m = ray.m();
  if (const auto& c = ray.conjugate_bracket(); c && r >= c->first) throw ConjugatePointReached(c->first, c->second);
  RadialDensity out;
  out.r = r;
  if (r < 1e-4) {
    // J = r (I + r^2 R/6 + O(r^3)) with R evaluated at r.
    const Eigen::MatrixXd R = frame_curvature_along(ray, r);
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m) + (r * r / 6.0) * R;
    out.value = std::pow(r, m) * A.determinant();
    out.log_derivative = m / r + r * R.trace() / 3.0;
    return out;
  }
  const JacobiSystemState js = jacobi_integrate(ray, r);
  const double det = js.J.determinant();
  if (det <= 0.0) throw ConjugatePointReached(0.0, r);
  out.value = det;
  out.log_derivative = js.J.partialPivLu().solve(js.Jp).trace();
  return out;
}

void write_trace_csv(const GeodesicRay& ray, const std::vector<double>& radii, std::ostream& out) {
  out << "r,speed_defect,det,value,log_derivative\n";
  out << std::setprecision(17);
  for (double r : radii) {
    const JacobiSystemState js = jacobi_integrate(ray, r);
    const RadialDensity d = radial_density(ray, r);
    out << r << ',' << ray.speed_defect(r) << ',' << js.J.determinant() << ',' << d.value << ','
        << d.log_derivative << '\n';
  }
}

}  // namespace kahler
