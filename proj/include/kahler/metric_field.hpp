#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kahler/potential.hpp"

namespace kahler {

/// Components R_{i jbar k lbar} of a Kähler curvature tensor, flat storage.
class KahlerTensor {
 public:
  KahlerTensor() = default;
  explicit KahlerTensor(int n) : n_(n), c_(static_cast<std::size_t>(n * n * n * n)) {}

  int n() const { return n_; }
  std::complex<double>& operator()(int i, int j, int k, int l) { return c_[index(i, j, k, l)]; }
  const std::complex<double>& operator()(int i, int j, int k, int l) const { return c_[index(i, j, k, l)]; }
  const std::vector<std::complex<double>>& data() const { return c_; }

 private:
  std::size_t index(int i, int j, int k, int l) const {
    return static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l);
  }
  int n_ = 0;
  std::vector<std::complex<double>> c_;
};

/// Metric data at one point: g, its first holomorphic derivatives, and
/// optionally the curvature tensor.
struct MetricJet {
  Eigen::VectorXcd point;
  Eigen::MatrixXcd g;                 ///< g(i, j) = g_{i jbar}
  std::vector<Eigen::MatrixXcd> dg;   ///< dg[k](i, j) = d_k g_{i jbar}
  KahlerTensor curvature;             ///< empty unless requested
};

/// Source of a Kähler metric on a coordinate ball of C^n.
class KahlerMetricField {
 public:
  virtual ~KahlerMetricField() = default;
  virtual int n() const = 0;
  /// Coordinate radius |z| inside which the field is trusted.
  virtual double validity_radius() const = 0;
  virtual std::string label() const = 0;
  virtual MetricJet evaluate(const Eigen::VectorXcd& z, bool with_curvature) const = 0;
  /// z -> -z is an isometry (all catalog metrics).
  virtual bool even() const { return true; }
};

/// Metric g_{i jbar} = d_i dbar_j f from a polynomial potential, with exact
/// polynomial differentiation precompiled at construction.
class PolynomialMetricField final : public KahlerMetricField {
 public:
  explicit PolynomialMetricField(RealAnalyticPotential potential);

  int n() const override { return potential_.n(); }
  double validity_radius() const override { return potential_.validity_radius(); }
  std::string label() const override { return potential_.label(); }
  MetricJet evaluate(const Eigen::VectorXcd& z, bool with_curvature) const override;
  bool even() const override { return even_; }

  const RealAnalyticPotential& potential() const { return potential_; }

 private:
  struct Compiled {
    std::vector<std::complex<double>> coeff;
    std::vector<int> exps;  // 2n per term
  };
  static Compiled compile(const ComplexPolynomial& p);
  std::complex<double> eval(const Compiled& c, const std::vector<std::complex<double>>& zpow,
                            const std::vector<std::complex<double>>& zbpow) const;

  RealAnalyticPotential potential_;
  int max_power_ = 0;
  bool even_ = true;
  std::vector<Compiled> g_;    // n*n, (i, j)
  std::vector<Compiled> dg_;   // n*n*n, (k, i, j)
  std::vector<Compiled> ddg_;  // n^4, (k, l, i, j)
};

/// Closed-form complex space form with Ric = K from the potential
/// (1/kappa) log(1 + kappa |z|^2), kappa = K / (n + 1); flat when K = 0.
class SpaceFormMetricField final : public KahlerMetricField {
 public:
  SpaceFormMetricField(int n, double K);

  int n() const override { return n_; }
  double validity_radius() const override;
  std::string label() const override;
  MetricJet evaluate(const Eigen::VectorXcd& z, bool with_curvature) const override;

  double K() const { return K_; }
  double kappa() const { return kappa_; }

 private:
  int n_;
  double K_;
  double kappa_;
};

std::shared_ptr<const KahlerMetricField> make_field(const RealAnalyticPotential& potential);

/// Holomorphic components xi_k = v_{2k} + i v_{2k+1} of a real tangent vector.
Eigen::VectorXcd to_holomorphic(const Eigen::VectorXd& v);
Eigen::VectorXd to_real(const Eigen::VectorXcd& xi);

/// Riemannian inner product of real vectors given by holomorphic components:
/// 2 Re(xi^T g conj(eta)).
double real_inner(const Eigen::MatrixXcd& g, const Eigen::VectorXcd& xi, const Eigen::VectorXcd& eta);

/// Symmetric real 2n x 2n matrix Q with <Q x, Q y> = x . y: carries the
/// Euclidean unit sphere onto the unit sphere of g, commuting with J.
Eigen::MatrixXd tangent_isometry(const Eigen::MatrixXcd& g);

/// R(X, Y, Z, W) for real vectors given by holomorphic components.
double real_curvature(const KahlerTensor& R, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y,
                      const Eigen::VectorXcd& z, const Eigen::VectorXcd& w);

/// Unitary frame (columns eps_a, 2 eps_a^T g conj(eps_b) = delta_ab) whose first
/// column is the normalized first_column; completed by Gram-Schmidt on the
/// coordinate basis.
Eigen::MatrixXcd unitary_frame(const Eigen::MatrixXcd& g, const Eigen::VectorXcd& first_column);

/// Jacobi-convention curvature matrix R_uv = R(e0, e_u, e0, e_v),
/// u, v = 1..2n-1, for the real frame e_{2a} = eps_a, e_{2a+1} = i eps_a.
Eigen::MatrixXd frame_curvature(const KahlerTensor& R, const Eigen::MatrixXcd& frame);

}  // namespace kahler
