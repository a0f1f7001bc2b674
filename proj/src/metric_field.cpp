#include "kahler/metric_field.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "kahler/errors.hpp"

namespace kahler {

PolynomialMetricField::PolynomialMetricField(RealAnalyticPotential potential) : potential_(std::move(potential)) {
  const int n = potential_.n();
  const ComplexPolynomial& f = potential_.polynomial();
  for (const auto& m : potential_.terms()) {
    if (m.degree() % 2 != 0) even_ = false;
    for (int e : m.alpha) max_power_ = std::max(max_power_, e);
    for (int e : m.beta) max_power_ = std::max(max_power_, e);
  }
  g_.resize(n * n);
  dg_.resize(n * n * n);
  ddg_.resize(n * n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const ComplexPolynomial gij = f.d(i).dbar(j);
      g_[i * n + j] = compile(gij);
      for (int k = 0; k < n; ++k) {
        const ComplexPolynomial dk = gij.d(k);
        dg_[(k * n + i) * n + j] = compile(dk);
        for (int l = 0; l < n; ++l) ddg_[((k * n + l) * n + i) * n + j] = compile(dk.dbar(l));
      }
    }
}

PolynomialMetricField::Compiled PolynomialMetricField::compile(const ComplexPolynomial& p) {
  Compiled c;
  for (const auto& [key, coeff] : p.terms()) {
    c.coeff.push_back(coeff);
    c.exps.insert(c.exps.end(), key.begin(), key.end());
  }
  return c;
}

std::complex<double> PolynomialMetricField::eval(const Compiled& c, const std::vector<std::complex<double>>& zpow,
                                                 const std::vector<std::complex<double>>& zbpow) const {
  const int n = potential_.n();
  const int stride = max_power_ + 1;
  std::complex<double> sum = 0.0;
  for (std::size_t t = 0; t < c.coeff.size(); ++t) {
    std::complex<double> v = c.coeff[t];
    const int* e = &c.exps[t * 2 * n];
    for (int i = 0; i < n; ++i) {
      if (e[i]) v *= zpow[i * stride + e[i]];
      if (e[n + i]) v *= zbpow[i * stride + e[n + i]];
    }
    sum += v;
  }
  return sum;
}

MetricJet PolynomialMetricField::evaluate(const Eigen::VectorXcd& z, bool with_curvature) const {
  const int n = potential_.n();
  const int stride = max_power_ + 1;
  std::vector<std::complex<double>> zpow(n * stride), zbpow(n * stride);
  for (int i = 0; i < n; ++i) {
    zpow[i * stride] = zbpow[i * stride] = 1.0;
    for (int e = 1; e <= max_power_; ++e) {
      zpow[i * stride + e] = zpow[i * stride + e - 1] * z[i];
      zbpow[i * stride + e] = zbpow[i * stride + e - 1] * std::conj(z[i]);
    }
  }
  MetricJet jet;
  jet.point = z;
  jet.g.resize(n, n);
  jet.dg.assign(n, Eigen::MatrixXcd(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      jet.g(i, j) = eval(g_[i * n + j], zpow, zbpow);
      for (int k = 0; k < n; ++k) jet.dg[k](i, j) = eval(dg_[(k * n + i) * n + j], zpow, zbpow);
    }
  if (!with_curvature) return jet;

  // R_{i jbar k lbar} = -d_k dbar_l g_{i jbar} + g^{p qbar} d_k g_{i qbar} dbar_l g_{p jbar}
  const Eigen::MatrixXcd H = jet.g.transpose().inverse();  // H(p, q) = g^{p qbar}
  jet.curvature = KahlerTensor(n);
  Eigen::VectorXcd a(n), b(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      for (int q = 0; q < n; ++q) a[q] = jet.dg[k](i, q);
      const Eigen::VectorXcd Ha = H * a;
      for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j) {
          for (int p = 0; p < n; ++p) b[p] = std::conj(jet.dg[l](j, p));
          jet.curvature(i, j, k, l) =
              -eval(ddg_[((k * n + l) * n + i) * n + j], zpow, zbpow) + (b.transpose() * Ha)(0, 0);
        }
    }
  return jet;
}

SpaceFormMetricField::SpaceFormMetricField(int n, double K) : n_(n), K_(K), kappa_(K / (n + 1)) {
  if (n < 1) throw ValidationError("space form: dimension must be positive");
}

double SpaceFormMetricField::validity_radius() const {
  if (kappa_ < 0.0) return 0.999 / std::sqrt(-kappa_);
  return std::numeric_limits<double>::infinity();
}

std::string SpaceFormMetricField::label() const {
  std::ostringstream os;
  os << "space_form_closed(n=" << n_ << ",K=" << K_ << ")";
  return os.str();
}

MetricJet SpaceFormMetricField::evaluate(const Eigen::VectorXcd& z, bool with_curvature) const {
  const int n = n_;
  const double s = 1.0 + kappa_ * z.squaredNorm();
  if (s <= 0.0) throw OutsideKahlerDomain("space form: outside the hyperbolic ball", s);
  MetricJet jet;
  jet.point = z;
  jet.g.resize(n, n);
  jet.dg.assign(n, Eigen::MatrixXcd(n, n));
  const Eigen::VectorXcd zb = z.conjugate();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      jet.g(i, j) = (i == j ? 1.0 / s : 0.0) - kappa_ * zb[i] * z[j] / (s * s);
      for (int k = 0; k < n; ++k) {
        std::complex<double> v = 2.0 * kappa_ * kappa_ * zb[i] * z[j] * zb[k] / (s * s * s);
        if (i == j) v -= kappa_ * zb[k] / (s * s);
        if (j == k) v -= kappa_ * zb[i] / (s * s);
        jet.dg[k](i, j) = v;
      }
    }
  if (!with_curvature) return jet;
  jet.curvature = KahlerTensor(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          jet.curvature(i, j, k, l) = kappa_ * (jet.g(i, j) * jet.g(k, l) + jet.g(i, l) * jet.g(k, j));
  return jet;
}

std::shared_ptr<const KahlerMetricField> make_field(const RealAnalyticPotential& potential) {
  return std::make_shared<PolynomialMetricField>(potential);
}

Eigen::VectorXcd to_holomorphic(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size() / 2);
  Eigen::VectorXcd xi(n);
  for (int k = 0; k < n; ++k) xi[k] = {v[2 * k], v[2 * k + 1]};
  return xi;
}

Eigen::VectorXd to_real(const Eigen::VectorXcd& xi) {
  Eigen::VectorXd v(2 * xi.size());
  for (int k = 0; k < xi.size(); ++k) {
    v[2 * k] = xi[k].real();
    v[2 * k + 1] = xi[k].imag();
  }
  return v;
}

double real_inner(const Eigen::MatrixXcd& g, const Eigen::VectorXcd& xi, const Eigen::VectorXcd& eta) {
  return 2.0 * (xi.transpose() * g * eta.conjugate())(0, 0).real();
}

Eigen::MatrixXd tangent_isometry(const Eigen::MatrixXcd& g) {
  const int d = 2 * static_cast<int>(g.rows());
  Eigen::MatrixXd G(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      G(a, b) = real_inner(g, to_holomorphic(Eigen::VectorXd::Unit(d, a)), to_holomorphic(Eigen::VectorXd::Unit(d, b)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  return es.operatorInverseSqrt();
}

namespace {

Eigen::MatrixXcd pair_form(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  return x * y.adjoint() - y * x.adjoint();
}

}  // namespace

double real_curvature(const KahlerTensor& R, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y,
                      const Eigen::VectorXcd& z, const Eigen::VectorXcd& w) {
  const int n = R.n();
  const Eigen::MatrixXcd A = pair_form(x, y);
  const Eigen::MatrixXcd B = pair_form(z, w);
  std::complex<double> sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (A(i, j) == 0.0) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) sum += R(i, j, k, l) * A(i, j) * B(k, l);
    }
  return sum.real();
}

Eigen::MatrixXcd unitary_frame(const Eigen::MatrixXcd& g, const Eigen::VectorXcd& first_column) {
  const int n = static_cast<int>(g.rows());
  auto h = [&](const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
    return (x.transpose() * g * y.conjugate())(0, 0);
  };
  Eigen::MatrixXcd frame(n, n);
  int filled = 0;
  auto push = [&](Eigen::VectorXcd v, double min_norm2) {
    for (int a = 0; a < filled; ++a) v -= h(v, frame.col(a)) / h(frame.col(a), frame.col(a)) * frame.col(a);
    const double norm2 = 2.0 * h(v, v).real();
    if (norm2 < min_norm2) return false;
    frame.col(filled++) = v / std::sqrt(norm2);
    return true;
  };
  if (!push(first_column, 1e-300)) throw ValidationError("unitary_frame: degenerate first vector");
  for (int k = 0; k < n && filled < n; ++k) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e[k] = 1.0;
    push(e, 0.25 / (n * g.norm()));
  }
  // Second pass removes the residual non-orthogonality of one Gram-Schmidt sweep.
  for (int a = 1; a < n; ++a) {
    Eigen::VectorXcd v = frame.col(a);
    for (int b = 0; b < a; ++b) v -= h(v, frame.col(b)) / h(frame.col(b), frame.col(b)) * frame.col(b);
    frame.col(a) = v / std::sqrt(2.0 * h(v, v).real());
  }
  return frame;
}

Eigen::MatrixXd frame_curvature(const KahlerTensor& R, const Eigen::MatrixXcd& frame) {
  const int n = R.n();
  const int m = 2 * n - 1;
  const std::complex<double> I(0.0, 1.0);
  std::vector<Eigen::VectorXcd> e(2 * n);
  for (int a = 0; a < n; ++a) {
    e[2 * a] = frame.col(a);
    e[2 * a + 1] = I * frame.col(a);
  }
  // T_u(k, l) = sum_ij R(i, j, k, l) A_u(i, j); R_uv = sum_kl T_u(k, l) A_v(k, l)
  std::vector<Eigen::MatrixXcd> A(m), T(m);
  for (int u = 0; u < m; ++u) A[u] = pair_form(e[0], e[u + 1]);
  for (int u = 0; u < m; ++u) {
    T[u] = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::complex<double> a = A[u](i, j);
        if (a == 0.0) continue;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) T[u](k, l) += R(i, j, k, l) * a;
      }
  }
  Eigen::MatrixXd out(m, m);
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v) out(u, v) = (T[u].cwiseProduct(A[v])).sum().real();
  return out;
}

}  // namespace kahler
