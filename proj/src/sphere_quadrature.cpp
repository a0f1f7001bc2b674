#include "kahler/sphere_quadrature.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "kahler/errors.hpp"
#include "kahler/parallel.hpp"

namespace kahler {

void gauss_legendre01(int points, std::vector<double>& x, std::vector<double>& w) {
  if (points < 1) throw ValidationError("gauss_legendre01: need at least one point");
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    T(k, k - 1) = T(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  x.resize(points);
  w.resize(points);
  for (int k = 0; k < points; ++k) {
    x[k] = 0.5 * (es.eigenvalues()[k] + 1.0);
    const double v = es.eigenvectors()(0, k);
    w[k] = v * v;  // weights on [-1, 1] sum to 2; halved for [0, 1]
  }
}

int default_rule_degree(int n) { return n == 2 ? 12 : 8; }

SphereRule build_rule(int n, int degree) {
  if (n != 2 && n != 3) throw ValidationError("build_rule: only n = 2 and n = 3 are supported");
  if (degree < 0 || degree > 20) throw ValidationError("build_rule: degree must be in [0, 20]");
  const int half = degree / 2;
  int M = degree + 1;
  if (M % 2) ++M;
  const double volume = 2.0 * std::pow(std::numbers::pi, n) / std::tgamma(n);

  // Simplex rule for (t_1..t_n) with weights summing to 1.
  std::vector<std::vector<double>> tnodes;
  std::vector<double> tweights;
  if (n == 2) {
    std::vector<double> x, w;
    gauss_legendre01((half + 2) / 2, x, w);
    for (std::size_t i = 0; i < x.size(); ++i) {
      tnodes.push_back({x[i], 1.0 - x[i]});
      tweights.push_back(w[i]);
    }
  } else {
    std::vector<double> xu, wu, xv, wv;
    gauss_legendre01((half + 3) / 2, xu, wu);
    gauss_legendre01((half + 2) / 2, xv, wv);
    for (std::size_t i = 0; i < xu.size(); ++i)
      for (std::size_t j = 0; j < xv.size(); ++j) {
        const double u = xu[i], v = xv[j];
        tnodes.push_back({u, (1.0 - u) * v, (1.0 - u) * (1.0 - v)});
        tweights.push_back(2.0 * (1.0 - u) * wu[i] * wv[j]);
      }
  }

  SphereRule rule;
  rule.n = n;
  rule.degree = degree;
  std::vector<int> idx(n, 0);
  const double angle_weight = std::pow(1.0 / M, n);
  for (std::size_t s = 0; s < tnodes.size(); ++s) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      Eigen::VectorXd node(2 * n);
      for (int k = 0; k < n; ++k) {
        const double r = std::sqrt(std::max(0.0, tnodes[s][k]));
        const double phi = 2.0 * std::numbers::pi * idx[k] / M;
        node[2 * k] = r * std::cos(phi);
        node[2 * k + 1] = r * std::sin(phi);
      }
      rule.nodes.push_back(node.normalized());
      rule.weights.push_back(volume * tweights[s] * angle_weight);
      int k = n - 1;
      while (k >= 0 && ++idx[k] == M) idx[k--] = 0;
      if (k < 0) break;
    }
  }
  return rule;
}

double sphere_sum(const SphereRule& rule, const std::vector<double>& values) {
  if (values.size() != rule.size()) throw ValidationError("sphere_sum: value count differs from node count");
  CompensatedSum sum;
  for (std::size_t i = 0; i < values.size(); ++i) sum.add(rule.weights[i] * values[i]);
  return sum.value();
}

double sphere_average(const SphereRule& rule, const std::function<double(const Eigen::VectorXd&)>& f) {
  std::vector<double> values(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) values[i] = f(rule.nodes[i]);
  return sphere_sum(rule, values);
}

double sphere_monomial_integral(const std::vector<int>& m) {
  const int n = static_cast<int>(m.size());
  double num = 2.0 * std::pow(std::numbers::pi, n);
  int total = 0;
  for (int k : m) {
    num *= std::tgamma(k + 1.0);
    total += k;
  }
  return num / std::tgamma(n + total);
}

}  // namespace kahler
