#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace kahler {

/// Truncated power series sum_k c[k] x^k, k = 0..N. Arithmetic truncates to
/// the shorter operand.
class PowerSeries {
 public:
  PowerSeries() = default;
  explicit PowerSeries(int order, double c0 = 0.0) : c_(order + 1, 0.0) { c_[0] = c0; }
  explicit PowerSeries(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("PowerSeries: empty coefficient list");
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double& operator[](int k) { return c_[k]; }
  double operator[](int k) const { return k <= order() ? c_[k] : 0.0; }
  const std::vector<double>& coeffs() const { return c_; }

  PowerSeries truncated(int order) const {
    std::vector<double> c(order + 1, 0.0);
    for (int k = 0; k <= std::min(order, this->order()); ++k) c[k] = c_[k];
    return PowerSeries(std::move(c));
  }

  double evaluate(double x) const {
    double s = 0.0;
    for (int k = order(); k >= 0; --k) s = s * x + c_[k];
    return s;
  }

  friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
    PowerSeries out(std::min(a.order(), b.order()));
    for (int k = 0; k <= out.order(); ++k) out[k] = a[k] + b[k];
    return out;
  }
  friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
    PowerSeries out(std::min(a.order(), b.order()));
    for (int k = 0; k <= out.order(); ++k) out[k] = a[k] - b[k];
    return out;
  }
  friend PowerSeries operator*(double s, const PowerSeries& a) {
    PowerSeries out = a;
    for (double& c : out.c_) c *= s;
    return out;
  }
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
    PowerSeries out(std::min(a.order(), b.order()));
    for (int i = 0; i <= out.order(); ++i)
      for (int j = 0; i + j <= out.order(); ++j) out[i + j] += a[i] * b[j];
    return out;
  }

  /// 1 / a; requires a[0] != 0.
  PowerSeries inverse() const {
    if (c_[0] == 0.0) throw std::domain_error("PowerSeries::inverse: zero constant term");
    PowerSeries out(order());
    out[0] = 1.0 / c_[0];
    for (int k = 1; k <= order(); ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += c_[j] * out[k - j];
      out[k] = -s / c_[0];
    }
    return out;
  }

  /// a^p for a[0] > 0 (real exponent), by the J.C.P. Miller recurrence.
  PowerSeries pow(double p) const {
    if (!(c_[0] > 0.0)) throw std::domain_error("PowerSeries::pow: constant term must be positive");
    PowerSeries out(order());
    out[0] = std::pow(c_[0], p);
    for (int k = 1; k <= order(); ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += (p * j - (k - j)) * c_[j] * out[k - j];
      out[k] = s / (k * c_[0]);
    }
    return out;
  }
  PowerSeries sqrt() const { return pow(0.5); }

  /// log(a) for a[0] > 0.
  PowerSeries log() const {
    if (!(c_[0] > 0.0)) throw std::domain_error("PowerSeries::log: constant term must be positive");
    PowerSeries out(order());
    out[0] = std::log(c_[0]);
    for (int k = 1; k <= order(); ++k) {
      double s = k * c_[k];
      for (int j = 1; j < k; ++j) s -= j * out[j] * c_[k - j];
      out[k] = s / (k * c_[0]);
    }
    return out;
  }

 private:
  std::vector<double> c_{0.0};
};

/// Determinant of a square matrix of power series by
/// Gaussian elimination (pivots need invertible constant terms).
inline PowerSeries series_determinant(std::vector<std::vector<PowerSeries>> A) {
  const int m = static_cast<int>(A.size());
  if (m == 0) throw std::invalid_argument("series_determinant: empty matrix");
  PowerSeries det(A[0][0].order(), 1.0);
  for (int k = 0; k < m; ++k) {
    int piv = k;
    for (int i = k + 1; i < m; ++i)
      if (std::abs(A[i][k][0]) > std::abs(A[piv][k][0])) piv = i;
    if (A[piv][k][0] == 0.0) throw std::domain_error("series_determinant: singular constant term");
    if (piv != k) {
      std::swap(A[piv], A[k]);
      det = -1.0 * det;
    }
    det = det * A[k][k];
    const PowerSeries inv = A[k][k].inverse();
    for (int i = k + 1; i < m; ++i) {
      const PowerSeries f = A[i][k] * inv;
      for (int j = k; j < m; ++j) A[i][j] = A[i][j] - f * A[k][j];
    }
  }
  return det;
}

/// Coefficients c_0..c_N of a radial expansion with their origin.
struct SeriesExpansion {
  std::vector<double> coefficients;
  std::string provenance;  ///< "symbolic", "fitted", "closed_form" or "quadrature"
  Eigen::MatrixXd covariance;  ///< fitted coefficients only
  double condition_number = 0.0;
  double cross_validation_residual = 0.0;

  double operator[](int k) const {
    return k < static_cast<int>(coefficients.size()) ? coefficients[k] : 0.0;
  }
  int order() const { return static_cast<int>(coefficients.size()) - 1; }
};

}  // namespace kahler
