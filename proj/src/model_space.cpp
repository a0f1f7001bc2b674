#include "kahler/model_space.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>

#include "kahler/errors.hpp"
#include "kahler/quadrature1d.hpp"

namespace kahler {

ModelSpace::ModelSpace(int n_, double K_) : n(n_), K(K_) {
  if (n < 1) throw ValidationError("model space: dimension must be positive");
  if (!std::isfinite(K)) throw ValidationError("model space: K must be finite");
}

double ModelSpace::conjugate_radius() const {
  const double cc = c();
  return cc > 0.0 ? std::numbers::pi / std::sqrt(cc) : std::numeric_limits<double>::infinity();
}

double sn(double lambda, double r) {
  if (lambda > 0.0) return std::sin(std::sqrt(lambda) * r) / std::sqrt(lambda);
  if (lambda < 0.0) return std::sinh(std::sqrt(-lambda) * r) / std::sqrt(-lambda);
  return r;
}

double unit_sphere_volume(int n) { return 2.0 * std::pow(std::numbers::pi, n) / std::tgamma(n); }

namespace {

void check_domain(const ModelSpace& model, double r) {
  if (!(r >= 0.0)) throw ModelDomainError("model space: radius must be non-negative");
  if (r >= model.conjugate_radius())
    throw ModelDomainError("model space: radius " + std::to_string(r) + " at or beyond the conjugate radius " +
                           std::to_string(model.conjugate_radius()));
}

// sqrt(l) cot(sqrt(l) r) (coth for l < 0, 1/r for l = 0).
double ct(double lambda, double r) {
  const double x2 = lambda * r * r;
  if (r < 1e-3) {
    // x cot x = 1 - x^2/3 - x^4/45 - 2x^6/945 - x^8/4725 - 2x^10/93555, valid for both signs of x^2
    const double s = 1.0 - x2 / 3.0 - x2 * x2 / 45.0 - 2.0 * std::pow(x2, 3) / 945.0 - std::pow(x2, 4) / 4725.0 -
                     2.0 * std::pow(x2, 5) / 93555.0;
    return s / r;
  }
  if (lambda > 0.0) return std::sqrt(lambda) / std::tan(std::sqrt(lambda) * r);
  if (lambda < 0.0) return std::sqrt(-lambda) / std::tanh(std::sqrt(-lambda) * r);
  return 1.0 / r;
}

}  // namespace

double density(const ModelSpace& model, double r) {
  check_domain(model, r);
  const double c = model.c();
  return sn(c, r) * std::pow(sn(c / 4.0, r), 2 * model.n - 2);
}

double laplacian(const ModelSpace& model, double r) {
  check_domain(model, r);
  if (r == 0.0) throw ModelDomainError("model space: laplacian of r is singular at r = 0");
  const double c = model.c();
  return ct(c, r) + (2 * model.n - 2) * ct(c / 4.0, r);
}

double sphere_area(const ModelSpace& model, double r) { return unit_sphere_volume(model.n) * density(model, r); }

double ball_volume(const ModelSpace& model, double r) {
  check_domain(model, r);
  if (r == 0.0) return 0.0;
  return integrate_gk15([&](double s) { return sphere_area(model, s); }, 0.0, r, 1e-13).value;
}

PowerSeries model_density_ratio_series(const ModelSpace& model, int order) {
  // sn_l(r)/r = sum_k (-l)^k r^{2k} / (2k+1)!
  auto sn_ratio = [order](double lambda) {
    PowerSeries s(order);
    double term = 1.0;
    for (int k = 0; 2 * k <= order; ++k) {
      s[2 * k] = term;
      term *= -lambda / ((2 * k + 2) * (2 * k + 3));
    }
    return s;
  };
  const double c = model.c();
  PowerSeries out = sn_ratio(c);
  const PowerSeries quarter = sn_ratio(c / 4.0);
  for (int k = 0; k < 2 * model.n - 2; ++k) out = out * quarter;
  return out;
}

SeriesExpansion model_series(const ModelSpace& model, int order) {
  if (order < 0 || order > 8) throw ValidationError("model_series: order must be in [0, 8]");
  const PowerSeries s = unit_sphere_volume(model.n) * model_density_ratio_series(model, order);
  SeriesExpansion out;
  out.coefficients = s.coeffs();
  out.provenance = "closed_form";
  return out;
}

double real_space_form_density(int dim, double k, double r) {
  if (dim < 2) throw ValidationError("real space form: dimension must be at least 2");
  if (k > 0.0 && r >= std::numbers::pi / std::sqrt(k)) throw ModelDomainError("real space form: beyond conjugate radius");
  return std::pow(sn(k, r), dim - 1);
}

void write_model_table(const ModelSpace& model, const std::vector<double>& radii, std::ostream& out) {
  out << "r,density,area,volume,laplacian\n" << std::setprecision(17);
  for (double r : radii) {
    out << r << ',';
    try {
      const double d = density(model, r);
      const double a = sphere_area(model, r);
      const double v = ball_volume(model, r);
      const double l = laplacian(model, r);
      out << d << ',' << a << ',' << v << ',' << l << '\n';
    } catch (const ModelDomainError&) {
      out << "domain_error,domain_error,domain_error,domain_error\n";
    }
  }
}

}  // namespace kahler
