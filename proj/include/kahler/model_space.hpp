#pragma once

#include <ostream>
#include <vector>

#include "kahler/power_series.hpp"

namespace kahler {

/// Complex space form of complex dimension n normalized so Ric = K, with
/// constant holomorphic sectional curvature c = 2K/(n+1). Jacobi spectrum
/// along any geodesic: c once (the J e0 direction), c/4 with multiplicity 2n-2.
struct ModelSpace {
  int n = 2;
  double K = 0.0;

  ModelSpace(int n_, double K_);
  double c() const { return 2.0 * K / (n + 1); }
  /// First conjugate radius: pi / sqrt(c) for c > 0, infinite otherwise.
  double conjugate_radius() const;
};

/// sn_lambda(r): sin(sqrt(l) r)/sqrt(l), r, or sinh(sqrt(-l) r)/sqrt(-l).
double sn(double lambda, double r);

/// Vol(S^{2n-1}) = 2 pi^n / (n-1)!.
double unit_sphere_volume(int n);

/// sqrt det <J_u, J_v> along any unit geodesic: sn_c(r) sn_{c/4}(r)^{2n-2}.
double density(const ModelSpace& model, double r);
/// Laplacian of the distance function: d/dr log density.
double laplacian(const ModelSpace& model, double r);
double sphere_area(const ModelSpace& model, double r);
/// Ball volume by adaptive Gauss-Kronrod quadrature of the area (1e-12 relative).
double ball_volume(const ModelSpace& model, double r);

/// Exact Taylor coefficients of W(r) = Vol(S^{2n-1}) density(r) / r^{2n-1} through r^order.
SeriesExpansion model_series(const ModelSpace& model, int order = 8);

/// Taylor coefficients of density(r) / r^{2n-1} (no sphere volume factor).
PowerSeries model_density_ratio_series(const ModelSpace& model, int order);

/// Real space form of dimension dim with sectional curvature k: sn_k(r)^{dim-1}.
double real_space_form_density(int dim, double k, double r);

/// CSV table r, density, area, volume, laplacian; rows beyond the conjugate
/// radius carry "domain_error" in every value column.
void write_model_table(const ModelSpace& model, const std::vector<double>& radii, std::ostream& out);

}  // namespace kahler
