#include "kahler/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "kahler/errors.hpp"

namespace kahler {

int Monomial::degree() const {
  int d = 0;
  for (int e : alpha) d += e;
  for (int e : beta) d += e;
  return d;
}

namespace {

Exponents key_of(const Monomial& m) {
  Exponents key(m.alpha);
  key.insert(key.end(), m.beta.begin(), m.beta.end());
  return key;
}

double hermitian_tol(std::complex<double> c) { return 1e-14 * std::max(1.0, std::abs(c)); }

}  // namespace

RealAnalyticPotential::RealAnalyticPotential(int n, std::vector<Monomial> terms, int max_degree,
                                             double validity_radius)
    : n_(n), max_degree_(max_degree), validity_radius_(validity_radius), poly_(n) {
  if (n < 1) throw ValidationError("potential: dimension must be positive");
  if (!(validity_radius > 0.0)) throw ValidationError("potential: validity radius must be positive");
  for (const auto& m : terms) {
    if (static_cast<int>(m.alpha.size()) != n || static_cast<int>(m.beta.size()) != n)
      throw ValidationError("potential: multi-index length differs from n");
    for (int e : m.alpha)
      if (e < 0) throw ValidationError("potential: negative exponent");
    for (int e : m.beta)
      if (e < 0) throw ValidationError("potential: negative exponent");
    if (m.degree() > max_degree)
      throw ValidationError("potential: term of degree " + std::to_string(m.degree()) + " exceeds max_degree " +
                            std::to_string(max_degree));
    poly_.add_term(key_of(m), m.coeff);
  }

  // Canonical term list: map order, duplicates merged, zeros dropped.
  terms_.reserve(poly_.size());
  for (const auto& [key, c] : poly_.terms()) {
    Monomial m;
    m.alpha.assign(key.begin(), key.begin() + n);
    m.beta.assign(key.begin() + n, key.end());
    m.coeff = c;
    terms_.push_back(std::move(m));
  }

  for (const auto& m : terms_) {
    Exponents partner(m.beta);
    partner.insert(partner.end(), m.alpha.begin(), m.alpha.end());
    const std::complex<double> other = poly_.coeff(partner);
    if (std::abs(m.coeff - std::conj(other)) > hermitian_tol(m.coeff)) {
      std::ostringstream os;
      os << "potential: term list is not Hermitian (coefficient " << m.coeff << " has partner " << other << ")";
      throw ValidationError(os.str());
    }
  }

  Eigen::MatrixXcd g0(n, n);
  const Eigen::VectorXcd origin = Eigen::VectorXcd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int hi[1] = {i};
      const int lo[1] = {j};
      g0(i, j) = mixed_partial(hi, lo, origin);
    }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g0, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw OutsideKahlerDomain("potential: metric at the origin is not positive definite",
                              es.eigenvalues().minCoeff());
}

std::string RealAnalyticPotential::label() const {
  if (!catalog_) return "custom(n=" + std::to_string(n_) + ")";
  std::ostringstream os;
  os << catalog_->name << "(";
  bool first = true;
  for (const auto& [k, v] : catalog_->params) {
    if (!first) os << ",";
    first = false;
    os << k << "=" << v;
  }
  os << ")";
  return os.str();
}

double RealAnalyticPotential::evaluate(const Eigen::VectorXcd& z) const { return poly_.evaluate(z).real(); }

std::complex<double> RealAnalyticPotential::mixed_partial(std::span<const int> holo, std::span<const int> antiholo,
                                                         const Eigen::VectorXcd& z) const {
  if (static_cast<int>(holo.size() + antiholo.size()) > max_degree_) return 0.0;
  std::vector<int> dh(n_, 0), da(n_, 0);
  for (int i : holo) {
    if (i < 0 || i >= n_) throw ValidationError("mixed_partial: index out of range");
    ++dh[i];
  }
  for (int j : antiholo) {
    if (j < 0 || j >= n_) throw ValidationError("mixed_partial: index out of range");
    ++da[j];
  }
  std::complex<double> sum = 0.0;
  for (const auto& m : terms_) {
    std::complex<double> v = m.coeff;
    bool vanishes = false;
    for (int i = 0; i < n_ && !vanishes; ++i) {
      if (m.alpha[i] < dh[i] || m.beta[i] < da[i]) {
        vanishes = true;
        break;
      }
      for (int k = 0; k < dh[i]; ++k) v *= static_cast<double>(m.alpha[i] - k);
      for (int k = 0; k < da[i]; ++k) v *= static_cast<double>(m.beta[i] - k);
      for (int e = 0; e < m.alpha[i] - dh[i]; ++e) v *= z[i];
      for (int e = 0; e < m.beta[i] - da[i]; ++e) v *= std::conj(z[i]);
    }
    if (!vanishes) sum += v;
  }
  return sum;
}

RealAnalyticPotential RealAnalyticPotential::with_exact(ExactPolynomial exact, double a, double lambda) const {
  RealAnalyticPotential out = *this;
  out.exact_ = std::move(exact);
  out.exact_params_ = {a, lambda};
  return out;
}

RealAnalyticPotential RealAnalyticPotential::with_catalog_id(CatalogId id) const {
  RealAnalyticPotential out = *this;
  out.catalog_ = std::move(id);
  return out;
}

ComplexPolynomial evaluate_parameters(const ExactPolynomial& p, double a, double lambda) {
  ComplexPolynomial out(p.n());
  for (const auto& [key, c] : p.terms()) out.add_term(key, c.evaluate(a, lambda));
  return out;
}

namespace catalog {

namespace {

std::vector<Monomial> to_monomials(const ComplexPolynomial& p) {
  std::vector<Monomial> out;
  const int n = p.n();
  for (const auto& [key, c] : p.terms()) {
    Monomial m;
    m.alpha.assign(key.begin(), key.begin() + n);
    m.beta.assign(key.begin() + n, key.end());
    m.coeff = c;
    out.push_back(std::move(m));
  }
  return out;
}

ComplexPolynomial norm_squared(int n) {
  ComplexPolynomial s(n);
  for (int i = 0; i < n; ++i) s += ComplexPolynomial::abs2(n, i);
  return s;
}

// All exponent keys of total degree d with both holomorphic and antiholomorphic parts nonempty.
void mixed_keys(int n, int d, std::vector<Exponents>& out) {
  Exponents key(2 * n, 0);
  auto rec = [&](auto&& self, int slot, int remaining) -> void {
    if (slot == 2 * n - 1) {
      key[slot] = remaining;
      int ha = 0, hb = 0;
      for (int i = 0; i < n; ++i) {
        ha += key[i];
        hb += key[n + i];
      }
      if (ha > 0 && hb > 0) out.push_back(key);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      key[slot] = e;
      self(self, slot + 1, remaining - e);
    }
  };
  rec(rec, 0, d);
}

}  // namespace

RealAnalyticPotential flat(int n) {
  RealAnalyticPotential p(n, to_monomials(norm_squared(n)), 2, std::numeric_limits<double>::infinity());
  ExactPolynomial exact(n);
  for (int i = 0; i < n; ++i) exact += ExactPolynomial::abs2(n, i);
  return p.with_exact(std::move(exact), 0.0, 0.0).with_catalog_id({"flat", {{"n", n}}});
}

RealAnalyticPotential space_form(int n, double K, int max_degree) {
  if (max_degree < 2) throw ValidationError("space_form: max_degree must be at least 2");
  const double kappa = K / (n + 1);
  const ComplexPolynomial s = norm_squared(n);
  ComplexPolynomial f(n);
  ComplexPolynomial power = s;
  for (int k = 1; 2 * k <= max_degree; ++k) {
    const double c = (k % 2 == 1 ? 1.0 : -1.0) * std::pow(kappa, k - 1) / k;
    f += std::complex<double>(c, 0.0) * power;
    power = power * s;
  }
  // Truncation error ~ (|kappa| r^2)^(D/2) stays below 1e-14 inside this radius.
  double radius = 0.25;
  if (kappa != 0.0) {
    const double bound = std::pow(1e-14, 2.0 / max_degree) / std::abs(kappa);
    radius = std::min(radius, std::sqrt(bound));
    if (kappa < 0.0) radius = std::min(radius, 0.5 / std::sqrt(-kappa));
  }
  RealAnalyticPotential p(n, to_monomials(f), max_degree, radius);
  return p.with_catalog_id({"space_form", {{"n", n}, {"K", K}, {"max_degree", max_degree}}});
}

ExactPolynomial section6_exact() {
  constexpr int n = 2;
  auto term = [](int p1, int p2, ExactComplex c) {
    const int alpha[2] = {p1, p2};
    return ExactPolynomial::monomial(alpha, alpha, c);
  };
  const ParamPoly a = ParamPoly::a();
  const ParamPoly a2 = a * a;
  const ParamPoly lam = ParamPoly::lambda();
  ExactPolynomial f(n);
  f += term(1, 0, Rational(1));
  f += term(0, 1, Rational(1));
  f += term(2, 0, a);
  f += term(1, 1, Rational(8) * a);
  f += term(0, 2, a);
  f += term(3, 0, Rational(8, 3) * a2);
  f += term(2, 1, Rational(28) * a2);
  f += term(1, 2, Rational(28) * a2);
  f += term(0, 3, Rational(8, 3) * a2);
  // p = -lambda (|z1|^8 + |z2|^8 + 8 (|z1|^6 |z2|^2 + |z1|^2 |z2|^6))
  f += term(4, 0, -lam);
  f += term(0, 4, -lam);
  f += term(3, 1, Rational(-8) * lam);
  f += term(1, 3, Rational(-8) * lam);
  return f;
}

RealAnalyticPotential section6(double a, double lambda) {
  ExactPolynomial exact = section6_exact();
  const ComplexPolynomial numeric = evaluate_parameters(exact, a, lambda);
  RealAnalyticPotential p(2, to_monomials(numeric), 8, 0.1);
  return p.with_exact(std::move(exact), a, lambda).with_catalog_id({"section6", {{"a", a}, {"lambda", lambda}}});
}

RealAnalyticPotential perturbed(int n, std::uint64_t seed, double magnitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  ComplexPolynomial f = norm_squared(n);
  for (int d : {4, 6}) {
    std::vector<Exponents> keys;
    mixed_keys(n, d, keys);
    for (const auto& key : keys) {
      Exponents partner(2 * n);
      for (int i = 0; i < n; ++i) {
        partner[i] = key[n + i];
        partner[n + i] = key[i];
      }
      if (partner < key) continue;  // each Hermitian pair once
      if (partner == key) {
        f.add_term(key, magnitude * unif(rng));
      } else {
        const std::complex<double> c(magnitude * unif(rng), magnitude * unif(rng));
        f.add_term(key, c);
        f.add_term(partner, std::conj(c));
      }
    }
  }
  RealAnalyticPotential p(n, to_monomials(f), 6, 0.1);
  return p.with_catalog_id(
      {"perturbed", {{"n", n}, {"seed", static_cast<double>(seed)}, {"magnitude", magnitude}}});
}

RealAnalyticPotential by_id(const CatalogId& id) {
  auto get = [&](const std::string& key, std::optional<double> fallback = std::nullopt) {
    const auto it = id.params.find(key);
    if (it != id.params.end()) return it->second;
    if (fallback) return *fallback;
    throw ValidationError("catalog '" + id.name + "': missing parameter '" + key + "'");
  };
  if (id.name == "flat") return flat(static_cast<int>(get("n", 2.0)));
  if (id.name == "space_form")
    return space_form(static_cast<int>(get("n", 2.0)), get("K"), static_cast<int>(get("max_degree", 16.0)));
  if (id.name == "section6") return section6(get("a"), get("lambda"));
  if (id.name == "perturbed")
    return perturbed(static_cast<int>(get("n", 2.0)), static_cast<std::uint64_t>(get("seed", 1.0)),
                     get("magnitude", 0.1));
  throw ValidationError("unknown catalog entry '" + id.name + "'");
}

}  // namespace catalog

}  // namespace kahler
