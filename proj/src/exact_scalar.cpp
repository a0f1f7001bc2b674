#include "kahler/exact_scalar.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kahler {

void ParamPoly::add_term(int pa, int pl, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace({pa, pl}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool ParamPoly::is_constant(Rational* value) const {
  if (terms_.empty()) {
    if (value) *value = Rational(0);
    return true;
  }
  if (terms_.size() == 1 && terms_.begin()->first == Key{0, 0}) {
    if (value) *value = terms_.begin()->second;
    return true;
  }
  return false;
}

Rational ParamPoly::coeff(int pa, int pl) const {
  const auto it = terms_.find({pa, pl});
  return it == terms_.end() ? Rational(0) : it->second;
}

double ParamPoly::evaluate(double a, double lambda) const {
  double sum = 0.0;
  for (const auto& [key, c] : terms_) sum += c.to_double() * std::pow(a, key.first) * std::pow(lambda, key.second);
  return sum;
}

ParamPoly ParamPoly::operator-() const {
  ParamPoly out;
  for (const auto& [key, c] : terms_) out.terms_.emplace(key, -c);
  return out;
}

ParamPoly operator+(const ParamPoly& x, const ParamPoly& y) {
  ParamPoly out = x;
  for (const auto& [key, c] : y.terms_) out.add_term(key.first, key.second, c);
  return out;
}

ParamPoly operator*(const ParamPoly& x, const ParamPoly& y) {
  ParamPoly out;
  for (const auto& [kx, cx] : x.terms_)
    for (const auto& [ky, cy] : y.terms_) out.add_term(kx.first + ky.first, kx.second + ky.second, cx * cy);
  return out;
}

std::string ParamPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    if (key.first > 0) os << "*a" << (key.first > 1 ? "^" + std::to_string(key.first) : "");
    if (key.second > 0) os << "*lambda" << (key.second > 1 ? "^" + std::to_string(key.second) : "");
  }
  return os.str();
}

std::string ExactComplex::str() const {
  if (im.is_zero()) return re.str();
  return "(" + re.str() + ") + i(" + im.str() + ")";
}

ExactComplex ScalarTraits<ExactComplex>::inverse(const ExactComplex& x) {
  Rational re, im;
  if (!x.re.is_constant(&re) || !x.im.is_constant(&im))
    throw std::domain_error("exact inverse of a parameter-dependent scalar");
  const Rational norm = re * re + im * im;
  if (norm.is_zero()) throw std::domain_error("exact inverse of zero");
  return {ParamPoly(re / norm), ParamPoly(-im / norm)};
}

}  // namespace kahler
