#pragma once

#include <stdexcept>
#include <string>

namespace kahler {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input: non-Hermitian term list, bad dimensions, degenerate directions.
struct ValidationError : Error {
  using Error::Error;
};

/// The metric is not positive definite at the evaluation point.
struct OutsideKahlerDomain : Error {
  OutsideKahlerDomain(const std::string& what, double eigenvalue) : Error(what), min_eigenvalue(eigenvalue) {}
  double min_eigenvalue;
};

/// Adaptive integration could not make progress.
struct IntegrationStalled : Error {
  IntegrationStalled(const std::string& what, double at) : Error(what), r(at) {}
  double r;
};

/// The Jacobi determinant vanished; [lo, hi] brackets the first conjugate point.
struct ConjugatePointReached : Error {
  ConjugatePointReached(double l, double h)
      : Error("conjugate point reached in [" + std::to_string(l) + ", " + std::to_string(h) + "]"), lo(l), hi(h) {}
  double lo;
  double hi;
};

/// A requested quantity needs data beyond what was computed (jet order, ray length).
struct TruncationError : Error {
  TruncationError(const std::string& what, double achieved_value) : Error(what), achieved(achieved_value) {}
  double achieved;
};

/// Outside the model-space domain (beyond the conjugate radius).
struct ModelDomainError : Error {
  using Error::Error;
};

}  // namespace kahler
