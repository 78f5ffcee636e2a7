#pragma once

#include "phasedeco/linalg.hpp"

namespace phasedeco {

/// Hermitian, unit-trace, positive-semidefinite matrix. Construction checks
/// all three properties to within `tol`.
class DensityMatrix {
 public:
  static constexpr double kDefaultTol = 1e-8;

  explicit DensityMatrix(ComplexMatrix m, double tol = kDefaultTol);

  /// Skips validation; for states produced by trusted propagators that are
  /// validated elsewhere.
  static DensityMatrix unchecked(ComplexMatrix m);

  const ComplexMatrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

  double trace() const { return m_.trace().real(); }
  /// Tr rho^2
  double purity() const;
  double min_eigenvalue() const;

 private:
  struct NoCheck {};
  DensityMatrix(ComplexMatrix m, NoCheck) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

/// Throws StateValidationError describing the first violated property.
void validate_density_matrix(const ComplexMatrix& m, double tol);

}  // namespace phasedeco
