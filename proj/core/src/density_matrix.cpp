#include "phasedeco/density_matrix.hpp"

#include <cmath>
#include <sstream>

#include "phasedeco/errors.hpp"

namespace phasedeco {

void validate_density_matrix(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw StateValidationError("density matrix must be square and non-empty");
  const auto defect = linalg::hermitian_defect(m);
  if (defect.deviation > tol) {
    std::ostringstream os;
    os << "density matrix not Hermitian: deviation " << defect.deviation << " at ("
       << defect.row << "," << defect.col << ")";
    throw StateValidationError(os.str());
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol) {
    std::ostringstream os;
    os << "density matrix trace " << tr << " differs from 1 by more than " << tol;
    throw StateValidationError(os.str());
  }
  const double lo = linalg::hermitian_eig(linalg::hermitian_part(m)).values[0];
  if (lo < -tol) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << lo;
    throw StateValidationError(os.str());
  }
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double tol) : m_(std::move(m)) {
  validate_density_matrix(m_, tol);
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix m) {
  return DensityMatrix(std::move(m), NoCheck{});
}

double DensityMatrix::purity() const {
  // Tr(rho rho) = sum |rho_ij|^2 for Hermitian rho
  return m_.squaredNorm();
}

double DensityMatrix::min_eigenvalue() const {
  return linalg::hermitian_eig(linalg::hermitian_part(m_)).values[0];
}

}  // namespace phasedeco
