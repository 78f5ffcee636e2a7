#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace phasedeco {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace linalg {

/// Default tolerance for Hermiticity checks, scaled by max(1, max|M_ij|).
inline constexpr double kHermitianTol = 1e-12;
/// Eigenvalues of a PSD matrix above -kPsdClamp are clamped to zero.
inline constexpr double kPsdClamp = 1e-10;

struct EigenSystem {
  RealVector values;     ///< ascending
  ComplexMatrix vectors; ///< column i belongs to values[i]
};

struct JacobiOptions {
  /// Stop once the off-diagonal Frobenius norm drops below
  /// off_tol * max(1, ||M||_F).
  double off_tol = 1e-14;
  int max_sweeps = 100;
  double hermitian_tol = kHermitianTol;
};

double max_abs(const ComplexMatrix& m);

/// Largest |M_ij - conj(M_ji)| together with its location.
struct HermitianDefect {
  double deviation = 0.0;
  int row = 0;
  int col = 0;
};
HermitianDefect hermitian_defect(const ComplexMatrix& m);

/// Throws NotHermitianError naming the worst entry if the defect exceeds
/// tol * max(1, max|M_ij|). Also rejects non-square input.
void require_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);

ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Cyclic complex Jacobi diagonalisation of a Hermitian matrix.
EigenSystem hermitian_eig(const ComplexMatrix& m, const JacobiOptions& opts = {});

/// Applies f to the spectrum: V diag(f(lambda)) V^dagger.
template <typename F>
ComplexMatrix apply_spectral(const EigenSystem& es, F&& f) {
  const auto n = es.values.size();
  ComplexMatrix scaled = es.vectors;
  for (Eigen::Index j = 0; j < n; ++j) scaled.col(j) *= Complex(f(es.values[j]));
  return scaled * es.vectors.adjoint();
}

/// Hermitian PSD square root; eigenvalues in [-1e-10, 0) are clamped.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out every subsystem not listed in `keep`. Subsystem 0 is the most
/// significant factor of the row index. Kept subsystems stay in their
/// original relative order.
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const int> dims,
                            std::span<const int> keep);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace linalg
}  // namespace phasedeco
