#pragma once

#include <array>
#include <span>
#include <string>

#include "phasedeco/density_matrix.hpp"
#include "phasedeco/linalg.hpp"
#include "phasedeco/model.hpp"

namespace phasedeco {

/// A 4x4 density matrix in a declared two-qubit product basis, listed in
/// computational order |00>, |01>, |10>, |11>.
class TwoQubitState {
 public:
  static constexpr double kTol = 1e-10;

  TwoQubitState(ComplexMatrix rho, std::array<std::string, 4> labels, double residual = 0.0);

  const ComplexMatrix& matrix() const { return rho_; }
  const std::array<std::string, 4>& labels() const { return labels_; }
  /// Population discarded when the state was projected onto this basis.
  double residual() const { return residual_; }

 private:
  ComplexMatrix rho_;
  std::array<std::string, 4> labels_;
  double residual_;
};

/// Largest weight outside the target subspace that extraction tolerates.
inline constexpr double kSubspaceResidualTol = 1e-8;

struct ConcurrenceDetails {
  double value;
  /// Square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy),
  /// non-negative, descending.
  std::array<double, 4> lambdas;
};

/// sigma_y (x) sigma_y
ComplexMatrix spin_flip_operator();

/// Wootters concurrence max(l1 - l2 - l3 - l4, 0). The l_i are obtained on
/// the Hermitian route: they are the singular values of
/// A = sqrt(rho) Y sqrt(rho)* (A A^dagger = sqrt(rho) rho~ sqrt(rho)), read off
/// as the non-negative eigenvalues of [[0, A], [A^dagger, 0]], which avoids
/// square-rooting round-off near zero.
ConcurrenceDetails concurrence_details(const TwoQubitState& rho);
double concurrence(const TwoQubitState& rho);

/// Atom versus both cavities, in the qubit basis
///   |00> = |phi>|g>, |01> = |phi>|e>, |10> = |00>|g>, |11> = |00>|e>
/// (first qubit: field vacuum = 1, second qubit: atom excited = 1).
/// Renormalised by the in-subspace trace.
TwoQubitState extract_two_qubit_AB(const DensityMatrix& rho_full, const ModelParams& p,
                                   const FockAtomBasis& basis);

/// Rewrites a state on the truncated basis in the product space
/// mode a (x) mode b (x) atom with dims (n_max+1, n_max+1, 2), atom g = 0.
ComplexMatrix to_product_space(const ComplexMatrix& rho_full, const FockAtomBasis& basis);

/// Two-mode field state (dims (n_max+1, n_max+1)) with the atom traced out.
ComplexMatrix reduce_to_fields(const DensityMatrix& rho_full, const FockAtomBasis& basis);

/// Restricts a bipartite state with subsystem dims (d0, d1) to levels {0, 1}
/// of each factor.
TwoQubitState restrict_to_qubits(const ComplexMatrix& rho, std::span<const int> dims,
                                 std::array<std::string, 4> labels);

/// Photon-number qubits of the two modes (basis |00>, |01>, |10>, |11> in
/// (n_a, n_b)).
TwoQubitState extract_mode_qubits(const ComplexMatrix& rho_fields, std::span<const int> dims);

struct PairwiseConcurrences {
  double c_a;   ///< atom versus mode a
  double c_b;   ///< atom versus mode b
  double c_ab;  ///< atom versus both modes
};

PairwiseConcurrences pairwise_concurrences(const DensityMatrix& rho_full, const ModelParams& p,
                                           const FockAtomBasis& basis);

/// Entanglement between the two cavity fields.
double field_concurrence(const DensityMatrix& rho_full, const FockAtomBasis& basis);

}  // namespace phasedeco
