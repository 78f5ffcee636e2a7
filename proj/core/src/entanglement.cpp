#include "phasedeco/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phasedeco/closedform.hpp"
#include "phasedeco/errors.hpp"

namespace phasedeco {

TwoQubitState::TwoQubitState(ComplexMatrix rho, std::array<std::string, 4> labels, double residual)
    : rho_(std::move(rho)), labels_(std::move(labels)), residual_(residual) {
  if (rho_.rows() != 4 || rho_.cols() != 4) throw StateValidationError("two-qubit state must be 4x4");
  try {
    validate_density_matrix(rho_, kTol);
  } catch (const StateValidationError& e) {
    throw StateValidationError(std::string("invalid two-qubit state: ") + e.what());
  }
}

ComplexMatrix spin_flip_operator() {
  ComplexMatrix y = ComplexMatrix::Zero(4, 4);
  y(0, 3) = -1.0;
  y(1, 2) = 1.0;
  y(2, 1) = 1.0;
  y(3, 0) = -1.0;
  return y;
}

ConcurrenceDetails concurrence_details(const TwoQubitState& state) {
  const ComplexMatrix root = linalg::psd_sqrt(state.matrix());
  const ComplexMatrix a = root * spin_flip_operator() * root.conjugate();

  ComplexMatrix dilation = ComplexMatrix::Zero(8, 8);
  dilation.topRightCorner(4, 4) = a;
  dilation.bottomLeftCorner(4, 4) = a.adjoint();
  const auto es = linalg::hermitian_eig(dilation);

  ConcurrenceDetails out{};
  for (int i = 0; i < 4; ++i) out.lambdas[static_cast<std::size_t>(i)] = std::max(es.values[7 - i], 0.0);
  const double c = out.lambdas[0] - out.lambdas[1] - out.lambdas[2] - out.lambdas[3];
  out.value = std::clamp(c, 0.0, 1.0);
  return out;
}

double concurrence(const TwoQubitState& rho) { return concurrence_details(rho).value; }

namespace {

TwoQubitState project(const ComplexMatrix& rho, const std::array<ComplexVector, 4>& vecs,
                      std::array<std::string, 4> labels, const char* what) {
  ComplexMatrix proj(4, rho.rows());
  for (int i = 0; i < 4; ++i) proj.row(i) = vecs[static_cast<std::size_t>(i)].adjoint();
  const ComplexMatrix block = linalg::hermitian_part(proj * rho * proj.adjoint());
  const double inside = block.trace().real();
  const double residual = rho.trace().real() - inside;
  if (residual > kSubspaceResidualTol || !(inside > 0.0)) {
    std::ostringstream os;
    os << "state leaves the effective two-qubit subspace (" << what << "): residual population "
       << residual;
    throw SubspaceLeakError(os.str(), residual);
  }
  return TwoQubitState(block / inside, std::move(labels), residual);
}

}  // namespace

TwoQubitState extract_two_qubit_AB(const DensityMatrix& rho_full, const ModelParams& p,
                                   const FockAtomBasis& basis) {
  if (rho_full.dim() != basis.dim()) throw DimensionError("state does not match the basis");
  using namespace closedform;
  const auto eff = effective_basis(p, basis);
  return project(rho_full.matrix(), {eff[phi_g], eff[phi_e], eff[vac_g], eff[vac_e]},
                 {"|phi>|g>", "|phi>|e>", "|00>|g>", "|00>|e>"}, "atom vs cavities");
}

ComplexMatrix to_product_space(const ComplexMatrix& rho_full, const FockAtomBasis& basis) {
  if (rho_full.rows() != basis.dim()) throw DimensionError("state does not match the basis");
  const int levels = basis.n_max() + 1;
  const int dim = levels * levels * 2;
  std::vector<int> index(static_cast<std::size_t>(basis.dim()));
  for (int i = 0; i < basis.dim(); ++i) {
    const auto& s = basis.state(i);
    index[static_cast<std::size_t>(i)] = (s.n_a * levels + s.n_b) * 2 + static_cast<int>(s.atom);
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < basis.dim(); ++i)
    for (int j = 0; j < basis.dim(); ++j)
      out(index[static_cast<std::size_t>(i)], index[static_cast<std::size_t>(j)]) = rho_full(i, j);
  return out;
}

ComplexMatrix reduce_to_fields(const DensityMatrix& rho_full, const FockAtomBasis& basis) {
  const int levels = basis.n_max() + 1;
  const std::array<int, 3> dims{levels, levels, 2};
  const std::array<int, 2> keep{0, 1};
  return linalg::partial_trace(to_product_space(rho_full.matrix(), basis), dims, keep);
}

TwoQubitState restrict_to_qubits(const ComplexMatrix& rho, std::span<const int> dims,
                                 std::array<std::string, 4> labels) {
  if (dims.size() != 2 || dims[0] < 2 || dims[1] < 2)
    throw DimensionError("restrict_to_qubits needs two subsystems of dimension >= 2");
  if (rho.rows() != dims[0] * dims[1] || rho.cols() != rho.rows())
    throw DimensionError("restrict_to_qubits: matrix does not match the subsystem dims");
  std::array<ComplexVector, 4> vecs;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      ComplexVector v = ComplexVector::Zero(rho.rows());
      v[i * dims[1] + j] = 1.0;
      vecs[static_cast<std::size_t>(2 * i + j)] = std::move(v);
    }
  }
  return project(rho, vecs, std::move(labels), "qubit truncation");
}

TwoQubitState extract_mode_qubits(const ComplexMatrix& rho_fields, std::span<const int> dims) {
  return restrict_to_qubits(rho_fields, dims, {"|0_a 0_b>", "|0_a 1_b>", "|1_a 0_b>", "|1_a 1_b>"});
}

PairwiseConcurrences pairwise_concurrences(const DensityMatrix& rho_full, const ModelParams& p,
                                           const FockAtomBasis& basis) {
  const int levels = basis.n_max() + 1;
  const std::array<int, 3> dims{levels, levels, 2};
  const std::array<int, 2> pair_dims{levels, 2};
  const ComplexMatrix product = to_product_space(rho_full.matrix(), basis);

  const std::array<int, 2> keep_a{0, 2};
  const std::array<int, 2> keep_b{1, 2};
  const auto atom_a = restrict_to_qubits(linalg::partial_trace(product, dims, keep_a), pair_dims,
                                         {"|0_a g>", "|0_a e>", "|1_a g>", "|1_a e>"});
  const auto atom_b = restrict_to_qubits(linalg::partial_trace(product, dims, keep_b), pair_dims,
                                         {"|0_b g>", "|0_b e>", "|1_b g>", "|1_b e>"});
  return {concurrence(atom_a), concurrence(atom_b),
          concurrence(extract_two_qubit_AB(rho_full, p, basis))};
}

double field_concurrence(const DensityMatrix& rho_full, const FockAtomBasis& basis) {
  const int levels = basis.n_max() + 1;
  const std::array<int, 2> dims{levels, levels};
  return concurrence(extract_mode_qubits(reduce_to_fields(rho_full, basis), dims));
}

}  // namespace phasedeco
