#pragma once

#include <optional>
#include <vector>

#include "phasedeco/density_matrix.hpp"
#include "phasedeco/linalg.hpp"

namespace phasedeco {

/// Physical constants of one atom coupled to two degenerate cavity modes.
/// Only the degenerate case omega_a == omega_b is supported.
class ModelParams {
 public:
  ModelParams(double omega_a, double omega_b, double omega0, double g_a, double g_b, double gamma);

  /// omega_a = omega_b = omega and omega0 = omega + delta.
  static ModelParams from_detuning(double g_a, double g_b, double delta, double gamma,
                                   double omega = 1.0);

  double omega() const { return omega_a_; }
  double omega_a() const { return omega_a_; }
  double omega_b() const { return omega_b_; }
  double omega0() const { return omega0_; }
  double g_a() const { return g_a_; }
  double g_b() const { return g_b_; }
  double gamma() const { return gamma_; }

  /// sqrt(g_a^2 + g_b^2)
  double g() const;
  /// omega0 - omega
  double delta() const;
  /// Generalised Rabi frequency sqrt(delta^2 + 4 g^2).
  double big_omega() const;

  ModelParams with_gamma(double gamma) const;

 private:
  double omega_a_, omega_b_, omega0_, g_a_, g_b_, gamma_;
};

enum class AtomLevel { ground = 0, excited = 1 };

struct FockAtomState {
  int n_a = 0;
  int n_b = 0;
  AtomLevel atom = AtomLevel::ground;

  int excitation() const { return n_a + n_b + (atom == AtomLevel::excited ? 1 : 0); }
  bool operator==(const FockAtomState&) const = default;
};

/// Truncated Fock (x) atom basis holding every state with total excitation
/// N = n_a + n_b + [atom = e] <= n_max. Ordered by N, then n_a descending,
/// then ground before excited. Dimension (n_max + 1)^2.
class FockAtomBasis {
 public:
  explicit FockAtomBasis(int n_max = 2);

  int n_max() const { return n_max_; }
  int dim() const { return static_cast<int>(states_.size()); }
  const std::vector<FockAtomState>& states() const { return states_; }
  const FockAtomState& state(int i) const { return states_.at(static_cast<std::size_t>(i)); }

  std::optional<int> index_of(const FockAtomState& s) const;
  /// Like index_of but throws DimensionError when the state is truncated away.
  int require_index(const FockAtomState& s) const;

  ComplexVector basis_vector(const FockAtomState& s) const;

 private:
  int n_max_;
  std::vector<FockAtomState> states_;
};

/// Elementary operators on the truncated basis. Lowering operators are exact
/// on the truncated space; products are always formed with the lowering
/// factor on the right so that no intermediate leaves the basis.
struct ElementaryOperators {
  ComplexMatrix a;             ///< mode-a annihilation
  ComplexMatrix b;             ///< mode-b annihilation
  ComplexMatrix sigma_plus;    ///< |e><g|
  ComplexMatrix sigma_minus;   ///< |g><e|
  ComplexMatrix sigma_z;       ///< |e><e| - |g><g|
  ComplexMatrix projector_e;   ///< |e><e|
  ComplexMatrix number_a;      ///< a^dagger a
  ComplexMatrix number_b;      ///< b^dagger b
  ComplexMatrix total_excitation;
};

ElementaryOperators build_elementary_operators(const FockAtomBasis& basis);

ComplexMatrix build_hamiltonian(const ModelParams& p, const FockAtomBasis& basis);

/// g_a (a sigma+ + a^dagger sigma-) + g_b (b sigma+ + b^dagger sigma-)
ComplexMatrix build_interaction(const ModelParams& p, const FockAtomBasis& basis);

struct ConstantsOfMotion {
  ComplexMatrix k1;  ///< bright-mode excitations plus atomic excitation
  ComplexMatrix k2;  ///< dark-mode excitations
};
ConstantsOfMotion build_constants_of_motion(const ModelParams& p, const FockAtomBasis& basis);

struct Su2Generators {
  ComplexMatrix s_plus;
  ComplexMatrix s_minus;
  ComplexMatrix s_0;
};

/// Eigenvalues of sqrt(K1) below this are treated as zero by the pseudo-inverse.
inline constexpr double kKernelTol = 1e-12;

/// S+ = (g_a a + g_b b)|e><g| / (g sqrt(K1)), with 1/sqrt(K1) realised as the
/// Moore-Penrose pseudo-inverse, so S+- vanish on ker K1.
Su2Generators build_su2_generators(const ModelParams& p, const FockAtomBasis& basis);

/// omega (K1 + K2 - 1/2) + delta S0 + g sqrt(K1) (S+ + S-).
ComplexMatrix algebraic_hamiltonian(const ModelParams& p, const FockAtomBasis& basis);

/// Projector onto the orthogonal complement of ker K1.
ComplexMatrix k1_support_projector(const ModelParams& p, const FockAtomBasis& basis);

/// Single-photon state (g_a|10> + g_b|01>)/g tensored with the given atom level.
ComplexVector phi_state(const ModelParams& p, const FockAtomBasis& basis, AtomLevel atom);

enum class InitialKind { excited_vacuum, thermal_vacuum };

/// delta_mix |00,g><00,g| + (1 - delta_mix) |00,e><00,e|. excited_vacuum
/// ignores delta_mix (it is thermal_vacuum(0)).
DensityMatrix initial_state(InitialKind kind, const FockAtomBasis& basis, double delta_mix = 0.0);

}  // namespace phasedeco
