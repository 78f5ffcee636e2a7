#pragma once

#include <array>

#include "phasedeco/linalg.hpp"
#include "phasedeco/model.hpp"

namespace phasedeco::closedform {

/// Order of the effective basis used by EffectiveState.
enum EffectiveIndex : int { vac_e = 0, vac_g = 1, phi_e = 2, phi_g = 3 };

/// Exact state for the vacuum-field start on the four-dimensional span of
/// |00>|e>, |00>|g>, |phi>|e>, |phi>|g> (in that order).
struct EffectiveState {
  ComplexMatrix rho;  // 4x4
  ModelParams params;
  double t;
  double delta_mix;
};

/// Test hook: `flipped` conjugates the atom-field coherence so the
/// verification suite can prove it detects a sign error.
enum class CoherenceSign { standard, flipped };

/// State at time t for the initial atom delta_mix |g><g| + (1 - delta_mix) |e><e|
/// with both cavities in vacuum.
EffectiveState rho_closed(const ModelParams& p, double t, double delta_mix = 0.0,
                          CoherenceSign sign = CoherenceSign::standard);

/// The four effective basis vectors expressed in the full basis, in
/// EffectiveIndex order. Requires n_max >= 2.
std::array<ComplexVector, 4> effective_basis(const ModelParams& p, const FockAtomBasis& basis);

/// Lifts an effective 4x4 state into the full truncated basis.
ComplexMatrix embed(const EffectiveState& s, const FockAtomBasis& basis);

/// Population of the atomic ground state.
double ground_probability(const ModelParams& p, double t, double delta_mix = 0.0);

/// Atom versus both cavities.
double concurrence_ab_closed(const ModelParams& p, double t, double delta_mix = 0.0);

/// Between the two cavity fields.
double concurrence_b_closed(const ModelParams& p, double t, double delta_mix = 0.0);

struct PairwiseClosed {
  double c_a;   ///< atom versus mode a
  double c_b;   ///< atom versus mode b
  double c_ab;  ///< atom versus both modes
};
/// C_a = |g_a|/g C_AB and C_b = |g_b|/g C_AB.
PairwiseClosed pairwise_closed(const ModelParams& p, double t, double delta_mix = 0.0);

struct StationaryValues {
  double c_ab;
  double c_b;
  double p_g;
};

/// t -> infinity limits; throws NoStationaryStateError when gamma = 0.
StationaryValues stationary_values(const ModelParams& p, double delta_mix = 0.0);

/// A finite time at which the transient envelope exp(-gamma t Omega^2 / 2)
/// is below e^-10: max(200, 20 / (gamma Omega^2)).
double stationary_time(const ModelParams& p);

}  // namespace phasedeco::closedform
