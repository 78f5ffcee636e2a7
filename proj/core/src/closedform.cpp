#include "phasedeco/closedform.hpp"

#include <algorithm>
#include <cmath>

#include "phasedeco/errors.hpp"

namespace phasedeco::closedform {

namespace {

struct Oscillation {
  double cos_damped;  // cos(Omega t) exp(-gamma t Omega^2 / 2)
  double sin_damped;  // sin(Omega t) exp(-gamma t Omega^2 / 2)
};

Oscillation oscillation(const ModelParams& p, double t) {
  if (t < 0.0) throw ParameterError("time must be non-negative");
  const double w = p.big_omega();
  const double envelope = std::exp(-0.5 * p.gamma() * t * w * w);
  return {std::cos(w * t) * envelope, std::sin(w * t) * envelope};
}

void check_mix(double delta_mix) {
  if (!(delta_mix >= 0.0 && delta_mix <= 1.0))
    throw ParameterError("thermal mixing weight must lie in [0, 1]");
}

}  // namespace

EffectiveState rho_closed(const ModelParams& p, double t, double delta_mix, CoherenceSign sign) {
  check_mix(delta_mix);
  const auto osc = oscillation(p, t);
  const double w = p.big_omega(), g = p.g();
  const double r = p.delta() / w;
  const double excited_weight = 1.0 - delta_mix;

  const double pop_e = 0.5 * (1.0 + r * r + (1.0 - r * r) * osc.cos_damped);
  const double pop_phi_g = 2.0 * g * g / (w * w) * (1.0 - osc.cos_damped);
  const double im_sign = sign == CoherenceSign::standard ? 1.0 : -1.0;
  const Complex coherence = (g / w) * Complex(r * (1.0 - osc.cos_damped), im_sign * osc.sin_damped);

  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  rho(vac_e, vac_e) = excited_weight * pop_e;
  rho(phi_g, phi_g) = excited_weight * pop_phi_g;
  rho(vac_e, phi_g) = excited_weight * coherence;
  rho(phi_g, vac_e) = excited_weight * std::conj(coherence);
  rho(vac_g, vac_g) = delta_mix;
  return {std::move(rho), p, t, delta_mix};
}

std::array<ComplexVector, 4> effective_basis(const ModelParams& p, const FockAtomBasis& basis) {
  if (basis.n_max() < 2)
    throw DimensionError("the effective basis needs |phi>|e>, i.e. n_max >= 2");
  return {basis.basis_vector({0, 0, AtomLevel::excited}),
          basis.basis_vector({0, 0, AtomLevel::ground}),
          phi_state(p, basis, AtomLevel::excited), phi_state(p, basis, AtomLevel::ground)};
}

ComplexMatrix embed(const EffectiveState& s, const FockAtomBasis& basis) {
  const auto vecs = effective_basis(s.params, basis);
  ComplexMatrix out = ComplexMatrix::Zero(basis.dim(), basis.dim());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (s.rho(i, j) != 0.0) out += s.rho(i, j) * vecs[i] * vecs[j].adjoint();
  return out;
}

double ground_probability(const ModelParams& p, double t, double delta_mix) {
  check_mix(delta_mix);
  const auto osc = oscillation(p, t);
  const double w = p.big_omega(), g = p.g();
  return delta_mix + (1.0 - delta_mix) * 2.0 * g * g / (w * w) * (1.0 - osc.cos_damped);
}

double concurrence_ab_closed(const ModelParams& p, double t, double delta_mix) {
  check_mix(delta_mix);
  const auto osc = oscillation(p, t);
  const double w = p.big_omega(), g = p.g();
  const double r = p.delta() / w;
  const double rise = 1.0 - osc.cos_damped;
  return (1.0 - delta_mix) * (2.0 * g / w) *
         std::sqrt(r * r * rise * rise + osc.sin_damped * osc.sin_damped);
}

double concurrence_b_closed(const ModelParams& p, double t, double delta_mix) {
  check_mix(delta_mix);
  const auto osc = oscillation(p, t);
  const double w = p.big_omega();
  return (1.0 - delta_mix) * 4.0 * std::abs(p.g_a() * p.g_b()) / (w * w) * (1.0 - osc.cos_damped);
}

PairwiseClosed pairwise_closed(const ModelParams& p, double t, double delta_mix) {
  const double c_ab = concurrence_ab_closed(p, t, delta_mix);
  return {std::abs(p.g_a()) / p.g() * c_ab, std::abs(p.g_b()) / p.g() * c_ab, c_ab};
}

StationaryValues stationary_values(const ModelParams& p, double delta_mix) {
  check_mix(delta_mix);
  if (!(p.gamma() > 0.0))
    throw NoStationaryStateError("no stationary state: the dynamics with gamma = 0 never relaxes");
  const double w2 = p.big_omega() * p.big_omega(), g = p.g();
  const double keep = 1.0 - delta_mix;
  return {keep * 2.0 * g * std::abs(p.delta()) / w2,
          keep * 4.0 * std::abs(p.g_a() * p.g_b()) / w2,
          delta_mix + keep * 2.0 * g * g / w2};
}

double stationary_time(const ModelParams& p) {
  if (!(p.gamma() > 0.0)) throw NoStationaryStateError("no stationary state for gamma = 0");
  const double w2 = p.big_omega() * p.big_omega();
  return std::max(200.0, 20.0 / (p.gamma() * w2));
}

}  // namespace phasedeco::closedform
