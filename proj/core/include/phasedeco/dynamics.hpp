#pragma once

#include <span>
#include <vector>

#include "phasedeco/density_matrix.hpp"
#include "phasedeco/linalg.hpp"
#include "phasedeco/model.hpp"

namespace phasedeco {

/// Time-ordered density matrices. Every stored state is checked for unit
/// trace and positivity to within kTol.
class Trajectory {
 public:
  static constexpr double kTol = 1e-8;

  void push(double t, DensityMatrix rho);

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<DensityMatrix>& states() const { return states_; }
  double time(std::size_t i) const { return times_.at(i); }
  const DensityMatrix& state(std::size_t i) const { return states_.at(i); }

 private:
  std::vector<double> times_;
  std::vector<DensityMatrix> states_;
};

/// Right-hand side of d rho/dt = -i[H, rho] - (gamma/2)[H, [H, rho]].
/// `h2` must be H*H.
ComplexMatrix dephasing_rhs(const ComplexMatrix& h, const ComplexMatrix& h2,
                            const ComplexMatrix& rho, double gamma);

struct Rk4Options {
  double dt = 1e-4;
  /// Abort when |Tr rho - 1| or Tr rho^2 - 1 exceeds this. The generator is
  /// traceless, so an unstable step usually shows up first as purity > 1.
  double max_trace_drift = 1e-6;
};

/// Classical fixed-step RK4. Each grid interval is split into
/// ceil(interval / dt) equal steps; rho is re-symmetrised after every step.
/// The grid must start at 0 and increase strictly.
Trajectory integrate_master_equation(const ComplexMatrix& h, const DensityMatrix& rho0,
                                     double gamma, std::span<const double> t_grid,
                                     const Rk4Options& opts = {});

/// Exact propagator in the eigenbasis of H: the coherence between levels m
/// and n picks up exp(-i (E_m - E_n) t - (gamma t / 2) (E_m - E_n)^2).
/// Diagonalises H once; propagate() is then cheap and thread-safe.
class SpectralPropagator {
 public:
  SpectralPropagator(const ComplexMatrix& h, double gamma);

  DensityMatrix propagate(const DensityMatrix& rho0, double t) const;
  /// The propagated state expressed in the eigenbasis of H (columns of
  /// eigensystem().vectors).
  ComplexMatrix propagate_in_eigenbasis(const DensityMatrix& rho0, double t) const;
  Trajectory trajectory(const DensityMatrix& rho0, std::span<const double> t_grid) const;

  const linalg::EigenSystem& eigensystem() const { return eig_; }
  double gamma() const { return gamma_; }

 private:
  linalg::EigenSystem eig_;
  double gamma_;
};

DensityMatrix spectral_propagate(const ComplexMatrix& h, const DensityMatrix& rho0, double gamma,
                                 double t);

/// M^k(t) = H^k exp(-iHt) exp(-(gamma t / 2) H^2), through the spectrum of H.
ComplexMatrix m_operator_spectral(const ComplexMatrix& h, int k, double t, double gamma);

/// The same operator assembled from the (K1, K2) eigen-structure and the
/// interaction Hamiltonian:
///   M^k = 1/2 (F+ + F-) + 1/2 [delta sigma_z + 2 H_int] Omega(K1)^+ (F+ - F-),
///   F+-  = f+-^k exp(-i f+- t) exp(-(gamma t / 2) f+-^2),
///   f+-  = omega (K1 + K2 - 1/2) +- Omega(K1) / 2,
///   Omega(K1) = sqrt(delta^2 + 4 g^2 K1), pseudo-inverted on its kernel.
ComplexMatrix m_operator_algebraic(const ModelParams& p, const FockAtomBasis& basis, int k,
                                   double t, double gamma);

/// Upper bound on the neglected tail of the k-sum: P(Poisson(x) > terms)
/// with x = gamma t max|E|^2.
double series_tail_bound(double x, int terms);

/// Direct truncated sum of (gamma t)^k / k! M^k rho0 M^k^dagger for
/// k = 0 .. terms. Throws ParameterError when the tail bound exceeds 1e-12.
ComplexMatrix series_propagate(const ComplexMatrix& h, const DensityMatrix& rho0, double gamma,
                               double t, int terms = 30);

/// n points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace phasedeco
