#include "phasedeco/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "phasedeco/errors.hpp"

namespace phasedeco {

void Trajectory::push(double t, DensityMatrix rho) {
  if (!times_.empty() && !(t > times_.back()))
    throw ParameterError("trajectory times must increase strictly");
  validate_density_matrix(rho.matrix(), kTol);
  times_.push_back(t);
  states_.push_back(std::move(rho));
}

ComplexMatrix dephasing_rhs(const ComplexMatrix& h, const ComplexMatrix& h2,
                            const ComplexMatrix& rho, double gamma) {
  const ComplexMatrix h_rho = h * rho;
  const ComplexMatrix rho_h = rho * h;
  const Complex minus_i(0.0, -1.0);
  ComplexMatrix out = minus_i * (h_rho - rho_h);
  if (gamma != 0.0) out -= (0.5 * gamma) * (h2 * rho - 2.0 * h_rho * h + rho * h2);
  return out;
}

namespace {

void check_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) throw ParameterError("time grid is empty");
  if (t_grid.front() != 0.0) throw ParameterError("time grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw ParameterError("time grid must increase strictly");
}

}  // namespace

Trajectory integrate_master_equation(const ComplexMatrix& h, const DensityMatrix& rho0,
                                     double gamma, std::span<const double> t_grid,
                                     const Rk4Options& opts) {
  if (!(opts.dt > 0.0)) throw ParameterError("integrator step dt must be positive");
  if (gamma < 0.0) throw ParameterError("decoherence rate gamma must be non-negative");
  linalg::require_hermitian(h);
  if (h.rows() != rho0.dim()) throw DimensionError("Hamiltonian and state dimensions differ");
  check_grid(t_grid);

  const ComplexMatrix h2 = h * h;
  ComplexMatrix rho = rho0.matrix();
  Trajectory traj;
  traj.push(0.0, rho0);

  double t = 0.0;
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const double span = t_grid[i] - t_grid[i - 1];
    const auto steps = static_cast<long>(std::ceil(span / opts.dt - 1e-9));
    const double step = span / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) {
      const ComplexMatrix k1 = dephasing_rhs(h, h2, rho, gamma);
      const ComplexMatrix k2 = dephasing_rhs(h, h2, rho + (0.5 * step) * k1, gamma);
      const ComplexMatrix k3 = dephasing_rhs(h, h2, rho + (0.5 * step) * k2, gamma);
      const ComplexMatrix k4 = dephasing_rhs(h, h2, rho + step * k3, gamma);
      rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      rho = linalg::hermitian_part(rho);
      t = t_grid[i - 1] + step * static_cast<double>(s + 1);

      const double drift = std::abs(rho.trace().real() - 1.0);
      const double excess_purity = rho.squaredNorm() - 1.0;
      if (drift > opts.max_trace_drift || excess_purity > opts.max_trace_drift ||
          !std::isfinite(drift + excess_purity)) {
        std::ostringstream os;
        os << "RK4 trace drift " << drift << ", purity excess " << excess_purity << " at t = " << t
           << "; the step is unstable, try a smaller dt (current " << opts.dt << ")";
        throw IntegrationError(os.str(), t, drift);
      }
    }
    traj.push(t_grid[i], DensityMatrix::unchecked(rho));
  }
  return traj;
}

SpectralPropagator::SpectralPropagator(const ComplexMatrix& h, double gamma)
    : eig_(linalg::hermitian_eig(h)), gamma_(gamma) {
  if (gamma < 0.0) throw ParameterError("decoherence rate gamma must be non-negative");
}

ComplexMatrix SpectralPropagator::propagate_in_eigenbasis(const DensityMatrix& rho0,
                                                         double t) const {
  const auto& v = eig_.vectors;
  const auto& e = eig_.values;
  if (rho0.dim() != v.rows()) throw DimensionError("Hamiltonian and state dimensions differ");
  if (t < 0.0) throw ParameterError("time must be non-negative");

  ComplexMatrix r = v.adjoint() * rho0.matrix() * v;
  for (Eigen::Index m = 0; m < r.rows(); ++m) {
    for (Eigen::Index n = 0; n < r.cols(); ++n) {
      if (m == n) continue;
      const double w = e[m] - e[n];
      r(m, n) *= std::exp(Complex(-0.5 * gamma_ * t * w * w, -w * t));
    }
  }
  return r;
}

DensityMatrix SpectralPropagator::propagate(const DensityMatrix& rho0, double t) const {
  if (rho0.dim() != eig_.vectors.rows()) throw DimensionError("Hamiltonian and state dimensions differ");
  if (t == 0.0) return rho0;
  const auto& v = eig_.vectors;
  return DensityMatrix::unchecked(linalg::hermitian_part(v * propagate_in_eigenbasis(rho0, t) * v.adjoint()));
}

Trajectory SpectralPropagator::trajectory(const DensityMatrix& rho0,
                                          std::span<const double> t_grid) const {
  check_grid(t_grid);
  Trajectory traj;
  for (double t : t_grid) traj.push(t, propagate(rho0, t));
  return traj;
}

DensityMatrix spectral_propagate(const ComplexMatrix& h, const DensityMatrix& rho0, double gamma,
                                 double t) {
  return SpectralPropagator(h, gamma).propagate(rho0, t);
}

namespace {

Complex m_weight(double energy, int k, double t, double gamma) {
  return std::pow(energy, k) * std::exp(Complex(-0.5 * gamma * t * energy * energy, -energy * t));
}

void check_power(int k) {
  if (k < 0 || k > 20) throw ParameterError("M^k is provided for 0 <= k <= 20");
}

}  // namespace

ComplexMatrix m_operator_spectral(const ComplexMatrix& h, int k, double t, double gamma) {
  check_power(k);
  const auto es = linalg::hermitian_eig(h);
  const auto n = es.values.size();
  ComplexMatrix scaled = es.vectors;
  for (Eigen::Index j = 0; j < n; ++j) scaled.col(j) *= m_weight(es.values[j], k, t, gamma);
  return scaled * es.vectors.adjoint();
}

ComplexMatrix m_operator_algebraic(const ModelParams& p, const FockAtomBasis& basis, int k,
                                   double t, double gamma) {
  check_power(k);
  const auto ops = build_elementary_operators(basis);
  const auto km = build_constants_of_motion(p, basis);

  // Joint eigenbasis of the commuting pair (K1, N = K1 + K2); the shift
  // separates every (K1, N) pair since K1 <= n_max.
  const double shift = basis.n_max() + 1.0;
  const auto joint = linalg::hermitian_eig(km.k1 + shift * ops.total_excitation);
  const auto& v = joint.vectors;
  const Eigen::Index dim = v.cols();

  const double omega = p.omega(), delta = p.delta(), g2 = p.g() * p.g();
  ComplexVector half_sum(dim), half_diff_over_omega(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double k1_raw = (v.col(j).adjoint() * km.k1 * v.col(j))(0, 0).real();
    const double n_raw = (v.col(j).adjoint() * ops.total_excitation * v.col(j))(0, 0).real();
    const double k1 = std::round(k1_raw), n = std::round(n_raw);
    if (std::abs(k1 - k1_raw) > 1e-8 || std::abs(n - n_raw) > 1e-8)
      throw Error("m_operator_algebraic: K1 / N spectrum is not integral");

    const double big_omega = std::sqrt(delta * delta + 4.0 * g2 * k1);
    const double base = omega * (n - 0.5);
    const Complex f_plus = m_weight(base + 0.5 * big_omega, k, t, gamma);
    const Complex f_minus = m_weight(base - 0.5 * big_omega, k, t, gamma);
    half_sum[j] = 0.5 * (f_plus + f_minus);
    half_diff_over_omega[j] = big_omega < kKernelTol ? Complex(0.0) : 0.5 * (f_plus - f_minus) / big_omega;
  }

  const ComplexMatrix diagonal_part = v * half_sum.asDiagonal() * v.adjoint();
  const ComplexMatrix split = v * half_diff_over_omega.asDiagonal() * v.adjoint();
  const ComplexMatrix generator = delta * ops.sigma_z + 2.0 * build_interaction(p, basis);
  return diagonal_part + generator * split;
}

double series_tail_bound(double x, int terms) {
  if (x <= 0.0) return 0.0;
  // Sum the Poisson pmf beyond `terms` in log space until it is negligible.
  double tail = 0.0;
  for (int k = terms + 1; k < terms + 2000; ++k) {
    const double term = std::exp(k * std::log(x) - x - std::lgamma(k + 1.0));
    tail += term;
    if (k > x && term < 1e-300) break;
  }
  return tail;
}

ComplexMatrix series_propagate(const ComplexMatrix& h, const DensityMatrix& rho0, double gamma,
                               double t, int terms) {
  const auto es = linalg::hermitian_eig(h);
  const double e_max = std::max(std::abs(es.values[0]), std::abs(es.values[es.values.size() - 1]));
  const double bound = series_tail_bound(gamma * t * e_max * e_max, terms);
  if (bound > 1e-12) {
    std::ostringstream os;
    os << "series_propagate: tail bound " << bound << " exceeds 1e-12 with " << terms << " terms";
    throw ParameterError(os.str());
  }
  ComplexMatrix sum = ComplexMatrix::Zero(h.rows(), h.cols());
  double weight = 1.0;  // (gamma t)^k / k!
  for (int k = 0; k <= terms; ++k) {
    if (k > 0) weight *= gamma * t / k;
    // M^k for k > 20 is outside m_operator_spectral's contract; build it here.
    ComplexMatrix scaled = es.vectors;
    for (Eigen::Index j = 0; j < scaled.cols(); ++j) scaled.col(j) *= m_weight(es.values[j], k, t, gamma);
    const ComplexMatrix m = scaled * es.vectors.adjoint();
    sum += weight * (m * rho0.matrix() * m.adjoint());
    if (weight == 0.0) break;
  }
  return sum;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw ParameterError("a grid needs at least two points");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  out.back() = hi;
  return out;
}

}  // namespace phasedeco
