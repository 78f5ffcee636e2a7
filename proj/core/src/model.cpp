#include "phasedeco/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phasedeco/errors.hpp"

namespace phasedeco {

ModelParams::ModelParams(double omega_a, double omega_b, double omega0, double g_a, double g_b,
                         double gamma)
    : omega_a_(omega_a), omega_b_(omega_b), omega0_(omega0), g_a_(g_a), g_b_(g_b), gamma_(gamma) {
  for (double v : {omega_a, omega_b, omega0, g_a, g_b, gamma})
    if (!std::isfinite(v)) throw ParameterError("model parameters must be finite");
  if (omega_a != omega_b) {
    std::ostringstream os;
    os << "only degenerate cavities are supported (omega_a = " << omega_a
       << ", omega_b = " << omega_b << ")";
    throw ParameterError(os.str());
  }
  if (!(g_a * g_a + g_b * g_b > 0.0)) throw ParameterError("g_a^2 + g_b^2 must be positive");
  if (gamma < 0.0) throw ParameterError("decoherence rate gamma must be non-negative");
}

ModelParams ModelParams::from_detuning(double g_a, double g_b, double delta, double gamma,
                                       double omega) {
  return ModelParams(omega, omega, omega + delta, g_a, g_b, gamma);
}

double ModelParams::g() const { return std::hypot(g_a_, g_b_); }

double ModelParams::delta() const { return omega0_ - omega_a_; }

double ModelParams::big_omega() const {
  const double d = delta();
  return std::sqrt(d * d + 4.0 * (g_a_ * g_a_ + g_b_ * g_b_));
}

ModelParams ModelParams::with_gamma(double gamma) const {
  return ModelParams(omega_a_, omega_b_, omega0_, g_a_, g_b_, gamma);
}

FockAtomBasis::FockAtomBasis(int n_max) : n_max_(n_max) {
  if (n_max < 0) throw ParameterError("n_max must be non-negative");
  for (int n = 0; n <= n_max; ++n) {
    std::vector<FockAtomState> sector;
    for (int na = n; na >= 0; --na) {
      sector.push_back({na, n - na, AtomLevel::ground});
      if (na <= n - 1) sector.push_back({na, n - 1 - na, AtomLevel::excited});
    }
    std::stable_sort(sector.begin(), sector.end(), [](const auto& x, const auto& y) {
      if (x.n_a != y.n_a) return x.n_a > y.n_a;
      return x.atom < y.atom;
    });
    states_.insert(states_.end(), sector.begin(), sector.end());
  }
}

std::optional<int> FockAtomBasis::index_of(const FockAtomState& s) const {
  auto it = std::find(states_.begin(), states_.end(), s);
  if (it == states_.end()) return std::nullopt;
  return static_cast<int>(it - states_.begin());
}

int FockAtomBasis::require_index(const FockAtomState& s) const {
  if (auto i = index_of(s)) return *i;
  std::ostringstream os;
  os << "state (" << s.n_a << "," << s.n_b << "," << (s.atom == AtomLevel::excited ? 'e' : 'g')
     << ") is outside the basis truncated at n_max = " << n_max_;
  throw DimensionError(os.str());
}

ComplexVector FockAtomBasis::basis_vector(const FockAtomState& s) const {
  ComplexVector v = ComplexVector::Zero(dim());
  v[require_index(s)] = 1.0;
  return v;
}

ElementaryOperators build_elementary_operators(const FockAtomBasis& basis) {
  const int n = basis.dim();
  ElementaryOperators ops;
  for (ComplexMatrix* m : {&ops.a, &ops.b, &ops.sigma_plus, &ops.sigma_minus, &ops.sigma_z,
                           &ops.projector_e, &ops.number_a, &ops.number_b, &ops.total_excitation})
    *m = ComplexMatrix::Zero(n, n);

  for (int j = 0; j < n; ++j) {
    const auto& s = basis.state(j);
    const bool excited = s.atom == AtomLevel::excited;
    if (s.n_a > 0) ops.a(basis.require_index({s.n_a - 1, s.n_b, s.atom}), j) = std::sqrt(double(s.n_a));
    if (s.n_b > 0) ops.b(basis.require_index({s.n_a, s.n_b - 1, s.atom}), j) = std::sqrt(double(s.n_b));
    if (excited) {
      ops.sigma_minus(basis.require_index({s.n_a, s.n_b, AtomLevel::ground}), j) = 1.0;
    } else if (auto i = basis.index_of({s.n_a, s.n_b, AtomLevel::excited})) {
      ops.sigma_plus(*i, j) = 1.0;
    }
    ops.sigma_z(j, j) = excited ? 1.0 : -1.0;
    ops.projector_e(j, j) = excited ? 1.0 : 0.0;
    ops.number_a(j, j) = s.n_a;
    ops.number_b(j, j) = s.n_b;
    ops.total_excitation(j, j) = s.excitation();
  }
  return ops;
}

ComplexMatrix build_interaction(const ModelParams& p, const FockAtomBasis& basis) {
  const auto ops = build_elementary_operators(basis);
  const ComplexMatrix c = p.g_a() * ops.a + p.g_b() * ops.b;
  return ops.sigma_plus * c + c.adjoint() * ops.sigma_minus;
}

ComplexMatrix build_hamiltonian(const ModelParams& p, const FockAtomBasis& basis) {
  const auto ops = build_elementary_operators(basis);
  return p.omega_a() * ops.number_a + p.omega_b() * ops.number_b +
         0.5 * p.omega0() * ops.sigma_z + build_interaction(p, basis);
}

ConstantsOfMotion build_constants_of_motion(const ModelParams& p, const FockAtomBasis& basis) {
  const auto ops = build_elementary_operators(basis);
  const double g2 = p.g() * p.g();
  const double ga2 = p.g_a() * p.g_a(), gb2 = p.g_b() * p.g_b(), gab = p.g_a() * p.g_b();
  const ComplexMatrix hop = ops.a.adjoint() * ops.b + ops.b.adjoint() * ops.a;
  const auto id = ComplexMatrix::Identity(basis.dim(), basis.dim());

  ConstantsOfMotion k;
  k.k1 = (ga2 * ops.number_a + gb2 * ops.number_b) / g2 + (gab / g2) * hop +
         0.5 * (id + ops.sigma_z);
  k.k2 = (ga2 * ops.number_b + gb2 * ops.number_a) / g2 - (gab / g2) * hop;
  return k;
}

namespace {

// Kernel test on K1 itself: its spectrum is integer, and round-off of order
// 1e-16 on a zero eigenvalue would survive a threshold applied after sqrt.
bool in_kernel(double k1_eigenvalue) { return k1_eigenvalue < kKernelTol; }

}  // namespace

Su2Generators build_su2_generators(const ModelParams& p, const FockAtomBasis& basis) {
  const auto ops = build_elementary_operators(basis);
  const auto k = build_constants_of_motion(p, basis);
  const auto es = linalg::hermitian_eig(k.k1);
  const ComplexMatrix inv_sqrt_k1 = linalg::apply_spectral(
      es, [](double x) { return in_kernel(x) ? 0.0 : 1.0 / std::sqrt(x); });

  const ComplexMatrix c = p.g_a() * ops.a + p.g_b() * ops.b;
  Su2Generators s;
  s.s_plus = ops.sigma_plus * c * inv_sqrt_k1 / p.g();
  s.s_minus = c.adjoint() * ops.sigma_minus * inv_sqrt_k1 / p.g();
  s.s_0 = 0.5 * ops.sigma_z;
  return s;
}

ComplexMatrix algebraic_hamiltonian(const ModelParams& p, const FockAtomBasis& basis) {
  const auto k = build_constants_of_motion(p, basis);
  const auto s = build_su2_generators(p, basis);
  const ComplexMatrix sqrt_k1 = linalg::apply_spectral(
      linalg::hermitian_eig(k.k1), [](double x) { return in_kernel(x) ? 0.0 : std::sqrt(x); });
  const auto id = ComplexMatrix::Identity(basis.dim(), basis.dim());
  return p.omega() * (k.k1 + k.k2 - 0.5 * id) + p.delta() * s.s_0 +
         p.g() * sqrt_k1 * (s.s_plus + s.s_minus);
}

ComplexMatrix k1_support_projector(const ModelParams& p, const FockAtomBasis& basis) {
  const auto k = build_constants_of_motion(p, basis);
  return linalg::apply_spectral(linalg::hermitian_eig(k.k1),
                                [](double x) { return in_kernel(x) ? 0.0 : 1.0; });
}

ComplexVector phi_state(const ModelParams& p, const FockAtomBasis& basis, AtomLevel atom) {
  return (p.g_a() * basis.basis_vector({1, 0, atom}) + p.g_b() * basis.basis_vector({0, 1, atom})) /
         p.g();
}

DensityMatrix initial_state(InitialKind kind, const FockAtomBasis& basis, double delta_mix) {
  if (kind == InitialKind::excited_vacuum) delta_mix = 0.0;
  if (!(delta_mix >= 0.0 && delta_mix <= 1.0)) {
    std::ostringstream os;
    os << "thermal mixing weight must lie in [0, 1], got " << delta_mix;
    throw ParameterError(os.str());
  }
  ComplexMatrix rho = ComplexMatrix::Zero(basis.dim(), basis.dim());
  if (delta_mix > 0.0) {
    const int ig = basis.require_index({0, 0, AtomLevel::ground});
    rho(ig, ig) = delta_mix;
  }
  if (delta_mix < 1.0) {
    const int ie = basis.require_index({0, 0, AtomLevel::excited});
    rho(ie, ie) = 1.0 - delta_mix;
  }
  return DensityMatrix(std::move(rho));
}

}  // namespace phasedeco
