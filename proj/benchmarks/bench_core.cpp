#include <benchmark/benchmark.h>

#include <random>

#include "phasedeco/closedform.hpp"
#include "phasedeco/dynamics.hpp"
#include "phasedeco/entanglement.hpp"

using namespace phasedeco;

namespace {

ComplexMatrix random_hermitian(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(d(rng), d(rng));
  return 0.5 * (m + m.adjoint());
}

}  // namespace

static void BM_JacobiEig(benchmark::State& state) {
  const ComplexMatrix m = random_hermitian(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::hermitian_eig(m));
}
BENCHMARK(BM_JacobiEig)->Arg(4)->Arg(9)->Arg(16)->Arg(25);

static void BM_Rk4Step(benchmark::State& state) {
  const FockAtomBasis basis(static_cast<int>(state.range(0)));
  const auto p = ModelParams::from_detuning(1.0, 1.0, 1.0, 0.1);
  const ComplexMatrix h = build_hamiltonian(p, basis);
  const ComplexMatrix h2 = h * h;
  ComplexMatrix rho = initial_state(InitialKind::excited_vacuum, basis).matrix();
  const double dt = 1e-4;
  for (auto _ : state) {
    const ComplexMatrix k1 = dephasing_rhs(h, h2, rho, 0.1);
    const ComplexMatrix k2 = dephasing_rhs(h, h2, rho + (0.5 * dt) * k1, 0.1);
    const ComplexMatrix k3 = dephasing_rhs(h, h2, rho + (0.5 * dt) * k2, 0.1);
    const ComplexMatrix k4 = dephasing_rhs(h, h2, rho + dt * k3, 0.1);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    benchmark::DoNotOptimize(rho.data());
  }
}
BENCHMARK(BM_Rk4Step)->Arg(2)->Arg(4);

static void BM_Rk4Trajectory(benchmark::State& state) {
  const FockAtomBasis basis(2);
  const auto p = ModelParams::from_detuning(1.0, 1.0, 1.0, 0.1);
  const ComplexMatrix h = build_hamiltonian(p, basis);
  const auto rho0 = initial_state(InitialKind::excited_vacuum, basis);
  const auto grid = linspace(0.0, 1.0, 11);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_master_equation(h, rho0, 0.1, grid, {1e-3}));
}
BENCHMARK(BM_Rk4Trajectory)->Unit(benchmark::kMillisecond);

static void BM_SpectralPropagate(benchmark::State& state) {
  const FockAtomBasis basis(static_cast<int>(state.range(0)));
  const auto p = ModelParams::from_detuning(1.0, 1.0, 1.0, 0.1);
  const SpectralPropagator prop(build_hamiltonian(p, basis), 0.1);
  const auto rho0 = initial_state(InitialKind::excited_vacuum, basis);
  double t = 0.0;
  for (auto _ : state) {
    t += 0.01;
    benchmark::DoNotOptimize(prop.propagate(rho0, t));
  }
}
BENCHMARK(BM_SpectralPropagate)->Arg(2)->Arg(4);

static void BM_ClosedForm(benchmark::State& state) {
  const auto p = ModelParams::from_detuning(1.0, 1.0, 1.0, 0.1);
  double t = 0.0;
  for (auto _ : state) {
    t += 0.01;
    benchmark::DoNotOptimize(closedform::rho_closed(p, t));
  }
}
BENCHMARK(BM_ClosedForm);

static void BM_Concurrence(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> d;
  ComplexMatrix a(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = Complex(d(rng), d(rng));
  ComplexMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  const TwoQubitState q(rho, {"00", "01", "10", "11"});
  for (auto _ : state) benchmark::DoNotOptimize(concurrence(q));
}
BENCHMARK(BM_Concurrence);

static void BM_ObservablesFromState(benchmark::State& state) {
  const FockAtomBasis basis(2);
  const auto p = ModelParams::from_detuning(1.0, 2.0, 1.0, 0.1);
  const auto rho = spectral_propagate(build_hamiltonian(p, basis), initial_state(InitialKind::excited_vacuum, basis),
                                      0.1, 1.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pairwise_concurrences(rho, p, basis));
    benchmark::DoNotOptimize(field_concurrence(rho, basis));
  }
}
BENCHMARK(BM_ObservablesFromState);

BENCHMARK_MAIN();
