#include <doctest.h>

#include <array>
#include <random>

#include "oracles.hpp"
#include "phasedeco/closedform.hpp"
#include "phasedeco/entanglement.hpp"
#include "phasedeco/errors.hpp"
#include "phasedeco/linalg.hpp"

using namespace phasedeco;
using oracle::max_diff;

namespace {

ComplexMatrix pauli_y() {
  ComplexMatrix y(2, 2);
  y << 0.0, Complex(0, -1), Complex(0, 1), 0.0;
  return y;
}

}  // namespace

TEST_CASE("hermitian_eig sorts a diagonal matrix and permutes the basis") {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m.diagonal() << 3.0, 1.0, 2.0;
  const auto es = linalg::hermitian_eig(m);
  CHECK(es.values[0] == 1.0);
  CHECK(es.values[1] == 2.0);
  CHECK(es.values[2] == 3.0);
  CHECK(std::abs(es.vectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(es.vectors(2, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(es.vectors(0, 2)) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig of sigma_x") {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  const auto es = linalg::hermitian_eig(m);
  CHECK(std::abs(es.values[0] + 1.0) < 1e-15);
  CHECK(std::abs(es.values[1] - 1.0) < 1e-15);
}

TEST_CASE("hermitian_eig matches characteristic-polynomial bisection on a seeded 6x6") {
  std::mt19937_64 rng(20240611);
  const ComplexMatrix m = oracle::random_hermitian(rng, 6);
  // Frozen from oracle::bisect_eigenvalues on the same matrix.
  const std::array<double, 6> expected{-2.1060350019259797, -1.0991137631533714,
                                       -0.54685860155256094, 0.76494024664254767,
                                       1.118924957206918,   2.0069098796071092};
  const auto es = linalg::hermitian_eig(m);
  const auto live = oracle::bisect_eigenvalues(m);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(es.values[i] - expected[static_cast<std::size_t>(i)]) < 1e-12);
    CHECK(std::abs(live[static_cast<std::size_t>(i)] - expected[static_cast<std::size_t>(i)]) < 1e-12);
  }
}

TEST_CASE("hermitian_eig reconstruction and unitarity on random matrices") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 16;
    const double scale = trial % 3 == 0 ? 50.0 : 1.0;
    const ComplexMatrix m = oracle::random_hermitian(rng, n, scale);
    const auto es = linalg::hermitian_eig(m);
    const ComplexMatrix rebuilt = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    const double norm = std::max(1.0, linalg::max_abs(m));
    CHECK(max_diff(rebuilt, m) <= 1e-10 * norm);
    CHECK(max_diff(es.vectors.adjoint() * es.vectors, ComplexMatrix::Identity(n, n)) <= 1e-12);
    for (int i = 0; i + 1 < n; ++i) CHECK(es.values[i] <= es.values[i + 1]);
    // M v = lambda v
    for (int i = 0; i < n; ++i)
      CHECK((m * es.vectors.col(i) - es.values[i] * es.vectors.col(i)).cwiseAbs().maxCoeff() <=
            1e-12 * std::max(1.0, m.norm()));
  }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input naming the worst entry") {
  ComplexMatrix m = ComplexMatrix::Identity(3, 3);
  m(0, 2) = 0.5;
  m(2, 0) = 0.4;
  m(1, 2) = Complex(0.0, 1e-3);
  m(2, 1) = Complex(0.0, 1e-3);  // should be -1e-3 i
  try {
    (void)linalg::hermitian_eig(m);
    FAIL("expected NotHermitianError");
  } catch (const NotHermitianError& e) {
    CHECK(e.row() == 0);
    CHECK(e.col() == 2);
    CHECK(e.deviation() == doctest::Approx(0.1));
  }
}

TEST_CASE("hermitian_eig reports the residual when the sweep cap is hit") {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.5, 0.5, 2.0;
  linalg::JacobiOptions opts;
  opts.max_sweeps = 0;
  try {
    (void)linalg::hermitian_eig(m, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() == doctest::Approx(std::sqrt(0.5)));
  }
  opts.off_tol = 0.0;
  CHECK_THROWS_AS(linalg::hermitian_eig(m, opts), ParameterError);
}

TEST_CASE("psd_sqrt on simple inputs") {
  CHECK(max_diff(linalg::psd_sqrt(ComplexMatrix::Identity(3, 3)), ComplexMatrix::Identity(3, 3)) < 1e-15);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d.diagonal() << 4.0, 9.0;
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected.diagonal() << 2.0, 3.0;
  CHECK(max_diff(linalg::psd_sqrt(d), expected) < 1e-15);

  ComplexMatrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  const ComplexMatrix root = linalg::psd_sqrt(plus);
  CHECK(max_diff(root, plus) < 1e-12);
  CHECK(max_diff(root * root, plus) < 1e-12);
}

TEST_CASE("psd_sqrt clamps tiny negatives and rejects real ones") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m.diagonal() << 1.0, -5e-11;
  const ComplexMatrix r = linalg::psd_sqrt(m);
  CHECK(std::abs(r(1, 1)) == 0.0);

  m(1, 1) = -1e-6;
  try {
    (void)linalg::psd_sqrt(m);
    FAIL("expected NotPositiveSemidefiniteError");
  } catch (const NotPositiveSemidefiniteError& e) {
    CHECK(e.eigenvalue() == doctest::Approx(-1e-6));
  }
}

TEST_CASE("psd_sqrt properties on random PSD matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 6;
    const ComplexMatrix rho = oracle::random_density(rng, n, 1 + trial % n);
    const ComplexMatrix r = linalg::psd_sqrt(rho);
    CHECK(max_diff(r * r, rho) <= 1e-10);
    CHECK(linalg::hermitian_defect(r).deviation < 1e-15);
    // sqrt of the sorted spectrum is the sorted spectrum of the sqrt
    const auto lam = linalg::hermitian_eig(rho).values;
    const auto lam_r = linalg::hermitian_eig(r).values;
    for (int i = 0; i < n; ++i) CHECK(std::abs(lam_r[i] - std::sqrt(std::max(lam[i], 0.0))) < 1e-7);
    CHECK(lam_r.minCoeff() >= -1e-15);
  }
  // idempotent on projectors
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix v = oracle::random_matrix(rng, 5, 2);
    const ComplexMatrix q = v * (v.adjoint() * v).inverse() * v.adjoint();
    CHECK(max_diff(linalg::psd_sqrt(q), q) < 1e-7);
  }
}

TEST_CASE("kron") {
  CHECK(max_diff(linalg::kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)),
                 ComplexMatrix::Identity(4, 4)) == 0.0);

  const ComplexMatrix yy = linalg::kron(pauli_y(), pauli_y());
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 3) = -1.0;
  expected(1, 2) = 1.0;
  expected(2, 1) = 1.0;
  expected(3, 0) = -1.0;
  CHECK(max_diff(yy, expected) == 0.0);
  CHECK(max_diff(yy, spin_flip_operator()) == 0.0);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = oracle::random_matrix(rng, 2, 2), b = oracle::random_matrix(rng, 2, 2);
    const auto c = oracle::random_matrix(rng, 2, 2), d = oracle::random_matrix(rng, 2, 2);
    CHECK(max_diff(linalg::kron(a, b) * linalg::kron(c, d), linalg::kron(a * c, b * d)) < 1e-13);
  }
  const auto a = oracle::random_matrix(rng, 2, 3), b = oracle::random_matrix(rng, 3, 2);
  const ComplexMatrix ab = linalg::kron(a, b);
  CHECK(ab.rows() == 6);
  CHECK(ab.cols() == 6);
  CHECK(std::abs(ab(1 * 3 + 2, 2 * 2 + 1) - a(1, 2) * b(2, 1)) == 0.0);
}

TEST_CASE("partial_trace of product and Bell states") {
  // |00><00| (x) |e><e| in dims (2, 2, 2), atom last with e = 1
  ComplexMatrix rho = ComplexMatrix::Zero(8, 8);
  rho(1, 1) = 1.0;
  const std::array<int, 3> dims{2, 2, 2};
  const std::array<int, 2> fields{0, 1};
  ComplexMatrix vac = ComplexMatrix::Zero(4, 4);
  vac(0, 0) = 1.0;
  CHECK(max_diff(linalg::partial_trace(rho, dims, fields), vac) == 0.0);

  ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
  bell(1, 1) = bell(1, 2) = bell(2, 1) = bell(2, 2) = 0.5;
  const std::array<int, 2> qubits{2, 2};
  const ComplexMatrix half = 0.5 * ComplexMatrix::Identity(2, 2);
  for (int keep : {0, 1}) {
    const std::array<int, 1> k{keep};
    CHECK(max_diff(linalg::partial_trace(bell, qubits, k), half) < 1e-16);
  }
}

TEST_CASE("partial_trace rejects inconsistent dims") {
  const ComplexMatrix rho = ComplexMatrix::Identity(6, 6) / 6.0;
  const std::array<int, 2> bad{2, 2};
  const std::array<int, 1> keep{0};
  CHECK_THROWS_AS(linalg::partial_trace(rho, bad, keep), DimensionError);
  const std::array<int, 2> good{2, 3};
  const std::array<int, 1> out_of_range{2};
  CHECK_THROWS_AS(linalg::partial_trace(rho, good, out_of_range), DimensionError);
  CHECK_THROWS_AS(linalg::partial_trace(rho, good, std::span<const int>{}), DimensionError);
}

TEST_CASE("partial_trace of a tensor product returns the scaled factor") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int da = 2 + trial % 3, db = 2 + trial % 4;
    const ComplexMatrix ra = oracle::random_density(rng, da);
    const ComplexMatrix rb = 1.7 * oracle::random_density(rng, db);
    const ComplexMatrix joint = linalg::kron(ra, rb);
    const std::array<int, 2> dims{da, db};
    const std::array<int, 1> keep_a{0}, keep_b{1};
    CHECK(max_diff(linalg::partial_trace(joint, dims, keep_a), ra * rb.trace()) <= 1e-12);
    CHECK(max_diff(linalg::partial_trace(joint, dims, keep_b), rb * ra.trace()) <= 1e-12);
    const std::array<int, 2> both{1, 0};
    CHECK(max_diff(linalg::partial_trace(joint, dims, both), joint) == 0.0);
  }
}

TEST_CASE("tracing the atom out of the exact state gives the two-weight field state") {
  const auto p = ModelParams::from_detuning(1.0, 1.0, 0.0, 0.1);
  const FockAtomBasis basis(2);
  const double t = 1.0;
  const ComplexMatrix full = closedform::embed(closedform::rho_closed(p, t), basis);
  const ComplexMatrix fields = reduce_to_fields(DensityMatrix(full), basis);

  // Independent evaluation in the (n_a, n_b) product basis with cutoff 3.
  const oracle::Formulas f{1.0, 1.0, 0.0, 0.1};
  ComplexMatrix expected = ComplexMatrix::Zero(9, 9);
  expected(0, 0) = f.field_vacuum_weight(t);
  ComplexVector phi = ComplexVector::Zero(9);
  phi[1 * 3 + 0] = 1.0 / f.g();  // |10>
  phi[0 * 3 + 1] = 1.0 / f.g();  // |01>
  expected += f.field_phi_weight(t) * phi * phi.adjoint();
  CHECK(max_diff(fields, expected) <= 1e-12);
  CHECK(std::abs(fields.trace().real() - 1.0) <= 1e-12);
}
