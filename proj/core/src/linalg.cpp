#include "phasedeco/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "phasedeco/errors.hpp"

namespace phasedeco::linalg {

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

HermitianDefect hermitian_defect(const ComplexMatrix& m) {
  HermitianDefect worst;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      const double d = std::abs(m(i, j) - std::conj(m(j, i)));
      if (d > worst.deviation) worst = {d, static_cast<int>(i), static_cast<int>(j)};
    }
  }
  return worst;
}

void require_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "matrix is not square (" << m.rows() << "x" << m.cols() << ")";
    throw DimensionError(os.str());
  }
  const auto defect = hermitian_defect(m);
  if (defect.deviation > tol * std::max(1.0, max_abs(m))) {
    std::ostringstream os;
    os << "matrix is not Hermitian: |M(" << defect.row << "," << defect.col
       << ") - conj(M(" << defect.col << "," << defect.row << "))| = " << defect.deviation;
    throw NotHermitianError(os.str(), defect.row, defect.col, defect.deviation);
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

// Annihilates a(p,q) with the unitary J = diag(1, conj(phase)) * R(c, s),
// a <- J^dagger a J, v <- v J.
void rotate(ComplexMatrix& a, ComplexMatrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex phase = apq / r;
  const Complex phase_c = std::conj(phase);

  const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Complex jpp = c, jpq = s, jqp = -s * phase_c, jqq = c * phase_c;
  const Eigen::Index n = a.rows();

  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
}

}  // namespace

EigenSystem hermitian_eig(const ComplexMatrix& m, const JacobiOptions& opts) {
  if (!(opts.off_tol > 0.0)) throw ParameterError("hermitian_eig: tolerance must be positive");
  require_hermitian(m, opts.hermitian_tol);

  const Eigen::Index n = m.rows();
  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double threshold = opts.off_tol * std::max(1.0, a.norm());

  double off = off_diagonal_norm(a);
  int sweep = 0;
  while (off > threshold) {
    if (sweep == opts.max_sweeps) {
      std::ostringstream os;
      os << "hermitian_eig: no convergence after " << opts.max_sweeps
         << " sweeps, off-diagonal norm " << off;
      throw ConvergenceError(os.str(), off);
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
    off = off_diagonal_norm(a);
    ++sweep;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigenSystem out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.values[k] = a(src, src).real();
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const auto es = hermitian_eig(m);
  if (es.values.size() > 0 && es.values[0] < -kPsdClamp) {
    std::ostringstream os;
    os << "psd_sqrt: matrix is not positive semidefinite (eigenvalue " << es.values[0] << ")";
    throw NotPositiveSemidefiniteError(os.str(), es.values[0]);
  }
  return hermitian_part(apply_spectral(es, [](double x) { return std::sqrt(std::max(x, 0.0)); }));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const int> dims,
                            std::span<const int> keep) {
  if (dims.empty()) throw DimensionError("partial_trace: no subsystem dimensions given");
  Eigen::Index total = 1;
  for (int d : dims) {
    if (d <= 0) throw DimensionError("partial_trace: subsystem dimensions must be positive");
    total *= d;
  }
  if (rho.rows() != total || rho.cols() != total) {
    std::ostringstream os;
    os << "partial_trace: subsystem dimensions multiply to " << total << " but matrix is "
       << rho.rows() << "x" << rho.cols();
    throw DimensionError(os.str());
  }

  const int nsys = static_cast<int>(dims.size());
  std::vector<bool> kept(static_cast<std::size_t>(nsys), false);
  if (keep.empty()) throw DimensionError("partial_trace: keep set is empty");
  for (int k : keep) {
    if (k < 0 || k >= nsys) throw DimensionError("partial_trace: keep index out of range");
    if (kept[static_cast<std::size_t>(k)]) throw DimensionError("partial_trace: duplicate keep index");
    kept[static_cast<std::size_t>(k)] = true;
  }

  // Split a full index into (kept index, traced index).
  std::vector<Eigen::Index> kept_idx(static_cast<std::size_t>(total));
  std::vector<Eigen::Index> traced_idx(static_cast<std::size_t>(total));
  Eigen::Index kept_dim = 1;
  for (int s = 0; s < nsys; ++s)
    if (kept[static_cast<std::size_t>(s)]) kept_dim *= dims[static_cast<std::size_t>(s)];

  for (Eigen::Index full = 0; full < total; ++full) {
    Eigen::Index rem = full, kstride = 1, tstride = 1, ki = 0, ti = 0;
    for (int s = nsys - 1; s >= 0; --s) {
      const int d = dims[static_cast<std::size_t>(s)];
      const Eigen::Index digit = rem % d;
      rem /= d;
      if (kept[static_cast<std::size_t>(s)]) {
        ki += digit * kstride;
        kstride *= d;
      } else {
        ti += digit * tstride;
        tstride *= d;
      }
    }
    kept_idx[static_cast<std::size_t>(full)] = ki;
    traced_idx[static_cast<std::size_t>(full)] = ti;
  }

  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (Eigen::Index i = 0; i < total; ++i)
    for (Eigen::Index j = 0; j < total; ++j)
      if (traced_idx[static_cast<std::size_t>(i)] == traced_idx[static_cast<std::size_t>(j)])
        out(kept_idx[static_cast<std::size_t>(i)], kept_idx[static_cast<std::size_t>(j)]) += rho(i, j);
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

}  // namespace phasedeco::linalg
