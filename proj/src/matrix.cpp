#include "cartankit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "cartankit/errors.hpp"

namespace cartankit {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw DimensionMismatch(std::string(what) + ": matrix must be square and non-empty");
  }
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(what) + ": dimension mismatch (" +
                            std::to_string(a.rows()) + " vs " + std::to_string(b.rows()) +
                            ")");
  }
}

// Phase quantum used to make the eigenvalue ordering a strict weak order.
constexpr double kPhaseBin = 1e-10;

double canonical_phase(Complex z) {
  double phase = std::arg(z);
  if (phase <= -std::numbers::pi + 1e-12) phase = std::numbers::pi;
  return phase;
}

}  // namespace

void Tolerance::validate() const {
  if (!(atol > 0.0) || !(rank_tol > 0.0)) {
    throw InvalidArgument("tolerances must be strictly positive");
  }
  if (rank_tol < atol) {
    throw InvalidArgument("rank_tol must be at least atol");
  }
}

Tolerance default_tolerance() {
  Tolerance tol;
  if (const char* env = std::getenv("CARTANKIT_TOL")) {
    char* end = nullptr;
    const double value = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(value > 0.0)) {
      throw InvalidArgument(std::string("CARTANKIT_TOL is not a positive number: ") + env);
    }
    tol.atol = value;
    tol.rank_tol = std::max(tol.rank_tol, value);
  }
  return tol;
}

ComplexMatrix identity(int n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  const Complex i(0.0, 1.0);
  ComplexMatrix m(2, 2);
  m << 0.0, -i, i, 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexMatrix symplectic_j(int n) {
  if (n <= 0 || n % 2 != 0) throw InvalidArgument("J requires a positive even dimension");
  const int h = n / 2;
  ComplexMatrix j = ComplexMatrix::Zero(n, n);
  j.topRightCorner(h, h).setIdentity();
  j.bottomLeftCorner(h, h) = -ComplexMatrix::Identity(h, h);
  return j;
}

ComplexMatrix indefinite_pq(int p, int q) {
  if (p <= 0 || q <= 0) throw InvalidArgument("I_{p,q} requires p, q > 0");
  ComplexMatrix m = ComplexMatrix::Identity(p + q, p + q);
  m.bottomRightCorner(q, q) *= -1.0;
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) return ComplexMatrix::Identity(1, 1);
  ComplexMatrix out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "anticommutator");
  return a * b + b * a;
}

bool is_square(const ComplexMatrix& m) { return m.rows() > 0 && m.rows() == m.cols(); }

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hs_norm(const ComplexMatrix& m) { return m.norm(); }

bool is_unitary(const ComplexMatrix& m, double atol) {
  return is_square(m) &&
         max_abs(m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols())) <= atol;
}

bool is_hermitian(const ComplexMatrix& m, double atol) {
  return is_square(m) && max_abs(m - m.adjoint()) <= atol;
}

bool is_skew_hermitian(const ComplexMatrix& m, double atol) {
  return is_square(m) && max_abs(m + m.adjoint()) <= atol;
}

bool is_real(const ComplexMatrix& m, double atol) {
  return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() <= atol;
}

bool is_symplectic(const ComplexMatrix& m, double atol) {
  if (!is_square(m) || m.rows() % 2 != 0) return false;
  const ComplexMatrix j = symplectic_j(static_cast<int>(m.rows()));
  return hs_norm(m * j + j * m.transpose()) <= atol;
}

bool is_normal(const ComplexMatrix& m, double atol) {
  if (!is_square(m)) return false;
  const double scale = std::max(1.0, max_abs(m) * max_abs(m));
  return max_abs(m * m.adjoint() - m.adjoint() * m) <= atol * scale;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "hs_inner");
  // Tr(A B^dagger) = sum_ij A_ij conj(B_ij)
  return (a.array() * b.conjugate().array()).sum();
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  Eigen::VectorXcd lambda(static_cast<Eigen::Index>(eigenvalues.size()));
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) lambda(static_cast<Eigen::Index>(k)) = eigenvalues[k];
  return eigenvectors * lambda.asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition spectral_normal(const ComplexMatrix& m, const Tolerance& tol) {
  require_square(m, "spectral_normal");
  if (!is_normal(m, tol.atol)) throw NotNormal("spectral_normal: input is not normal");

  // For a normal matrix the Schur form is diagonal, and the Schur vectors
  // are unitary to working precision even across degenerate eigenvalues.
  Eigen::ComplexSchur<ComplexMatrix> schur(m);
  if (schur.info() != Eigen::Success) throw Error("spectral_normal: Schur iteration failed");
  const ComplexMatrix& t = schur.matrixT();
  const ComplexMatrix& q = schur.matrixU();

  const Eigen::Index n = m.rows();
  double off = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) off = std::max(off, std::abs(t(i, j)));
  if (off > std::max(tol.atol, 1e-12) * std::max(1.0, max_abs(m)) * static_cast<double>(n)) {
    throw NotNormal("spectral_normal: Schur form not diagonal, input is not normal");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  auto phase_key = [&](Eigen::Index k) {
    return std::llround(canonical_phase(t(k, k)) / kPhaseBin);
  };
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const auto pa = phase_key(a), pb = phase_key(b);
    if (pa != pb) return pa > pb;
    return std::abs(t(a, a)) > std::abs(t(b, b));
  });

  SpectralDecomposition out;
  out.eigenvalues.reserve(static_cast<std::size_t>(n));
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues.push_back(t(src, src));
    out.eigenvectors.col(k) = q.col(src);
  }
  return out;
}

ComplexMatrix principal_log_unitary(const ComplexMatrix& u, const LogOptions& opts) {
  require_square(u, "principal_log_unitary");
  if (!is_unitary(u, 10.0 * opts.tol.atol)) {
    throw InvalidArgument("principal_log_unitary: input is not unitary");
  }
  const SpectralDecomposition spec = spectral_normal(u, opts.tol);
  Eigen::VectorXcd phases(u.rows());
  for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
    const double phase = canonical_phase(spec.eigenvalues[k]);
    if (!opts.allow_branch_edge && std::numbers::pi - std::abs(phase) < opts.branch_guard) {
      throw BranchCut("eigenvalue at the branch cut: eigenphase " + std::to_string(phase) +
                          " lies within " + std::to_string(opts.branch_guard) +
                          " rad of -1",
                      phase);
    }
    phases(static_cast<Eigen::Index>(k)) = Complex(0.0, phase);
  }
  ComplexMatrix l = spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
  return 0.5 * (l - l.adjoint());
}

ComplexMatrix sqrt_unitary(const ComplexMatrix& u, const LogOptions& opts) {
  return exp_skew(0.5 * principal_log_unitary(u, opts), opts.tol);
}

ComplexMatrix exp_skew(const ComplexMatrix& l, const Tolerance& tol) {
  require_square(l, "exp_skew");
  if (!is_skew_hermitian(l, tol.atol * std::max(1.0, max_abs(l)))) {
    throw NotSkewHermitian("exp_skew: input is not skew-Hermitian");
  }
  const ComplexMatrix cleaned = 0.5 * (l - l.adjoint());
  const SpectralDecomposition spec = spectral_normal(cleaned, tol);
  Eigen::VectorXcd values(l.rows());
  for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
    values(static_cast<Eigen::Index>(k)) = std::exp(Complex(0.0, spec.eigenvalues[k].imag()));
  }
  return spec.eigenvectors * values.asDiagonal() * spec.eigenvectors.adjoint();
}

std::vector<ComplexMatrix> gram_schmidt(std::span<const ComplexMatrix> matrices,
                                        const Tolerance& tol) {
  std::vector<ComplexMatrix> basis;
  if (matrices.empty()) return basis;
  const ComplexMatrix& first = matrices.front();
  basis.reserve(matrices.size());
  for (const ComplexMatrix& m : matrices) {
    require_same_dim(first, m, "gram_schmidt");
    ComplexMatrix v = m;
    for (int pass = 0; pass < 2; ++pass) {
      for (const ComplexMatrix& b : basis) v -= hs_inner(v, b).real() * b;
    }
    const double norm = hs_norm(v);
    if (norm < tol.rank_tol) continue;
    basis.push_back(v / norm);
  }
  return basis;
}

}  // namespace cartankit
