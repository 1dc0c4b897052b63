#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cartankit {

using Complex = std::complex<double>;

/// Dense square complex matrix. Every operator, unitary, and algebra element
/// in the library is carried as one of these.
using ComplexMatrix = Eigen::MatrixXcd;

/// Absolute tolerances shared by the predicates and residual checks.
struct Tolerance {
  double atol = 1e-10;
  double rank_tol = 1e-8;

  /// Throws InvalidArgument unless 0 < atol <= rank_tol.
  void validate() const;
};

/// Defaults, honoring the CARTANKIT_TOL environment override for atol.
Tolerance default_tolerance();

inline constexpr double kDefaultBranchGuard = 1e-6;

// Construction helpers.
ComplexMatrix identity(int n);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
/// [[0, I], [-I, 0]] in n/2 blocks. n must be even.
ComplexMatrix symplectic_j(int n);
/// diag(I_p, -I_q).
ComplexMatrix indefinite_pq(int p, int q);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(std::span<const ComplexMatrix> factors);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

// Structural predicates, all decided against an absolute tolerance.
bool is_square(const ComplexMatrix& m);
bool is_unitary(const ComplexMatrix& m, double atol);
bool is_hermitian(const ComplexMatrix& m, double atol);
bool is_skew_hermitian(const ComplexMatrix& m, double atol);
bool is_real(const ComplexMatrix& m, double atol);
/// ||A J + J A^T|| <= atol.
bool is_symplectic(const ComplexMatrix& m, double atol);
bool is_normal(const ComplexMatrix& m, double atol);

/// Largest absolute entry. Used for all entrywise comparisons.
double max_abs(const ComplexMatrix& m);
/// Hilbert-Schmidt (Frobenius) norm.
double hs_norm(const ComplexMatrix& m);

/// Tr(A B^dagger).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

struct SpectralDecomposition {
  std::vector<Complex> eigenvalues;
  ComplexMatrix eigenvectors;  // unitary; columns match eigenvalues

  ComplexMatrix reconstruct() const;
};

/// Spectral decomposition of a normal matrix, M = V diag(lambda) V^dagger.
/// Eigenvalues come sorted by descending phase angle, then descending
/// magnitude.
SpectralDecomposition spectral_normal(const ComplexMatrix& m,
                                      const Tolerance& tol = {});

struct LogOptions {
  double branch_guard = kDefaultBranchGuard;
  bool allow_branch_edge = false;
  Tolerance tol{};
};

/// Skew-Hermitian L with exp(L) = U and every eigenphase in (-pi, pi].
ComplexMatrix principal_log_unitary(const ComplexMatrix& u,
                                    const LogOptions& opts = {});
ComplexMatrix sqrt_unitary(const ComplexMatrix& u, const LogOptions& opts = {});
ComplexMatrix exp_skew(const ComplexMatrix& l, const Tolerance& tol = {});

/// Modified Gram-Schmidt with one reorthogonalization pass over the
/// real-linear span. Inputs whose residual norm falls below rank_tol are
/// dropped; output order follows input order.
std::vector<ComplexMatrix> gram_schmidt(std::span<const ComplexMatrix> matrices,
                                        const Tolerance& tol = {});

}  // namespace cartankit
