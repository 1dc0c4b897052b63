#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cartankit/matrix.hpp"

namespace cartankit {

enum class Hermiticity { SkewHermitian, Hermitian };

/// A real-linear subspace of u(n) (skew-Hermitian) or iu(n) (Hermitian),
/// held as a Hilbert-Schmidt orthonormal basis.
class MatrixSubspace {
 public:
  MatrixSubspace(int ambient_dim, Hermiticity flag);

  /// Takes an already orthonormal basis; throws InvalidArgument if the
  /// basis is not orthonormal within rank_tol or violates the flag.
  MatrixSubspace(int ambient_dim, Hermiticity flag, std::vector<ComplexMatrix> basis,
                 const Tolerance& tol = {});

  /// Orthonormalizes an arbitrary spanning set first.
  static MatrixSubspace span_of(int ambient_dim, Hermiticity flag,
                                std::span<const ComplexMatrix> generators,
                                const Tolerance& tol = {});

  int ambient_dim() const noexcept { return ambient_dim_; }
  Hermiticity hermiticity() const noexcept { return flag_; }
  int dimension() const noexcept { return static_cast<int>(basis_.size()); }
  const std::vector<ComplexMatrix>& basis() const noexcept { return basis_; }
  const ComplexMatrix& operator[](int k) const { return basis_[static_cast<std::size_t>(k)]; }

  /// Columns are the row-major vectorized basis elements, n^2 x dim.
  const Eigen::MatrixXcd& flattened() const noexcept { return flat_; }

  /// i times every basis element: maps u(n) subspaces to iu(n) and back.
  MatrixSubspace times_i() const;

  /// Orthonormal basis of the sum of the two subspaces.
  MatrixSubspace direct_sum(const MatrixSubspace& other, const Tolerance& tol = {}) const;

 private:
  void rebuild_flat();

  int ambient_dim_;
  Hermiticity flag_;
  std::vector<ComplexMatrix> basis_;
  Eigen::MatrixXcd flat_;
};

/// Row-major vectorization, the layout used by MatrixSubspace::flattened().
Eigen::VectorXcd vectorize(const ComplexMatrix& m);

enum class Algebra { U, SU, SO, SP, SOPerp, SPPerp, AIIIK, AIIIP };

/// Orthonormal basis of a canonical subalgebra of u(n) or of its
/// complement in u(n). `n` is always the matrix dimension; p and q are
/// read only for the AIII blocks.
MatrixSubspace canonical_basis(Algebra algebra, int n, int p = 0, int q = 0);

std::string to_string(Algebra algebra);

struct Projection {
  ComplexMatrix component;
  double residual_norm = 0.0;
};

/// Real-coefficient projection: coefficients are Re<M, B_k>, so any
/// imaginary part of an inner product shows up in the residual.
Projection project(const MatrixSubspace& s, const ComplexMatrix& m);

bool contains(const MatrixSubspace& s, const ComplexMatrix& m, double tol);

enum class BracketKind { Commutator, Anticommutator };

std::string to_string(BracketKind kind);

ComplexMatrix bracket(BracketKind kind, const ComplexMatrix& a, const ComplexMatrix& b);

inline constexpr double kDefaultClosureTol = 1e-9;

struct ClosureReport {
  BracketKind bracket_kind = BracketKind::Commutator;
  std::int64_t pairs_checked = 0;
  double max_residual = 0.0;
  std::pair<int, int> worst_pair{-1, -1};
  double tolerance = kDefaultClosureTol;
  bool passed = true;
};

/// Brackets every ordered basis pair (S1[i], S2[j]) and measures how far each
/// result sits outside `target`. Parallel over i; the worst pair is the
/// lowest (i, j) among the maxima (equal up to rounding) regardless of thread
/// count.
ClosureReport closure_check(const MatrixSubspace& s1, const MatrixSubspace& s2,
                            const MatrixSubspace& target, BracketKind kind,
                            double closure_tol = kDefaultClosureTol);

/// Single-threaded pair-by-pair version of closure_check built on project().
/// Kept as the reference the parallel kernel is tested against.
ClosureReport closure_check_reference(const MatrixSubspace& s1, const MatrixSubspace& s2,
                                      const MatrixSubspace& target, BracketKind kind,
                                      double closure_tol = kDefaultClosureTol);

/// Checks `samples` basis pairs drawn uniformly with a seeded generator.
ClosureReport closure_check_sampled(const MatrixSubspace& s1, const MatrixSubspace& s2,
                                    const MatrixSubspace& target, BracketKind kind,
                                    std::int64_t samples, std::uint64_t seed,
                                    double closure_tol = kDefaultClosureTol);

/// Right-hand side of the tensor-product bracket expansion
///   [A(x)B, C(x)D] = 1/2([A,C](x){B,D} + {A,C}(x)[B,D])
///   {A(x)B, C(x)D} = 1/2([A,C](x)[B,D] + {A,C}(x){B,D})
ComplexMatrix tensor_bracket_expand(const ComplexMatrix& a, const ComplexMatrix& b,
                                    const ComplexMatrix& c, const ComplexMatrix& d,
                                    BracketKind kind);

}  // namespace cartankit
