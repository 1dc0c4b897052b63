#pragma once

#include <functional>
#include <optional>
#include <string>

#include "cartankit/matrix.hpp"
#include "cartankit/subspace.hpp"

namespace cartankit {

enum class SymmetryKind { Unitary, Antiunitary };

std::string to_string(SymmetryKind kind);

/// A state-space symmetry Theta = X K, where K is complex conjugation for an
/// antiunitary symmetry and the identity for a unitary one.
class Symmetry {
 public:
  /// Throws InvalidArgument unless X is unitary within tol.atol.
  Symmetry(SymmetryKind kind, ComplexMatrix x, const Tolerance& tol = {});

  SymmetryKind kind() const noexcept { return kind_; }
  bool antiunitary() const noexcept { return kind_ == SymmetryKind::Antiunitary; }
  const ComplexMatrix& x() const noexcept { return x_; }
  int dim() const noexcept { return static_cast<int>(x_.rows()); }

  /// X v or X conj(v).
  Eigen::VectorXcd act(const Eigen::VectorXcd& v) const;

 private:
  SymmetryKind kind_;
  ComplexMatrix x_;
};

enum class CartanFamily { AI, AII, AIII };

/// Conjugacy class of a Cartan decomposition. p and q are meaningful for AIII.
struct CartanType {
  CartanFamily family = CartanFamily::AI;
  int p = 0;
  int q = 0;

  static CartanType ai() { return {CartanFamily::AI, 0, 0}; }
  static CartanType aii() { return {CartanFamily::AII, 0, 0}; }
  static CartanType aiii(int p, int q) { return {CartanFamily::AIII, p, q}; }

  friend bool operator==(const CartanType&, const CartanType&) = default;
};

/// "AI", "AII", or "AIII(p,q)".
std::string to_string(const CartanType& type);
/// Family name only: "AI", "AII", or "AIII".
std::string family_name(CartanFamily family);

/// Canonical involution, optionally conjugated by a unitary T.
class CartanInvolution {
 public:
  CartanInvolution(CartanType type, int n, std::optional<ComplexMatrix> t = std::nullopt,
                   const Tolerance& tol = {});

  const CartanType& type() const noexcept { return type_; }
  int dim() const noexcept { return n_; }
  /// T, or the identity when none was given.
  const ComplexMatrix& conjugator() const noexcept { return t_; }

 private:
  CartanType type_;
  int n_;
  ComplexMatrix t_;
};

struct CartanCheckResult {
  bool is_cartan = false;
  std::optional<double> phi;  // in (-pi, pi]
  double residual = 0.0;
};

/// Decides whether X conj(X) (antiunitary) or X^2 (unitary) is a phase
/// times the identity. phi is the phase of the mean diagonal entry.
CartanCheckResult is_cartan_symmetry(const Symmetry& s, double tol = 1e-10);

/// theta(A) = X conj(A) X^dagger (antiunitary) or X A X^dagger (unitary).
ComplexMatrix induced_map(const Symmetry& s, const ComplexMatrix& a);

/// Same conjugation applied to an observable. For A in u(n),
/// induced_observable_map(s, iA) = -i induced_map(s, A) when s is
/// antiunitary and +i induced_map(s, A) when unitary.
ComplexMatrix induced_observable_map(const Symmetry& s, const ComplexMatrix& h);

/// Evaluates the involution from its closed form:
///   AI:   T conj(T)^dag conj(B) conj(T) T^dag
///   AII:  T J conj(T)^dag conj(B) conj(T) J^{-1} T^dag
///   AIII: T I_pq T^dag B T I_pq T^dag
/// The formula is also valid on group elements.
ComplexMatrix apply_involution(const CartanInvolution& inv, const ComplexMatrix& b);

/// X = T conj(T)^dag (AI), T J conj(T)^dag (AII), T I_pq T^dag (AIII).
Symmetry symmetry_from_involution(const CartanInvolution& inv);

/// Any real-linear map on n x n matrices. Used for involutions that are
/// only known through a symmetry.
using AlgebraMap = std::function<ComplexMatrix(const ComplexMatrix&)>;

AlgebraMap as_map(const CartanInvolution& inv);
AlgebraMap as_map(const Symmetry& s);

enum class Ambient { U, SU };

struct EigenspaceSplit {
  MatrixSubspace k;  // +1 eigenspace
  MatrixSubspace p;  // -1 eigenspace
};

/// +1/-1 eigenspaces of an involutive map over u(n) or su(n). Throws
/// NotInvolutive if theta^2 differs from the identity on a basis element by
/// more than tol.rank_tol.
EigenspaceSplit eigenspace_split(const AlgebraMap& theta, int n, Ambient ambient,
                                 const Tolerance& tol = {});

/// Classifies an involution of u(n) by the dimension of its +1 eigenspace.
/// Whether i*I is fixed or negated separates AIII from AI/AII, which the
/// dimension alone cannot do when n is a perfect square (dim K of AIII
/// equals n(n+1)/2 at p = (n + sqrt n)/2).
CartanType classify_involution(const AlgebraMap& theta, int n, const Tolerance& tol = {});

/// Same, reusing a split computed over u(n).
CartanType classify_split(const EigenspaceSplit& split, const AlgebraMap& theta, int n,
                          const Tolerance& tol = {});

struct InducedInvolution {
  Symmetry symmetry;
  AlgebraMap map;
  EigenspaceSplit split;  // over u(n)
  CartanType type;
  double phi = 0.0;
};

/// The involution a Cartan symmetry induces on u(n), with its split and
/// type. Throws NotCartan if the symmetry is not Cartan.
InducedInvolution involution_from_symmetry(const Symmetry& s, const Tolerance& tol = {});

/// Largest ||theta(theta(B)) - B|| over the u(n) basis.
double involutivity_defect(const AlgebraMap& theta, int n);

}  // namespace cartankit
