#pragma once

#include <utility>

#include "cartankit/matrix.hpp"
#include "cartankit/symmetry.hpp"

namespace cartankit {

struct FactorOptions {
  LogOptions log{};
  /// Bound on ||theta(log K) - log K|| and ||theta(log P) + log P||.
  double membership_tol = 1e-9;
  /// Eigenvalues of U U^T closer than this are treated as one cluster.
  double cluster_tol = 1e-8;
  /// Bound on the imaginary part of the KAK orthogonal factors.
  double realness_tol = 1e-8;
};

struct KPResult {
  ComplexMatrix k;
  ComplexMatrix p;
  ComplexMatrix log_k;
  ComplexMatrix log_p;
  double residual = 0.0;             // ||K P - U||
  double membership_residual_k = 0.0;  // ||theta(log K) - log K||
  double membership_residual_p = 0.0;  // ||theta(log P) + log P||
};

/// U = K P with log K in the +1 and log P in the -1 eigenspace of the
/// involution. P is the principal square root of Theta_G(U)^{-1} U, where
/// Theta_G is the involution lifted to the group. Throws BranchCut if that
/// matrix (or K) has an eigenvalue near -1, MembershipFailure if a generator
/// lands outside its eigenspace.
KPResult kp_decompose(const ComplexMatrix& u, const CartanInvolution& inv,
                      const FactorOptions& opts = {});

/// Same, for an involution known only through its Cartan symmetry.
KPResult kp_decompose(const ComplexMatrix& u, const Symmetry& s, const FactorOptions& opts = {});

struct KAKResult {
  ComplexMatrix k1;  // real orthogonal, det +1
  ComplexMatrix a;   // diagonal unitary
  ComplexMatrix k2;  // real orthogonal, det +1
  double residual = 0.0;
};

/// U = K1 A K2 for the canonical AI involution. K1 diagonalizes U U^T by a
/// real orthogonal matrix and A is the principal square root of the
/// resulting diagonal.
KAKResult kak_decompose_ai(const ComplexMatrix& u, const FactorOptions& opts = {});

struct HamiltonianSplit {
  ComplexMatrix antisymmetric;  // H_a, theta_bar(H_a) = -H_a
  ComplexMatrix symmetric;      // H_s, theta_bar(H_s) = H_s
};

/// H_s = (H + theta_bar(H)) / 2 and H_a = (H - theta_bar(H)) / 2. Throws
/// NotCartan when s is not a Cartan symmetry.
HamiltonianSplit split_hamiltonian(const ComplexMatrix& h, const Symmetry& s,
                                   double tol = 1e-10);

struct PropagatorSplit {
  ComplexMatrix u_a;
  ComplexMatrix u_s;
  ComplexMatrix h_a;
  ComplexMatrix h_s;
  KPResult kp;  // of U for antiunitary symmetries, of U^dag for unitary ones
};

/// U = exp(i H_a) exp(i H_s). For AI/AII the antisymmetric factor is K; for
/// AIII (unitary symmetry) the roles swap, and U_s = K^dag, U_a = P^dag come
/// from the K P factorization of U^dag.
PropagatorSplit split_propagator(const ComplexMatrix& u, const CartanInvolution& inv,
                                 const FactorOptions& opts = {});
PropagatorSplit split_propagator(const ComplexMatrix& u, const Symmetry& s,
                                 const FactorOptions& opts = {});

}  // namespace cartankit
