#include "cartankit/factorize.hpp"

#include <cmath>
#include <string>

#include "cartankit/errors.hpp"

namespace cartankit {

namespace {

const Complex kI(0.0, 1.0);

void require_unitary(const ComplexMatrix& u, const Tolerance& tol, const char* what) {
  if (!is_square(u)) throw DimensionMismatch(std::string(what) + ": matrix must be square");
  if (!is_unitary(u, 10.0 * tol.atol)) throw InvalidArgument(std::string(what) + ": input is not unitary");
}

KPResult kp_with_map(const ComplexMatrix& u, const AlgebraMap& theta, const FactorOptions& opts) {
  require_unitary(u, opts.log.tol, "kp_decompose");
  const ComplexMatrix m = theta(u).adjoint() * u;

  KPResult out;
  out.log_p = 0.5 * principal_log_unitary(m, opts.log);
  out.p = exp_skew(out.log_p, opts.log.tol);
  out.k = u * out.p.adjoint();
  out.log_k = principal_log_unitary(out.k, opts.log);
  out.residual = hs_norm(out.k * out.p - u);
  out.membership_residual_k = hs_norm(theta(out.log_k) - out.log_k);
  out.membership_residual_p = hs_norm(theta(out.log_p) + out.log_p);
  if (out.membership_residual_k > opts.membership_tol ||
      out.membership_residual_p > opts.membership_tol) {
    throw MembershipFailure("kp_decompose: generator outside its eigenspace (K: " +
                            std::to_string(out.membership_residual_k) + ", P: " +
                            std::to_string(out.membership_residual_p) + ")");
  }
  return out;
}

// Antiunitary symmetries: U = K P with K antisymmetric, so U_a = K, U_s = P.
// Unitary symmetries: K is the symmetric factor, so the split is read from
// U^dag = K P, giving U = P^dag K^dag with U_a = P^dag and U_s = K^dag.
PropagatorSplit propagator_from_kp(KPResult kp, bool unitary_kind) {
  PropagatorSplit out;
  if (unitary_kind) {
    out.u_a = kp.p.adjoint();
    out.u_s = kp.k.adjoint();
    out.h_a = kI * kp.log_p;
    out.h_s = kI * kp.log_k;
  } else {
    out.u_a = kp.k;
    out.u_s = kp.p;
    out.h_a = -kI * kp.log_k;
    out.h_s = -kI * kp.log_p;
  }
  out.kp = std::move(kp);
  return out;
}

// Orthonormal real basis of span(candidates) with exactly `rank` vectors,
// choosing the candidate with the largest remaining norm at each step.
Eigen::MatrixXd real_basis(std::vector<Eigen::VectorXd> candidates, int rank) {
  const Eigen::Index n = candidates.front().size();
  Eigen::MatrixXd out(n, rank);
  for (int step = 0; step < rank; ++step) {
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const double norm = candidates[c].norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = c;
      }
    }
    if (best_norm < 1e-4) {
      throw RealizationFailure("kak_decompose_ai: eigenspace has no real basis of full rank");
    }
    Eigen::VectorXd v = candidates[best] / best_norm;
    for (int pass = 0; pass < 2; ++pass)
      for (int prev = 0; prev < step; ++prev) v -= out.col(prev).dot(v) * out.col(prev);
    v.normalize();
    out.col(step) = v;
    for (Eigen::VectorXd& c : candidates) c -= v.dot(c) * v;
  }
  for (const Eigen::VectorXd& c : candidates) {
    if (c.norm() > 1e-6) {
      throw RealizationFailure("kak_decompose_ai: real and imaginary parts span more than the eigenspace");
    }
  }
  return out;
}

}  // namespace

KPResult kp_decompose(const ComplexMatrix& u, const CartanInvolution& inv,
                      const FactorOptions& opts) {
  if (u.rows() != inv.dim()) throw DimensionMismatch("kp_decompose: dimension mismatch");
  return kp_with_map(u, as_map(inv), opts);
}

KPResult kp_decompose(const ComplexMatrix& u, const Symmetry& s, const FactorOptions& opts) {
  if (u.rows() != s.dim()) throw DimensionMismatch("kp_decompose: dimension mismatch");
  if (!is_cartan_symmetry(s).is_cartan) throw NotCartan("kp_decompose: symmetry is not Cartan");
  return kp_with_map(u, as_map(s), opts);
}

KAKResult kak_decompose_ai(const ComplexMatrix& u, const FactorOptions& opts) {
  require_unitary(u, opts.log.tol, "kak_decompose_ai");
  const Eigen::Index n = u.rows();
  const ComplexMatrix m = u * u.transpose();
  const SpectralDecomposition spec = spectral_normal(m, opts.log.tol);

  // The eigenspaces of a symmetric unitary are closed under conjugation, so
  // the real and imaginary parts of each cluster's eigenvectors span it.
  Eigen::MatrixXd q(n, n);
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && std::abs(spec.eigenvalues[static_cast<std::size_t>(end)] -
                               spec.eigenvalues[static_cast<std::size_t>(end - 1)]) <=
                          opts.cluster_tol) {
      ++end;
    }
    std::vector<Eigen::VectorXd> candidates;
    for (Eigen::Index c = start; c < end; ++c) {
      candidates.push_back(spec.eigenvectors.col(c).real());
      candidates.push_back(spec.eigenvectors.col(c).imag());
    }
    q.middleCols(start, end - start) = real_basis(std::move(candidates), static_cast<int>(end - start));
    start = end;
  }
  if (q.determinant() < 0.0) q.col(n - 1) *= -1.0;

  const ComplexMatrix k1 = q.cast<Complex>();
  const ComplexMatrix d2 = k1.transpose() * m * k1;
  const double off = max_abs(d2 - ComplexMatrix(d2.diagonal().asDiagonal()));
  if (off > opts.realness_tol) {
    throw RealizationFailure("kak_decompose_ai: real eigenbasis does not diagonalize U U^T (" +
                             std::to_string(off) + ")");
  }
  Eigen::VectorXcd diag = d2.diagonal();
  for (Eigen::Index k = 0; k < n; ++k) diag(k) /= std::abs(diag(k));
  ComplexMatrix a = sqrt_unitary(ComplexMatrix(diag.asDiagonal()), opts.log);
  a = ComplexMatrix(a.diagonal().asDiagonal());

  ComplexMatrix k2 = a.adjoint() * k1.transpose() * u;
  if (!is_real(k2, opts.realness_tol)) {
    throw RealizationFailure("kak_decompose_ai: K2 is not real within tolerance");
  }
  k2 = k2.real().cast<Complex>();
  if (k2.real().determinant() < 0.0) {
    // Move the sign into the torus factor so both orthogonal factors are in SO(n).
    k2.row(0) *= -1.0;
    a(0, 0) *= -1.0;
  }

  KAKResult out{k1, a, k2, 0.0};
  out.residual = hs_norm(out.k1 * out.a * out.k2 - u);
  return out;
}

HamiltonianSplit split_hamiltonian(const ComplexMatrix& h, const Symmetry& s, double tol) {
  if (!is_cartan_symmetry(s, tol).is_cartan) {
    throw NotCartan("split_hamiltonian: symmetry is not Cartan");
  }
  const ComplexMatrix image = induced_observable_map(s, h);
  return {0.5 * (h - image), 0.5 * (h + image)};
}

PropagatorSplit split_propagator(const ComplexMatrix& u, const CartanInvolution& inv,
                                 const FactorOptions& opts) {
  const bool unitary_kind = inv.type().family == CartanFamily::AIII;
  return propagator_from_kp(kp_decompose(unitary_kind ? ComplexMatrix(u.adjoint()) : u, inv, opts),
                            unitary_kind);
}

PropagatorSplit split_propagator(const ComplexMatrix& u, const Symmetry& s,
                                 const FactorOptions& opts) {
  const bool unitary_kind = s.kind() == SymmetryKind::Unitary;
  return propagator_from_kp(kp_decompose(unitary_kind ? ComplexMatrix(u.adjoint()) : u, s, opts),
                            unitary_kind);
}

}  // namespace cartankit
