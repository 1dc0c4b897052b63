#include "cartankit/symmetry.hpp"

#include <cmath>
#include <numbers>

#include "cartankit/errors.hpp"

namespace cartankit {

namespace {

const Complex kI(0.0, 1.0);

void require_dim(int n, const ComplexMatrix& m, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(n) + "x" +
                            std::to_string(n) + ", got " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  }
}

}  // namespace

std::string to_string(SymmetryKind kind) {
  return kind == SymmetryKind::Unitary ? "unitary" : "antiunitary";
}

Symmetry::Symmetry(SymmetryKind kind, ComplexMatrix x, const Tolerance& tol)
    : kind_(kind), x_(std::move(x)) {
  if (!is_square(x_)) throw DimensionMismatch("Symmetry: X must be square and non-empty");
  if (!is_unitary(x_, tol.atol)) throw InvalidArgument("Symmetry: X is not unitary");
}

Eigen::VectorXcd Symmetry::act(const Eigen::VectorXcd& v) const {
  if (v.size() != x_.rows()) throw DimensionMismatch("Symmetry::act: vector size mismatch");
  return antiunitary() ? Eigen::VectorXcd(x_ * v.conjugate()) : Eigen::VectorXcd(x_ * v);
}

std::string family_name(CartanFamily family) {
  switch (family) {
    case CartanFamily::AI: return "AI";
    case CartanFamily::AII: return "AII";
    case CartanFamily::AIII: return "AIII";
  }
  return "?";
}

std::string to_string(const CartanType& type) {
  if (type.family == CartanFamily::AIII) {
    return "AIII(" + std::to_string(type.p) + "," + std::to_string(type.q) + ")";
  }
  return family_name(type.family);
}

CartanInvolution::CartanInvolution(CartanType type, int n, std::optional<ComplexMatrix> t,
                                   const Tolerance& tol)
    : type_(type), n_(n) {
  if (n < 1) throw InvalidArgument("CartanInvolution: n must be >= 1");
  if (type.family == CartanFamily::AII && n % 2 != 0) {
    throw InvalidArgument("AII requires even dimension");
  }
  if (type.family == CartanFamily::AIII && (type.p <= 0 || type.q <= 0 || type.p + type.q != n)) {
    throw InvalidArgument("AIII requires p, q > 0 and p + q = n");
  }
  if (t) {
    require_dim(n, *t, "CartanInvolution");
    if (!is_unitary(*t, tol.atol)) throw InvalidArgument("CartanInvolution: T is not unitary");
    t_ = std::move(*t);
  } else {
    t_ = identity(n);
  }
}

CartanCheckResult is_cartan_symmetry(const Symmetry& s, double tol) {
  const ComplexMatrix& x = s.x();
  const ComplexMatrix square = s.antiunitary() ? ComplexMatrix(x * x.conjugate())
                                               : ComplexMatrix(x * x);
  const Complex mean = square.diagonal().mean();
  CartanCheckResult out;
  double phi = std::arg(mean);
  if (phi <= -std::numbers::pi + 1e-12) phi = std::numbers::pi;
  const Complex phase = std::polar(1.0, phi);
  out.residual = hs_norm(square - phase * identity(s.dim()));
  out.is_cartan = out.residual <= tol;
  if (out.is_cartan) out.phi = phi;
  return out;
}

ComplexMatrix induced_map(const Symmetry& s, const ComplexMatrix& a) {
  require_dim(s.dim(), a, "induced_map");
  const ComplexMatrix& x = s.x();
  return s.antiunitary() ? ComplexMatrix(x * a.conjugate() * x.adjoint())
                         : ComplexMatrix(x * a * x.adjoint());
}

ComplexMatrix induced_observable_map(const Symmetry& s, const ComplexMatrix& h) {
  require_dim(s.dim(), h, "induced_observable_map");
  const ComplexMatrix& x = s.x();
  return s.antiunitary() ? ComplexMatrix(x * h.conjugate() * x.adjoint())
                         : ComplexMatrix(x * h * x.adjoint());
}

ComplexMatrix apply_involution(const CartanInvolution& inv, const ComplexMatrix& b) {
  require_dim(inv.dim(), b, "apply_involution");
  const ComplexMatrix& t = inv.conjugator();
  const ComplexMatrix tc = t.conjugate();
  switch (inv.type().family) {
    case CartanFamily::AI:
      return t * tc.adjoint() * b.conjugate() * tc * t.adjoint();
    case CartanFamily::AII: {
      const ComplexMatrix j = symplectic_j(inv.dim());
      return t * j * tc.adjoint() * b.conjugate() * tc * j.adjoint() * t.adjoint();
    }
    case CartanFamily::AIII: {
      const ComplexMatrix ipq = indefinite_pq(inv.type().p, inv.type().q);
      return t * ipq * t.adjoint() * b * t * ipq * t.adjoint();
    }
  }
  throw InvalidArgument("apply_involution: unknown type");
}

Symmetry symmetry_from_involution(const CartanInvolution& inv) {
  const ComplexMatrix& t = inv.conjugator();
  // X is a product of unitaries, so the default check cannot fail on a
  // valid involution.
  switch (inv.type().family) {
    case CartanFamily::AI:
      return Symmetry(SymmetryKind::Antiunitary, t * t.conjugate().adjoint());
    case CartanFamily::AII:
      return Symmetry(SymmetryKind::Antiunitary,
                      t * symplectic_j(inv.dim()) * t.conjugate().adjoint());
    case CartanFamily::AIII:
      return Symmetry(SymmetryKind::Unitary,
                      t * indefinite_pq(inv.type().p, inv.type().q) * t.adjoint());
  }
  throw InvalidArgument("symmetry_from_involution: unknown type");
}

AlgebraMap as_map(const CartanInvolution& inv) {
  return [inv](const ComplexMatrix& b) { return apply_involution(inv, b); };
}

AlgebraMap as_map(const Symmetry& s) {
  return [s](const ComplexMatrix& a) { return induced_map(s, a); };
}

double involutivity_defect(const AlgebraMap& theta, int n) {
  double worst = 0.0;
  const MatrixSubspace u = canonical_basis(Algebra::U, n);
  for (const ComplexMatrix& b : u.basis()) {
    worst = std::max(worst, hs_norm(theta(theta(b)) - b));
  }
  return worst;
}

EigenspaceSplit eigenspace_split(const AlgebraMap& theta, int n, Ambient ambient,
                                 const Tolerance& tol) {
  const MatrixSubspace space = canonical_basis(ambient == Ambient::U ? Algebra::U : Algebra::SU, n);
  const int dim = space.dimension();
  // Matrix of theta in the orthonormal basis. An involutive isometry gives a
  // symmetric orthogonal matrix, whose eigenvectors are well conditioned even
  // when the eigenspaces sit at awkward angles to the basis.
  Eigen::MatrixXd m(dim, dim);
  for (int l = 0; l < dim; ++l) {
    const ComplexMatrix image = theta(space[l]);
    require_dim(n, image, "eigenspace_split");
    const double defect = hs_norm(theta(image) - space[l]);
    if (defect > tol.rank_tol) {
      throw NotInvolutive("eigenspace_split: theta^2 differs from the identity by " +
                          std::to_string(defect));
    }
    const Projection pr = project(space, image);
    if (pr.residual_norm > tol.rank_tol) {
      throw NotInvolutive("eigenspace_split: theta does not preserve the ambient algebra");
    }
    for (int k = 0; k < dim; ++k) m(k, l) = hs_inner(image, space[k]).real();
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol.rank_tol) {
    throw NotInvolutive("eigenspace_split: theta is not an isometry");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));

  std::vector<ComplexMatrix> plus, minus;
  for (int j = 0; j < dim; ++j) {
    const double lambda = es.eigenvalues()(j);
    if (std::abs(std::abs(lambda) - 1.0) > tol.rank_tol) {
      throw NotInvolutive("eigenspace_split: eigenvalue " + std::to_string(lambda) +
                          " is not +-1");
    }
    ComplexMatrix b = ComplexMatrix::Zero(n, n);
    for (int k = 0; k < dim; ++k) b += es.eigenvectors()(k, j) * space[k];
    (lambda > 0 ? plus : minus).push_back(std::move(b));
  }
  return EigenspaceSplit{MatrixSubspace(n, Hermiticity::SkewHermitian, std::move(plus), tol),
                         MatrixSubspace(n, Hermiticity::SkewHermitian, std::move(minus), tol)};
}

CartanType classify_split(const EigenspaceSplit& split, const AlgebraMap& theta, int n,
                          const Tolerance& tol) {
  const int dim_k = split.k.dimension();
  const ComplexMatrix scalar = kI * identity(n);
  const ComplexMatrix image = theta(scalar);
  if (hs_norm(image + scalar) <= tol.rank_tol) {
    if (dim_k == n * (n - 1) / 2) return CartanType::ai();
    if (n % 2 == 0 && dim_k == n * (n + 1) / 2) return CartanType::aii();
  } else if (hs_norm(image - scalar) <= tol.rank_tol) {
    for (int q = 1; 2 * q <= n; ++q) {
      const int p = n - q;
      if (p * p + q * q == dim_k) return CartanType::aiii(p, q);
    }
  }
  throw UnclassifiableInvolution("classify_involution: dim K = " + std::to_string(dim_k) +
                                 " at n = " + std::to_string(n) + " matches no Cartan type");
}

CartanType classify_involution(const AlgebraMap& theta, int n, const Tolerance& tol) {
  return classify_split(eigenspace_split(theta, n, Ambient::U, tol), theta, n, tol);
}

InducedInvolution involution_from_symmetry(const Symmetry& s, const Tolerance& tol) {
  const CartanCheckResult check = is_cartan_symmetry(s, std::max(tol.atol, 1e-10));
  if (!check.is_cartan) {
    throw NotCartan("symmetry is not Cartan: ||X conj(X) - e^{i phi} I|| = " +
                    std::to_string(check.residual) + "; the induced map is not involutive");
  }
  AlgebraMap map = as_map(s);
  EigenspaceSplit split = eigenspace_split(map, s.dim(), Ambient::U, tol);
  CartanType type = classify_split(split, map, s.dim(), tol);
  return InducedInvolution{s, std::move(map), std::move(split), type, *check.phi};
}

}  // namespace cartankit
