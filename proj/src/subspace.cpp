#include "cartankit/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <omp.h>

#include "cartankit/errors.hpp"

namespace cartankit {

namespace {

const Complex kI(0.0, 1.0);

bool satisfies(const ComplexMatrix& m, Hermiticity flag, double atol) {
  return flag == Hermiticity::Hermitian ? is_hermitian(m, atol) : is_skew_hermitian(m, atol);
}

void require_ambient(const MatrixSubspace& s, const ComplexMatrix& m, const char* what) {
  if (m.rows() != s.ambient_dim() || m.cols() != s.ambient_dim()) {
    throw DimensionMismatch(std::string(what) + ": matrix is " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()) + ", subspace ambient dimension " +
                            std::to_string(s.ambient_dim()));
  }
}

ComplexMatrix unit(int n, int r, int c) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(r, c) = 1.0;
  return e;
}

// Real antisymmetric and imaginary symmetric generators for the pair (r, c).
ComplexMatrix pair_real(int n, int r, int c) {
  return (unit(n, r, c) - unit(n, c, r)) / std::sqrt(2.0);
}

ComplexMatrix pair_imag(int n, int r, int c) {
  return kI * (unit(n, r, c) + unit(n, c, r)) / std::sqrt(2.0);
}

std::vector<ComplexMatrix> u_generators(int n) {
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.push_back(kI * unit(n, k, k));
  for (int r = 0; r < n; ++r) {
    for (int c = r + 1; c < n; ++c) {
      out.push_back(pair_real(n, r, c));
      out.push_back(pair_imag(n, r, c));
    }
  }
  return out;
}

// Real coordinates of the flag part of a matrix. The flag part f is (v + v^dag)/2
// for Hermitian targets and (v - v^dag)/2 for skew-Hermitian ones; the map
// f -> coords is an isometry from the flag space onto R^{n^2}, and the norm
// of the discarded part is returned through `off_norm_sq`.
void flag_coordinates(const Eigen::Ref<const ComplexMatrix>& v, Hermiticity flag,
                      Eigen::Ref<Eigen::VectorXd> coords, double& off_norm_sq) {
  const Eigen::Index n = v.rows();
  const double sign = flag == Hermiticity::Hermitian ? 1.0 : -1.0;
  const double root2 = std::sqrt(2.0);
  double off = 0.0;
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const Complex d = v(r, r);
    // Hermitian part keeps Re, skew part keeps Im of the diagonal.
    coords(k++) = flag == Hermiticity::Hermitian ? d.real() : d.imag();
    off += flag == Hermiticity::Hermitian ? d.imag() * d.imag() : d.real() * d.real();
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = r + 1; c < n; ++c) {
      // f_rc = (v_rc + sign conj(v_cr)) / 2, the other half goes to the off part.
      const Complex f = 0.5 * (v(r, c) + sign * std::conj(v(c, r)));
      const Complex g = 0.5 * (v(r, c) - sign * std::conj(v(c, r)));
      const Complex h = flag == Hermiticity::Hermitian ? f : Complex(f.imag(), -f.real());
      coords(k++) = root2 * h.real();
      coords(k++) = root2 * h.imag();
      off += 2.0 * std::norm(g);
    }
  }
  off_norm_sq = off;
}

// Everything closure_check needs about the target, computed once: either the
// target's own coordinate basis or an orthonormal basis of its complement
// inside the flag space, whichever is smaller.
struct TargetProjector {
  Hermiticity flag;
  bool use_complement = false;
  Eigen::MatrixXd basis;  // n^2 x d (direct) or n^2 x (n^2 - d) (complement)

  explicit TargetProjector(const MatrixSubspace& target) : flag(target.hermiticity()) {
    const Eigen::Index n = target.ambient_dim();
    const Eigen::Index full = n * n;
    const Eigen::Index d = target.dimension();
    Eigen::MatrixXd coords(full, d);
    double unused = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      flag_coordinates(target[static_cast<int>(k)], flag, coords.col(k), unused);
    }
    // Direct projection costs two products of width d, the complement one of
    // width n^2 - d.
    use_complement = full - d < 2 * d;
    if (!use_complement) {
      basis = std::move(coords);
      return;
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(coords);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(full, full);
    basis = q.rightCols(full - d);
  }

  // Residual norms for the columns of `coords`, given the off-flag norms.
  Eigen::VectorXd residuals(const Eigen::MatrixXd& coords, const Eigen::VectorXd& off_sq) const {
    Eigen::VectorXd in_flag_sq;
    if (use_complement) {
      in_flag_sq = (basis.transpose() * coords).colwise().squaredNorm().transpose();
    } else {
      const Eigen::MatrixXd rest = coords - basis * (basis.transpose() * coords);
      in_flag_sq = rest.colwise().squaredNorm().transpose();
    }
    return (in_flag_sq + off_sq).cwiseSqrt();
  }
};

// S2 basis laid out side by side (n x n*d2) and stacked (n*d2 x n), so that
// S1[i] times every S2 element is one product each way.
struct StackedBasis {
  ComplexMatrix wide;
  ComplexMatrix tall;

  explicit StackedBasis(const MatrixSubspace& s) {
    const Eigen::Index n = s.ambient_dim();
    const Eigen::Index d = s.dimension();
    wide.resize(n, n * d);
    tall.resize(n * d, n);
    for (Eigen::Index k = 0; k < d; ++k) {
      wide.middleCols(k * n, n) = s[static_cast<int>(k)];
      tall.middleRows(k * n, n) = s[static_cast<int>(k)];
    }
  }
};

// Residuals of [S1[i], S2[j]] against the target for every j.
Eigen::VectorXd row_residuals(const ComplexMatrix& a, const StackedBasis& s2,
                              const TargetProjector& target, BracketKind kind) {
  const Eigen::Index n = a.rows();
  const Eigen::Index cols = n == 0 ? 0 : s2.wide.cols() / n;
  const ComplexMatrix left = a * s2.wide;   // A B_j, side by side
  const ComplexMatrix right = s2.tall * a;  // B_j A, stacked
  const double sign = kind == BracketKind::Commutator ? -1.0 : 1.0;
  Eigen::MatrixXd coords(n * n, cols);
  Eigen::VectorXd off_sq(cols);
  ComplexMatrix br(n, n);
  for (Eigen::Index j = 0; j < cols; ++j) {
    br = left.middleCols(j * n, n) + sign * right.middleRows(j * n, n);
    flag_coordinates(br, target.flag, coords.col(j), off_sq(j));
  }
  return target.residuals(coords, off_sq);
}

void check_compatible(const MatrixSubspace& s1, const MatrixSubspace& s2,
                      const MatrixSubspace& target) {
  if (s1.ambient_dim() != s2.ambient_dim() || s1.ambient_dim() != target.ambient_dim()) {
    throw DimensionMismatch("closure_check: subspaces have different ambient dimensions");
  }
}

// Residuals arrive in lexicographic pair order. Maxima that differ only by
// rounding count as ties, and the lowest pair among them is reported.
template <class PairAt>
void select_worst(ClosureReport& report, const std::vector<double>& residuals, PairAt pair_at) {
  if (residuals.empty()) return;
  const double max = *std::max_element(residuals.begin(), residuals.end());
  const double floor = max - 1e-12 * std::max(1.0, max);
  report.max_residual = max;
  for (std::size_t k = 0; k < residuals.size(); ++k) {
    if (residuals[k] >= floor) {
      report.worst_pair = pair_at(k);
      return;
    }
  }
}

}  // namespace

Eigen::VectorXcd vectorize(const ComplexMatrix& m) {
  Eigen::VectorXcd v(m.size());
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v(k++) = m(r, c);
  return v;
}

MatrixSubspace::MatrixSubspace(int ambient_dim, Hermiticity flag)
    : ambient_dim_(ambient_dim), flag_(flag) {
  if (ambient_dim < 1) throw InvalidArgument("MatrixSubspace: ambient dimension must be >= 1");
  rebuild_flat();
}

MatrixSubspace::MatrixSubspace(int ambient_dim, Hermiticity flag,
                               std::vector<ComplexMatrix> basis, const Tolerance& tol)
    : ambient_dim_(ambient_dim), flag_(flag), basis_(std::move(basis)) {
  if (ambient_dim < 1) throw InvalidArgument("MatrixSubspace: ambient dimension must be >= 1");
  if (basis_.size() > static_cast<std::size_t>(ambient_dim) * static_cast<std::size_t>(ambient_dim)) {
    throw InvalidArgument("MatrixSubspace: more basis elements than n^2");
  }
  for (const ComplexMatrix& b : basis_) {
    require_ambient(*this, b, "MatrixSubspace");
    if (!satisfies(b, flag_, tol.atol)) {
      throw InvalidArgument("MatrixSubspace: basis element violates the hermiticity flag");
    }
  }
  rebuild_flat();
  const Eigen::MatrixXd gram = (flat_.adjoint() * flat_).real();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
  if (gram.size() > 0 && (gram - eye).cwiseAbs().maxCoeff() > tol.rank_tol) {
    throw InvalidArgument("MatrixSubspace: basis is not orthonormal");
  }
}

MatrixSubspace MatrixSubspace::span_of(int ambient_dim, Hermiticity flag,
                                       std::span<const ComplexMatrix> generators,
                                       const Tolerance& tol) {
  return MatrixSubspace(ambient_dim, flag, gram_schmidt(generators, tol), tol);
}

void MatrixSubspace::rebuild_flat() {
  const Eigen::Index rows = static_cast<Eigen::Index>(ambient_dim_) * ambient_dim_;
  flat_.resize(rows, static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    flat_.col(static_cast<Eigen::Index>(k)) = vectorize(basis_[k]);
  }
}

MatrixSubspace MatrixSubspace::times_i() const {
  MatrixSubspace out(ambient_dim_,
                     flag_ == Hermiticity::Hermitian ? Hermiticity::SkewHermitian
                                                     : Hermiticity::Hermitian);
  out.basis_.reserve(basis_.size());
  for (const ComplexMatrix& b : basis_) out.basis_.push_back(kI * b);
  out.rebuild_flat();
  return out;
}

MatrixSubspace MatrixSubspace::direct_sum(const MatrixSubspace& other,
                                          const Tolerance& tol) const {
  if (other.ambient_dim_ != ambient_dim_ || other.flag_ != flag_) {
    throw DimensionMismatch("direct_sum: incompatible subspaces");
  }
  std::vector<ComplexMatrix> all = basis_;
  all.insert(all.end(), other.basis_.begin(), other.basis_.end());
  return span_of(ambient_dim_, flag_, all, tol);
}

MatrixSubspace canonical_basis(Algebra algebra, int n, int p, int q) {
  if (n < 1) throw InvalidArgument("canonical_basis: n must be >= 1");
  const bool symplectic = algebra == Algebra::SP || algebra == Algebra::SPPerp;
  if (symplectic && n % 2 != 0) {
    throw InvalidArgument("canonical_basis: " + to_string(algebra) + " requires even n");
  }
  const bool block = algebra == Algebra::AIIIK || algebra == Algebra::AIIIP;
  if (block && (p <= 0 || q <= 0 || p + q != n)) {
    throw InvalidArgument("canonical_basis: AIII requires p, q > 0 and p + q = n");
  }
  const auto skew = Hermiticity::SkewHermitian;
  std::vector<ComplexMatrix> gens;

  switch (algebra) {
    case Algebra::U:
      return MatrixSubspace(n, skew, u_generators(n));
    case Algebra::SU: {
      // Generalized Gell-Mann diagonals, then the off-diagonal pairs.
      for (int k = 1; k < n; ++k) {
        ComplexMatrix d = ComplexMatrix::Zero(n, n);
        for (int m = 0; m < k; ++m) d(m, m) = 1.0;
        d(k, k) = -static_cast<double>(k);
        gens.push_back(kI * d / std::sqrt(static_cast<double>(k) * (k + 1)));
      }
      for (int r = 0; r < n; ++r) {
        for (int c = r + 1; c < n; ++c) {
          gens.push_back(pair_real(n, r, c));
          gens.push_back(pair_imag(n, r, c));
        }
      }
      return MatrixSubspace(n, skew, std::move(gens));
    }
    case Algebra::SO:
      for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c) gens.push_back(pair_real(n, r, c));
      return MatrixSubspace(n, skew, std::move(gens));
    case Algebra::SOPerp:
      for (int k = 0; k < n; ++k) gens.push_back(kI * unit(n, k, k));
      for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c) gens.push_back(pair_imag(n, r, c));
      return MatrixSubspace(n, skew, std::move(gens));
    case Algebra::SP:
    case Algebra::SPPerp: {
      // sp(n/2) is the +1 eigenspace of A -> J conj(A) J^{-1} on u(n).
      const ComplexMatrix j = symplectic_j(n);
      const ComplexMatrix j_inv = j.adjoint();
      const double sign = algebra == Algebra::SP ? 1.0 : -1.0;
      for (const ComplexMatrix& b : u_generators(n)) {
        ComplexMatrix g = 0.5 * (b + sign * (j * b.conjugate() * j_inv));
        gens.push_back(std::move(g));
      }
      return MatrixSubspace::span_of(n, skew, gens);
    }
    case Algebra::AIIIK:
      for (int k = 0; k < n; ++k) gens.push_back(kI * unit(n, k, k));
      for (int r = 0; r < n; ++r) {
        for (int c = r + 1; c < n; ++c) {
          if ((r < p) != (c < p)) continue;
          gens.push_back(pair_real(n, r, c));
          gens.push_back(pair_imag(n, r, c));
        }
      }
      return MatrixSubspace(n, skew, std::move(gens));
    case Algebra::AIIIP:
      for (int r = 0; r < p; ++r) {
        for (int c = p; c < n; ++c) {
          gens.push_back(pair_real(n, r, c));
          gens.push_back(pair_imag(n, r, c));
        }
      }
      return MatrixSubspace(n, skew, std::move(gens));
  }
  throw InvalidArgument("canonical_basis: unknown algebra");
}

std::string to_string(Algebra algebra) {
  switch (algebra) {
    case Algebra::U: return "u";
    case Algebra::SU: return "su";
    case Algebra::SO: return "so";
    case Algebra::SP: return "sp";
    case Algebra::SOPerp: return "so_perp";
    case Algebra::SPPerp: return "sp_perp";
    case Algebra::AIIIK: return "aiii_k";
    case Algebra::AIIIP: return "aiii_p";
  }
  return "?";
}

std::string to_string(BracketKind kind) {
  return kind == BracketKind::Commutator ? "commutator" : "anticommutator";
}

Projection project(const MatrixSubspace& s, const ComplexMatrix& m) {
  require_ambient(s, m, "project");
  Projection out;
  out.component = ComplexMatrix::Zero(m.rows(), m.cols());
  for (const ComplexMatrix& b : s.basis()) out.component += hs_inner(m, b).real() * b;
  out.residual_norm = hs_norm(m - out.component);
  return out;
}

bool contains(const MatrixSubspace& s, const ComplexMatrix& m, double tol) {
  return project(s, m).residual_norm <= tol * std::max(1.0, hs_norm(m));
}

ComplexMatrix bracket(BracketKind kind, const ComplexMatrix& a, const ComplexMatrix& b) {
  return kind == BracketKind::Commutator ? commutator(a, b) : anticommutator(a, b);
}

ClosureReport closure_check(const MatrixSubspace& s1, const MatrixSubspace& s2,
                            const MatrixSubspace& target, BracketKind kind,
                            double closure_tol) {
  check_compatible(s1, s2, target);
  const int rows = s1.dimension();
  const TargetProjector projector(target);
  const StackedBasis stacked(s2);
  const int cols = s2.dimension();
  std::vector<double> residuals(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < rows; ++i) {
    const Eigen::VectorXd res = row_residuals(s1[i], stacked, projector, kind);
    std::copy(res.data(), res.data() + cols,
              residuals.begin() + static_cast<std::ptrdiff_t>(i) * cols);
  }

  ClosureReport report;
  report.bracket_kind = kind;
  report.tolerance = closure_tol;
  report.pairs_checked = static_cast<std::int64_t>(residuals.size());
  select_worst(report, residuals, [cols](std::size_t k) {
    return std::pair<int, int>(static_cast<int>(k) / cols, static_cast<int>(k) % cols);
  });
  report.passed = report.max_residual <= closure_tol;
  return report;
}

ClosureReport closure_check_reference(const MatrixSubspace& s1, const MatrixSubspace& s2,
                                      const MatrixSubspace& target, BracketKind kind,
                                      double closure_tol) {
  check_compatible(s1, s2, target);
  ClosureReport report;
  report.bracket_kind = kind;
  report.tolerance = closure_tol;
  const int cols = s2.dimension();
  std::vector<double> residuals;
  for (int i = 0; i < s1.dimension(); ++i) {
    for (int j = 0; j < cols; ++j) {
      residuals.push_back(project(target, bracket(kind, s1[i], s2[j])).residual_norm);
    }
  }
  report.pairs_checked = static_cast<std::int64_t>(residuals.size());
  select_worst(report, residuals, [cols](std::size_t k) {
    return std::pair<int, int>(static_cast<int>(k) / cols, static_cast<int>(k) % cols);
  });
  report.passed = report.max_residual <= closure_tol;
  return report;
}

ClosureReport closure_check_sampled(const MatrixSubspace& s1, const MatrixSubspace& s2,
                                    const MatrixSubspace& target, BracketKind kind,
                                    std::int64_t samples, std::uint64_t seed,
                                    double closure_tol) {
  check_compatible(s1, s2, target);
  ClosureReport report;
  report.bracket_kind = kind;
  report.tolerance = closure_tol;
  if (s1.dimension() == 0 || s2.dimension() == 0) return report;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick1(0, s1.dimension() - 1);
  std::uniform_int_distribution<int> pick2(0, s2.dimension() - 1);
  std::vector<std::pair<int, int>> pairs(static_cast<std::size_t>(samples));
  for (auto& pr : pairs) pr = {pick1(rng), pick2(rng)};
  std::sort(pairs.begin(), pairs.end());

  std::vector<double> residuals(pairs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < samples; ++k) {
    const auto [i, j] = pairs[static_cast<std::size_t>(k)];
    residuals[static_cast<std::size_t>(k)] =
        project(target, bracket(kind, s1[i], s2[j])).residual_norm;
  }
  select_worst(report, residuals, [&pairs](std::size_t k) { return pairs[k]; });
  report.pairs_checked = samples;
  report.passed = report.max_residual <= closure_tol;
  return report;
}

ComplexMatrix tensor_bracket_expand(const ComplexMatrix& a, const ComplexMatrix& b,
                                    const ComplexMatrix& c, const ComplexMatrix& d,
                                    BracketKind kind) {
  if (a.rows() != c.rows() || a.cols() != c.cols() || b.rows() != d.rows() ||
      b.cols() != d.cols()) {
    throw DimensionMismatch("tensor_bracket_expand: A,C and B,D must match in dimension");
  }
  const ComplexMatrix ac_comm = commutator(a, c);
  const ComplexMatrix ac_anti = anticommutator(a, c);
  const ComplexMatrix bd_comm = commutator(b, d);
  const ComplexMatrix bd_anti = anticommutator(b, d);
  if (kind == BracketKind::Commutator) {
    return 0.5 * (kron(ac_comm, bd_anti) + kron(ac_anti, bd_comm));
  }
  return 0.5 * (kron(ac_comm, bd_comm) + kron(ac_anti, bd_anti));
}

}  // namespace cartankit
