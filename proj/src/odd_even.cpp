#include "cartankit/odd_even.hpp"

#include <cmath>

#include "cartankit/errors.hpp"

namespace cartankit {

namespace {

const Complex kMinusI(0.0, -1.0);

struct LocalBases {
  MatrixSubspace sigma;
  MatrixSubspace s;
};

// Hermitian bases of i K_j and i P_j, both conjugated by T_j.
LocalBases local_bases(const SubsystemChoice& c, const Tolerance& tol) {
  const int n = c.dim;
  const bool aii = c.type == CartanFamily::AII;
  const MatrixSubspace k = canonical_basis(aii ? Algebra::SP : Algebra::SO, n);
  const MatrixSubspace p = canonical_basis(aii ? Algebra::SPPerp : Algebra::SOPerp, n);
  const ComplexMatrix t = c.t.value_or(identity(n));

  std::vector<ComplexMatrix> sigma;
  sigma.reserve(static_cast<std::size_t>(k.dimension()));
  for (const ComplexMatrix& b : k.basis()) sigma.push_back(kMinusI * (t * b * t.adjoint()));

  std::vector<ComplexMatrix> s{identity(n) / std::sqrt(static_cast<double>(n))};
  for (const ComplexMatrix& b : p.basis()) s.push_back(kMinusI * (t * b * t.adjoint()));

  LocalBases out{MatrixSubspace(n, Hermiticity::Hermitian, std::move(sigma), tol),
                 MatrixSubspace::span_of(n, Hermiticity::Hermitian, s, tol)};
  if (out.s.dimension() != p.dimension()) {
    throw Error("build_odd_even: S basis of subsystem has unexpected dimension");
  }
  return out;
}

std::string relation_name(const char* lhs, const char* rhs, const char* target,
                          BracketKind kind) {
  const std::string open = kind == BracketKind::Commutator ? "[" : "{";
  const std::string close = kind == BracketKind::Commutator ? "]" : "}";
  return open + lhs + "," + rhs + close + " in " + target;
}

}  // namespace

int sigma_count(const TensorWord& word) {
  int count = 0;
  for (const WordFactor& f : word) count += f.sigma ? 1 : 0;
  return count;
}

void validate_choices(std::span<const SubsystemChoice> choices, const Tolerance& tol) {
  if (choices.empty()) throw InvalidArgument("odd-even decomposition needs at least one subsystem");
  for (std::size_t j = 0; j < choices.size(); ++j) {
    const SubsystemChoice& c = choices[j];
    const std::string where = "subsystem " + std::to_string(j) + ": ";
    if (c.dim < 1) throw InvalidArgument(where + "dimension must be >= 1");
    if (c.type == CartanFamily::AIII) {
      throw InvalidArgument(where + "only AI and AII decompositions are admissible");
    }
    if (c.type == CartanFamily::AII && c.dim % 2 != 0) {
      throw InvalidArgument(where + "AII requires even dimension");
    }
    if (c.t) {
      if (c.t->rows() != c.dim || c.t->cols() != c.dim) {
        throw InvalidArgument(where + "T has the wrong size");
      }
      if (!is_unitary(*c.t, tol.atol)) throw InvalidArgument(where + "T is not unitary");
    }
  }
}

CartanFamily classify_odd_even(std::span<const SubsystemChoice> choices) {
  validate_choices(choices);
  int r = 0;
  for (const SubsystemChoice& c : choices) r += c.type == CartanFamily::AII ? 1 : 0;
  return r % 2 == 1 ? CartanFamily::AII : CartanFamily::AI;
}

std::int64_t expected_odd_dimension(CartanFamily type, std::int64_t n) {
  return type == CartanFamily::AII ? n * (n + 1) / 2 : n * (n - 1) / 2;
}

OddEvenDecomposition build_odd_even(std::span<const SubsystemChoice> choices,
                                    const Tolerance& tol) {
  validate_choices(choices, tol);
  OddEvenDecomposition d{
      .choices = {choices.begin(), choices.end()},
      .total_dim = 1,
      .sigma_bases = {},
      .s_bases = {},
      .odd = MatrixSubspace(1, Hermiticity::Hermitian),
      .even = MatrixSubspace(1, Hermiticity::Hermitian),
      .odd_words = {},
      .even_words = {},
      .r = 0,
      .predicted_type = classify_odd_even(choices),
  };
  std::vector<int> radix;
  for (const SubsystemChoice& c : choices) {
    LocalBases lb = local_bases(c, tol);
    radix.push_back(lb.sigma.dimension() + lb.s.dimension());
    d.sigma_bases.push_back(std::move(lb.sigma));
    d.s_bases.push_back(std::move(lb.s));
    d.total_dim *= c.dim;
    d.r += c.type == CartanFamily::AII ? 1 : 0;
  }

  const std::size_t sites = choices.size();
  std::int64_t words = 1;
  for (int r : radix) words *= r;

  std::vector<ComplexMatrix> odd, even;
  std::vector<ComplexMatrix> factors(sites);
  for (std::int64_t w = 0; w < words; ++w) {
    TensorWord word(sites);
    std::int64_t rest = w;
    for (std::size_t j = sites; j-- > 0;) {
      const int digit = static_cast<int>(rest % radix[j]);
      rest /= radix[j];
      const int sigma_dim = d.sigma_bases[j].dimension();
      const bool is_sigma = digit < sigma_dim;
      word[j] = {is_sigma, is_sigma ? digit : digit - sigma_dim};
      factors[j] = is_sigma ? d.sigma_bases[j][word[j].index] : d.s_bases[j][word[j].index];
    }
    if (sigma_count(word) % 2 == 1) {
      odd.push_back(kron(factors));
      d.odd_words.push_back(std::move(word));
    } else {
      even.push_back(kron(factors));
      d.even_words.push_back(std::move(word));
    }
  }

  d.odd = MatrixSubspace(d.total_dim, Hermiticity::Hermitian, std::move(odd), tol);
  d.even = MatrixSubspace(d.total_dim, Hermiticity::Hermitian, std::move(even), tol);
  return d;
}

TotalInvolution total_involution(const OddEvenDecomposition& d) {
  std::vector<ComplexMatrix> xs;
  xs.reserve(d.choices.size());
  for (const SubsystemChoice& c : d.choices) {
    const CartanInvolution inv(CartanType{c.type, 0, 0}, c.dim, c.t);
    xs.push_back(symmetry_from_involution(inv).x());
  }
  Symmetry total(SymmetryKind::Antiunitary, kron(xs));
  AlgebraMap map = as_map(total);
  return TotalInvolution{std::move(total), std::move(map)};
}

OddEvenReport verify_odd_even(const OddEvenDecomposition& d, const VerifyOptions& opts) {
  if (opts.mode == VerifyMode::Exhaustive && d.total_dim > opts.exhaustive_cap) {
    throw InvalidArgument("exhaustive verification is limited to n <= " +
                          std::to_string(opts.exhaustive_cap) + " (n = " +
                          std::to_string(d.total_dim) + "); use sampled mode");
  }
  const MatrixSubspace i_odd = d.odd.times_i();
  const MatrixSubspace i_even = d.even.times_i();

  OddEvenReport report;
  report.mode = opts.mode;
  if (opts.mode == VerifyMode::Sampled) report.seed = opts.seed;

  std::uint64_t stream = 0;
  auto run = [&](const char* lhs_name, const MatrixSubspace& lhs, const char* rhs_name,
                 const MatrixSubspace& rhs, const char* target_name,
                 const MatrixSubspace& target, BracketKind kind) {
    ClosureReport r =
        opts.mode == VerifyMode::Exhaustive
            ? closure_check(lhs, rhs, target, kind, opts.closure_tol)
            : closure_check_sampled(lhs, rhs, target, kind, opts.samples, opts.seed + stream,
                                    opts.closure_tol);
    ++stream;
    report.relations.push_back({relation_name(lhs_name, rhs_name, target_name, kind), r});
  };

  const auto comm = BracketKind::Commutator;
  const auto anti = BracketKind::Anticommutator;
  run("iIo", i_odd, "iIo", i_odd, "iIo", i_odd, comm);
  run("iIo", i_odd, "iIe", i_even, "iIe", i_even, comm);
  run("iIe", i_even, "iIe", i_even, "iIo", i_odd, comm);
  run("Io", d.odd, "Io", d.odd, "Ie", d.even, anti);
  run("Io", d.odd, "Ie", d.even, "Io", d.odd, anti);
  run("Ie", d.even, "Ie", d.even, "Ie", d.even, anti);

  const std::int64_t n = d.total_dim;
  report.dim_odd = d.odd.dimension();
  report.dim_even = d.even.dimension();
  report.expected_dim_odd = expected_odd_dimension(d.predicted_type, n);
  if (report.dim_odd == expected_odd_dimension(CartanFamily::AI, n)) {
    report.measured_type = CartanFamily::AI;
  } else if (report.dim_odd == expected_odd_dimension(CartanFamily::AII, n)) {
    report.measured_type = CartanFamily::AII;
  }
  report.dims_sum_ok = report.dim_odd + report.dim_even == n * n;
  report.dim_odd_ok = report.dim_odd == report.expected_dim_odd;

  report.passed = report.dims_sum_ok && report.dim_odd_ok;
  for (const NamedClosure& r : report.relations) report.passed = report.passed && r.report.passed;
  return report;
}

OddEvenDecomposition ccd(int n_qubits) {
  if (n_qubits < 1) throw InvalidArgument("ccd: need at least one qubit");
  const std::vector<SubsystemChoice> choices(static_cast<std::size_t>(n_qubits),
                                             SubsystemChoice{2, CartanFamily::AII, std::nullopt});
  return build_odd_even(choices);
}

}  // namespace cartankit
