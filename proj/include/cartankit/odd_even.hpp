#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cartankit/matrix.hpp"
#include "cartankit/subspace.hpp"
#include "cartankit/symmetry.hpp"

namespace cartankit {

/// Local Cartan decomposition chosen on one subsystem. Only AI and AII are
/// admissible.
struct SubsystemChoice {
  int dim = 2;
  CartanFamily type = CartanFamily::AII;
  std::optional<ComplexMatrix> t;
};

/// Throws InvalidArgument naming the first offending choice.
void validate_choices(std::span<const SubsystemChoice> choices, const Tolerance& tol = {});

/// One tensor factor of a basis word: local basis index and whether it comes
/// from the sigma (i K_j) or S (i P_j) basis.
struct WordFactor {
  bool sigma = false;
  int index = 0;
};

using TensorWord = std::vector<WordFactor>;

int sigma_count(const TensorWord& word);

struct OddEvenDecomposition {
  std::vector<SubsystemChoice> choices;
  int total_dim = 1;
  std::vector<MatrixSubspace> sigma_bases;  // Hermitian bases of i K_j
  std::vector<MatrixSubspace> s_bases;      // Hermitian bases of i P_j, first element I/sqrt(n_j)
  MatrixSubspace odd;                       // I_o, odd number of sigma factors
  MatrixSubspace even;                      // I_e
  std::vector<TensorWord> odd_words;
  std::vector<TensorWord> even_words;
  int r = 0;  // number of AII subsystems
  CartanFamily predicted_type = CartanFamily::AI;
};

/// Assembles I_o and I_e from every mixed tensor word. Words are enumerated
/// by a mixed-radix counter, last subsystem fastest, local sigma indices
/// before S indices.
OddEvenDecomposition build_odd_even(std::span<const SubsystemChoice> choices,
                                    const Tolerance& tol = {});

/// AII when the number of AII choices is odd, AI otherwise.
CartanFamily classify_odd_even(std::span<const SubsystemChoice> choices);

/// n(n-1)/2 for AI, n(n+1)/2 for AII.
std::int64_t expected_odd_dimension(CartanFamily type, std::int64_t n);

struct TotalInvolution {
  Symmetry symmetry;  // (X_1 (x) ... (x) X_N) K
  AlgebraMap map;     // its induced map on u(n)
};

TotalInvolution total_involution(const OddEvenDecomposition& d);

enum class VerifyMode { Exhaustive, Sampled };

struct VerifyOptions {
  VerifyMode mode = VerifyMode::Exhaustive;
  int exhaustive_cap = 16;
  std::int64_t samples = 2000;
  std::uint64_t seed = 0x5eed;
  double closure_tol = kDefaultClosureTol;
};

struct NamedClosure {
  std::string relation;  // e.g. "[iIo,iIo] in iIo"
  ClosureReport report;
};

struct OddEvenReport {
  std::vector<NamedClosure> relations;  // three commutator, three anticommutator
  std::int64_t dim_odd = 0;
  std::int64_t dim_even = 0;
  std::int64_t expected_dim_odd = 0;
  /// AI or AII when dim I_o equals n(n-1)/2 or n(n+1)/2, empty otherwise.
  std::optional<CartanFamily> measured_type;
  bool dims_sum_ok = false;
  bool dim_odd_ok = false;
  VerifyMode mode = VerifyMode::Exhaustive;
  std::optional<std::uint64_t> seed;  // recorded in sampled mode
  bool passed = false;
};

/// Runs the six closure relations and the two dimension checks. Exhaustive
/// mode refuses n > exhaustive_cap with InvalidArgument.
OddEvenReport verify_odd_even(const OddEvenDecomposition& d, const VerifyOptions& opts = {});

/// Concurrence canonical decomposition: N qubits, all AII.
OddEvenDecomposition ccd(int n_qubits);

}  // namespace cartankit
