#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cartankit/matrix.hpp"
#include "cartankit/symmetry.hpp"

namespace cartankit {

/// Spin quantum number j, stored as the integer 2j.
class Spin {
 public:
  /// Throws InvalidArgument if twice_j < 0.
  explicit Spin(int twice_j);

  /// Parses "1/2", "3/2", "1", "0".
  static Spin parse(std::string_view text);

  int twice() const noexcept { return twice_j_; }
  double value() const noexcept { return 0.5 * twice_j_; }
  /// 2j + 1
  int multiplicity() const noexcept { return twice_j_ + 1; }
  std::string str() const;

  friend bool operator==(const Spin&, const Spin&) = default;

 private:
  int twice_j_;
};

/// Parses a comma-separated list such as "1/2,1,1/2".
std::vector<Spin> parse_spin_list(std::string_view text);

struct SpinOperators {
  ComplexMatrix x;
  ComplexMatrix y;
  ComplexMatrix z;
};

/// S_x, S_y, S_z (hbar = 1) in the |j,m> basis ordered m = j, j-1, ..., -j,
/// built from the ladder operators with Condon-Shortley phases.
SpinOperators spin_operators(Spin j);

ComplexMatrix spin_y(Spin j);

/// op acting on factor `site` of the tensor product with the given local
/// dimensions, identity elsewhere.
ComplexMatrix embed(const ComplexMatrix& op, std::size_t site, std::span<const int> dims);

/// Antiunitary X K with X = exp(-i pi sum_k S_y^(k)).
Symmetry time_reversal_symmetry(std::span<const Spin> spins);

}  // namespace cartankit
