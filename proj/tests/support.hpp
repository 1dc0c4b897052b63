#pragma once

// Seeded generators and oracles shared by the test binaries. Nothing here
// calls into the spectral routines under test.

#include <cmath>
#include <random>
#include <vector>

#include "cartankit/matrix.hpp"
#include "cartankit/odd_even.hpp"

namespace cartankit::testing {

using Rng = std::mt19937_64;

inline ComplexMatrix random_complex(Rng& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = scale * Complex(g(rng), g(rng));
  return m;
}

inline ComplexMatrix random_hermitian(Rng& rng, int n) {
  const ComplexMatrix m = random_complex(rng, n);
  return 0.5 * (m + m.adjoint());
}

/// Skew-Hermitian with Frobenius norm exactly `norm` (so spectral radius <= norm).
inline ComplexMatrix random_skew(Rng& rng, int n, double norm) {
  const ComplexMatrix m = random_complex(rng, n);
  const ComplexMatrix s = 0.5 * (m - m.adjoint());
  return s * (norm / s.norm());
}

/// Scaling-and-squaring Taylor exponential; the oracle for exp_skew.
inline ComplexMatrix exp_taylor(const ComplexMatrix& a) {
  const double norm = a.norm();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const ComplexMatrix scaled = a / std::pow(2.0, squarings);
  ComplexMatrix term = ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Unitary exp(S) for a random skew-Hermitian S with ||S||_F = norm.
inline ComplexMatrix random_unitary_near_identity(Rng& rng, int n, double norm) {
  return exp_taylor(random_skew(rng, n, norm));
}

/// Haar-like unitary from the QR factor of a Gaussian matrix.
inline ComplexMatrix random_unitary(Rng& rng, int n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_complex(rng, n));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

/// Sum of |m_ij|^2 computed entry by entry.
inline double squared_entry_sum(const ComplexMatrix& m) {
  double total = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) total += std::norm(m(r, c));
  return total;
}

inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Every ordered choice list over the given local dimensions and the types
/// AI and AII (even dimensions only) whose total dimension is at most max_n.
inline std::vector<std::vector<SubsystemChoice>> choice_lists(const std::vector<int>& dims,
                                                              int max_n) {
  std::vector<std::vector<SubsystemChoice>> out;
  std::vector<SubsystemChoice> current;
  auto extend = [&](auto&& self, int n) -> void {
    for (int d : dims) {
      if (d < 2 || n * d > max_n) continue;
      for (CartanFamily f : {CartanFamily::AI, CartanFamily::AII}) {
        if (f == CartanFamily::AII && d % 2 != 0) continue;
        current.push_back({d, f, std::nullopt});
        out.push_back(current);
        self(self, n * d);
        current.pop_back();
      }
    }
  };
  extend(extend, 1);
  return out;
}

}  // namespace cartankit::testing
