#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cartankit/errors.hpp"
#include "cartankit/spin.hpp"
#include "support.hpp"

namespace cartankit {
namespace {

using testing::max_diff;

const Complex kI(0.0, 1.0);

TEST(Spin, ParseAndFormat) {
  EXPECT_EQ(Spin::parse("1/2").twice(), 1);
  EXPECT_EQ(Spin::parse("1").twice(), 2);
  EXPECT_EQ(Spin::parse(" 3/2 ").twice(), 3);
  EXPECT_EQ(Spin::parse("0").multiplicity(), 1);
  EXPECT_EQ(Spin(5).str(), "5/2");
  EXPECT_EQ(Spin(4).str(), "2");
  const std::vector<Spin> list = parse_spin_list("1/2,1,3/2");
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[2], Spin(3));
}

TEST(Spin, RejectsMalformed) {
  for (const char* bad : {"", "x", "2/2", "1/3", "-1", "1/2/2", "1.5", "-1/2"}) {
    EXPECT_THROW(Spin::parse(bad), InvalidArgument) << bad;
  }
  EXPECT_THROW(Spin(-1), InvalidArgument);
  EXPECT_THROW(parse_spin_list("1/2,,1"), InvalidArgument);
}

TEST(SpinY, HalfIsHalfPauliY) {
  EXPECT_LE(max_diff(spin_y(Spin(1)), 0.5 * pauli_y()), 1e-15);
}

TEST(SpinY, SpinOneMatrix) {
  const double h = 1.0 / std::sqrt(2.0);
  ComplexMatrix expected = ComplexMatrix::Zero(3, 3);
  expected(0, 1) = -kI * h;
  expected(1, 2) = -kI * h;
  expected(1, 0) = kI * h;
  expected(2, 1) = kI * h;
  EXPECT_LE(max_diff(spin_y(Spin(2)), expected), 1e-15);
}

TEST(SpinY, SpectrumIsMLadder) {
  for (int twice = 0; twice <= 5; ++twice) {
    const ComplexMatrix sy = spin_y(Spin(twice));
    ASSERT_TRUE(is_hermitian(sy, 1e-15));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sy);
    std::vector<double> got(es.eigenvalues().data(), es.eigenvalues().data() + twice + 1);
    std::sort(got.begin(), got.end());
    for (int k = 0; k <= twice; ++k) EXPECT_NEAR(got[k], -0.5 * twice + k, 1e-12);
  }
}

TEST(SpinOperators, SatisfyAngularMomentumAlgebra) {
  for (int twice = 1; twice <= 5; ++twice) {
    const SpinOperators s = spin_operators(Spin(twice));
    EXPECT_LE(max_diff(commutator(s.x, s.y), kI * s.z), 1e-12);
    EXPECT_LE(max_diff(commutator(s.y, s.z), kI * s.x), 1e-12);
    EXPECT_LE(max_diff(commutator(s.z, s.x), kI * s.y), 1e-12);
    const double j = 0.5 * twice;
    const ComplexMatrix casimir = s.x * s.x + s.y * s.y + s.z * s.z;
    EXPECT_LE(max_diff(casimir, j * (j + 1) * identity(twice + 1)), 1e-12);
  }
}

TEST(Embed, PlacesOperatorOnSite) {
  const std::vector<int> dims{2, 3};
  EXPECT_LE(max_diff(embed(pauli_x(), 0, dims), kron(pauli_x(), identity(3))), 1e-15);
  EXPECT_LE(max_diff(embed(spin_y(Spin(2)), 1, dims), kron(identity(2), spin_y(Spin(2)))),
            1e-15);
  EXPECT_THROW(embed(pauli_x(), 1, dims), DimensionMismatch);
  EXPECT_THROW(embed(pauli_x(), 2, dims), InvalidArgument);
}

TEST(TimeReversal, SingleHalfSpin) {
  const std::vector<Spin> spins{Spin(1)};
  const Symmetry s = time_reversal_symmetry(spins);
  EXPECT_TRUE(s.antiunitary());
  ComplexMatrix expected(2, 2);
  expected << 0, -1, 1, 0;
  EXPECT_LE(max_diff(s.x(), expected), 1e-14);
}

TEST(TimeReversal, TwoHalfSpinsAreAI) {
  const std::vector<Spin> spins{Spin(1), Spin(1)};
  const Symmetry s = time_reversal_symmetry(spins);
  EXPECT_TRUE(is_real(s.x(), 1e-12));
  const CartanCheckResult r = is_cartan_symmetry(s);
  ASSERT_TRUE(r.is_cartan);
  EXPECT_NEAR(*r.phi, 0.0, 1e-12);
  EXPECT_EQ(involution_from_symmetry(s).type, CartanType::ai());
}

TEST(TimeReversal, SpinOneSendsMToMinusMUpToPhase) {
  const std::vector<Spin> spins{Spin(2)};
  const Symmetry s = time_reversal_symmetry(spins);
  for (int k = 0; k < 3; ++k) {
    const Eigen::VectorXcd image = s.act(Eigen::VectorXcd::Unit(3, k));
    EXPECT_NEAR(std::abs(image(2 - k)), 1.0, 1e-12) << "m = " << 1 - k;
  }
}

// Every spin list with up to three factors drawn from {1/2, 1, 3/2}.
std::vector<std::vector<Spin>> spin_lists() {
  std::vector<std::vector<Spin>> out;
  const int choices[] = {1, 2, 3};
  for (int a : choices) {
    out.push_back({Spin(a)});
    for (int b : choices) {
      out.push_back({Spin(a), Spin(b)});
      for (int c : choices) out.push_back({Spin(a), Spin(b), Spin(c)});
    }
  }
  return out;
}

TEST(TimeReversal, RealWithParityPhaseAndNegatesSpins) {
  for (const std::vector<Spin>& spins : spin_lists()) {
    const Symmetry s = time_reversal_symmetry(spins);
    int twice_total = 0;
    std::vector<int> dims;
    for (const Spin& j : spins) {
      twice_total += j.twice();
      dims.push_back(j.multiplicity());
    }
    const int n = s.dim();
    EXPECT_TRUE(is_real(s.x(), 1e-10));
    const double sign = twice_total % 2 == 0 ? 1.0 : -1.0;
    EXPECT_LE(max_diff(s.x() * s.x().conjugate(), sign * identity(n)), 1e-10);
    const CartanCheckResult r = is_cartan_symmetry(s);
    ASSERT_TRUE(r.is_cartan);
    EXPECT_NEAR(std::abs(*r.phi), twice_total % 2 == 0 ? 0.0 : std::numbers::pi, 1e-10);
    for (std::size_t site = 0; site < spins.size(); ++site) {
      const SpinOperators ops = spin_operators(spins[site]);
      for (const ComplexMatrix* op : {&ops.x, &ops.y, &ops.z}) {
        const ComplexMatrix full = embed(*op, site, dims);
        EXPECT_LE(max_diff(induced_observable_map(s, full), -full), 1e-10);
      }
    }
  }
}

TEST(TimeReversal, EmptyListRejected) {
  EXPECT_THROW(time_reversal_symmetry(std::vector<Spin>{}), InvalidArgument);
}

}  // namespace
}  // namespace cartankit
