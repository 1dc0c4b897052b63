#include "cartankit/spin.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "cartankit/errors.hpp"

namespace cartankit {

namespace {

int parse_int(std::string_view text, std::string_view whole) {
  int value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw InvalidArgument("malformed spin '" + std::string(whole) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Spin::Spin(int twice_j) : twice_j_(twice_j) {
  if (twice_j < 0) throw InvalidArgument("spin must be non-negative");
}

Spin Spin::parse(std::string_view text) {
  const std::string_view t = trim(text);
  const auto slash = t.find('/');
  if (slash == std::string_view::npos) return Spin(2 * parse_int(t, text));
  const int num = parse_int(t.substr(0, slash), text);
  const int den = parse_int(t.substr(slash + 1), text);
  if (den != 2) throw InvalidArgument("malformed spin '" + std::string(text) + "': denominator must be 2");
  if (num < 0 || num % 2 == 0) {
    throw InvalidArgument("malformed spin '" + std::string(text) + "': numerator must be odd");
  }
  return Spin(num);
}

std::string Spin::str() const {
  return twice_j_ % 2 == 0 ? std::to_string(twice_j_ / 2) : std::to_string(twice_j_) + "/2";
}

std::vector<Spin> parse_spin_list(std::string_view text) {
  std::vector<Spin> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(Spin::parse(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

SpinOperators spin_operators(Spin j) {
  const int dim = j.multiplicity();
  const double jj = j.value();
  // Basis index k carries m = j - k. S+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>.
  ComplexMatrix raise = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix sz = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = jj - k;
    sz(k, k) = m;
    if (k > 0) raise(k - 1, k) = std::sqrt(jj * (jj + 1.0) - m * (m + 1.0));
  }
  const ComplexMatrix lower = raise.adjoint();
  const Complex i(0.0, 1.0);
  return {0.5 * (raise + lower), (raise - lower) / (2.0 * i), sz};
}

ComplexMatrix spin_y(Spin j) { return spin_operators(j).y; }

ComplexMatrix embed(const ComplexMatrix& op, std::size_t site, std::span<const int> dims) {
  if (site >= dims.size()) throw InvalidArgument("embed: site out of range");
  if (op.rows() != dims[site] || op.cols() != dims[site]) {
    throw DimensionMismatch("embed: operator does not match the local dimension");
  }
  std::vector<ComplexMatrix> factors;
  factors.reserve(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) {
    factors.push_back(k == site ? op : identity(dims[k]));
  }
  return kron(factors);
}

Symmetry time_reversal_symmetry(std::span<const Spin> spins) {
  if (spins.empty()) throw InvalidArgument("time_reversal_symmetry: empty spin list");
  std::vector<int> dims;
  dims.reserve(spins.size());
  for (const Spin& s : spins) dims.push_back(s.multiplicity());
  int total = 1;
  for (int d : dims) total *= d;

  ComplexMatrix generator = ComplexMatrix::Zero(total, total);
  for (std::size_t k = 0; k < spins.size(); ++k) {
    generator += embed(spin_y(spins[k]), k, dims);
  }
  const Complex i(0.0, 1.0);
  return Symmetry(SymmetryKind::Antiunitary, exp_skew(-i * std::numbers::pi * generator));
}

}  // namespace cartankit
