#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "cartankit/factorize.hpp"
#include "cartankit/matrix.hpp"
#include "cartankit/odd_even.hpp"
#include "cartankit/subspace.hpp"

namespace cartankit::io {

inline constexpr int kSchemaVersion = 1;

/// {"schema":1, "n":int, "data":[[[re,im],...],...]}, row-major.
/// Errors are InvalidArgument messages naming the offending field.
ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const ComplexMatrix& m);

ComplexMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m);

struct DecompositionConfig {
  std::vector<SubsystemChoice> subsystems;
  Tolerance tol;
  double closure_tol = kDefaultClosureTol;
  std::optional<std::uint64_t> seed;
};

/// T paths are resolved relative to `base_dir`.
DecompositionConfig config_from_json(const nlohmann::json& j,
                                     const std::filesystem::path& base_dir,
                                     const Tolerance& defaults = {});
DecompositionConfig read_config_file(const std::filesystem::path& path,
                                     const Tolerance& defaults = {});

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json to_json(const ClosureReport& r);
nlohmann::json to_json(const OddEvenDecomposition& d, const OddEvenReport& r);

}  // namespace cartankit::io
