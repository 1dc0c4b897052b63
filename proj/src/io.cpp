#include "cartankit/io.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "cartankit/errors.hpp"

namespace cartankit::io {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* name, const std::string& where) {
  if (!j.is_object() || !j.contains(name)) {
    throw InvalidArgument(where + ": missing field '" + name + "'");
  }
  return j.at(name);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InvalidArgument(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InvalidArgument(where + ": non-finite value");
  return v;
}

CartanFamily parse_family(const json& j, const std::string& where) {
  if (!j.is_string()) throw InvalidArgument(where + ": expected \"AI\" or \"AII\"");
  const std::string s = j.get<std::string>();
  if (s == "AI") return CartanFamily::AI;
  if (s == "AII") return CartanFamily::AII;
  throw InvalidArgument(where + ": unknown type '" + s + "' (expected \"AI\" or \"AII\")");
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("matrix file: top level must be an object");
  const json& schema = field(j, "schema", "matrix file");
  if (!schema.is_number_integer() || schema.get<int>() != kSchemaVersion) {
    throw InvalidArgument("matrix file: field 'schema' must be 1");
  }
  const json& jn = field(j, "n", "matrix file");
  if (!jn.is_number_integer() || jn.get<long long>() < 1) {
    throw InvalidArgument("matrix file: field 'n' must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(jn.get<long long>());
  const json& data = field(j, "data", "matrix file");
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != n) {
    throw InvalidArgument("matrix file: field 'data' must have n rows");
  }
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = data[static_cast<std::size_t>(r)];
    const std::string row_where = "data[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw InvalidArgument("matrix file: " + row_where + " must have n entries");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const json& entry = row[static_cast<std::size_t>(c)];
      const std::string where = "matrix file: " + row_where + "[" + std::to_string(c) + "]";
      if (!entry.is_array() || entry.size() != 2) {
        throw InvalidArgument(where + ": expected [re, im]");
      }
      m(r, c) = Complex(number(entry[0], where), number(entry[1], where));
    }
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  if (!is_square(m)) throw InvalidArgument("matrix_to_json: matrix must be square");
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex z = m(r, c);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InvalidArgument("matrix_to_json: non-finite entry");
      }
      row.push_back(json::array({z.real(), z.imag()}));
    }
    data.push_back(std::move(row));
  }
  return json{{"schema", kSchemaVersion}, {"n", m.rows()}, {"data", std::move(data)}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
  return matrix_from_json(read_json_file(path));
}

void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m) {
  write_json_file(path, matrix_to_json(m));
}

DecompositionConfig config_from_json(const json& j, const std::filesystem::path& base_dir,
                                     const Tolerance& defaults) {
  if (!j.is_object()) throw InvalidArgument("config: top level must be an object");
  DecompositionConfig cfg;
  cfg.tol = defaults;

  const json& subs = field(j, "subsystems", "config");
  if (!subs.is_array() || subs.empty()) {
    throw InvalidArgument("config: field 'subsystems' must be a non-empty array");
  }
  for (std::size_t k = 0; k < subs.size(); ++k) {
    const std::string where = "config: subsystems[" + std::to_string(k) + "]";
    const json& s = subs[k];
    const json& dim = field(s, "dim", where);
    if (!dim.is_number_integer() || dim.get<long long>() < 1) {
      throw InvalidArgument(where + ".dim must be a positive integer");
    }
    SubsystemChoice choice;
    choice.dim = dim.get<int>();
    choice.type = parse_family(field(s, "type", where), where + ".type");
    if (choice.type == CartanFamily::AII && choice.dim % 2 != 0) {
      throw InvalidArgument(where + ".type: AII requires even dimension");
    }
    if (s.contains("T") && !s.at("T").is_null()) {
      if (!s.at("T").is_string()) throw InvalidArgument(where + ".T must be a file path");
      const std::filesystem::path t_path = base_dir / s.at("T").get<std::string>();
      ComplexMatrix t = read_matrix_file(t_path);
      if (t.rows() != choice.dim) throw InvalidArgument(where + ".T has the wrong dimension");
      choice.t = std::move(t);
    }
    cfg.subsystems.push_back(std::move(choice));
  }

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw InvalidArgument("config: field 'tolerances' must be an object");
    if (t.contains("atol")) cfg.tol.atol = number(t.at("atol"), "config: tolerances.atol");
    if (t.contains("rank_tol")) cfg.tol.rank_tol = number(t.at("rank_tol"), "config: tolerances.rank_tol");
    if (t.contains("closure_tol")) {
      cfg.closure_tol = number(t.at("closure_tol"), "config: tolerances.closure_tol");
      if (!(cfg.closure_tol > 0.0)) throw InvalidArgument("config: tolerances.closure_tol must be positive");
    }
    try {
      cfg.tol.validate();
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(std::string("config: tolerances: ") + e.what());
    }
  }
  if (j.contains("seed")) {
    const json& seed = j.at("seed");
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0))
      throw InvalidArgument("config: field 'seed' must be a non-negative integer");
    cfg.seed = seed.get<std::uint64_t>();
  }
  validate_choices(cfg.subsystems, cfg.tol);
  return cfg;
}

DecompositionConfig read_config_file(const std::filesystem::path& path,
                                     const Tolerance& defaults) {
  return config_from_json(read_json_file(path), path.parent_path(), defaults);
}

json to_json(const ClosureReport& r) {
  return json{{"kind", to_string(r.bracket_kind)},
              {"pairs_checked", r.pairs_checked},
              {"max_residual", r.max_residual},
              {"worst_pair", json::array({r.worst_pair.first, r.worst_pair.second})},
              {"tolerance", r.tolerance},
              {"passed", r.passed}};
}

json to_json(const OddEvenDecomposition& d, const OddEvenReport& r) {
  json subs = json::array();
  for (const SubsystemChoice& c : d.choices) {
    subs.push_back({{"dim", c.dim}, {"type", family_name(c.type)}, {"conjugated", c.t.has_value()}});
  }
  json relations = json::array();
  for (const NamedClosure& nc : r.relations) {
    json entry = to_json(nc.report);
    entry["relation"] = nc.relation;
    relations.push_back(std::move(entry));
  }
  json out{{"schema", kSchemaVersion},
           {"subsystems", std::move(subs)},
           {"total_dim", d.total_dim},
           {"r", d.r},
           {"predicted_type", family_name(d.predicted_type)},
           {"measured_type", r.measured_type ? json(family_name(*r.measured_type)) : json(nullptr)},
           {"dim_io", r.dim_odd},
           {"dim_ie", r.dim_even},
           {"expected_dim_io", r.expected_dim_odd},
           {"dims_ok", r.dims_sum_ok && r.dim_odd_ok},
           {"mode", r.mode == VerifyMode::Exhaustive ? "exhaustive" : "sampled"},
           {"relations", std::move(relations)},
           {"passed", r.passed}};
  if (r.seed) out["seed"] = *r.seed;
  return out;
}

}  // namespace cartankit::io
