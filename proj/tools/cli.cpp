#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <ostream>

#include <omp.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cartankit/errors.hpp"
#include "cartankit/factorize.hpp"
#include "cartankit/io.hpp"
#include "cartankit/odd_even.hpp"
#include "cartankit/spin.hpp"
#include "cartankit/symmetry.hpp"

namespace cartankit::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct ClassifyArgs {
  std::string file;
  std::string kind = "antiunitary";
};

struct OddEvenArgs {
  std::string config;
  std::string verify = "exhaustive";
  std::string out;
  std::int64_t samples = 2000;
  std::optional<std::uint64_t> seed;
};

struct FactorArgs {
  std::string file;
  std::string mode = "kp";
  std::string type = "AI";
  int p = 0;
  int q = 0;
  std::string t_file;
  std::string out;
  double max_residual = 1e-8;
};

struct TimeReversalArgs {
  std::string spins;
  std::string out;
};

void emit(std::ostream& out, const json& report) { out << report.dump(2) << '\n'; }

int classify(const ClassifyArgs& a, const Tolerance& tol, std::ostream& out) {
  const SymmetryKind kind =
      a.kind == "unitary" ? SymmetryKind::Unitary : SymmetryKind::Antiunitary;
  ComplexMatrix x = io::read_matrix_file(a.file);
  const Symmetry s(kind, std::move(x), tol);
  const CartanCheckResult check = is_cartan_symmetry(s, std::max(tol.atol, 1e-10));
  json report{{"schema", io::kSchemaVersion},
              {"kind", to_string(kind)},
              {"n", s.dim()},
              {"is_cartan", check.is_cartan},
              {"residual", check.residual},
              {"phi", nullptr},
              {"type", nullptr},
              {"dim_k", nullptr},
              {"dim_p", nullptr}};
  if (!check.is_cartan) {
    emit(out, report);
    return kNotCartan;
  }
  const InducedInvolution inv = involution_from_symmetry(s, tol);
  report["phi"] = inv.phi;
  report["type"] = family_name(inv.type.family);
  if (inv.type.family == CartanFamily::AIII) {
    report["p"] = inv.type.p;
    report["q"] = inv.type.q;
  }
  report["dim_k"] = inv.split.k.dimension();
  report["dim_p"] = inv.split.p.dimension();
  emit(out, report);
  return kSuccess;
}

int oddeven(const OddEvenArgs& a, const Tolerance& tol, std::ostream& out) {
  const io::DecompositionConfig cfg = io::read_config_file(a.config, tol);
  const OddEvenDecomposition d = build_odd_even(cfg.subsystems, cfg.tol);
  VerifyOptions opts;
  opts.mode = a.verify == "sampled" ? VerifyMode::Sampled : VerifyMode::Exhaustive;
  opts.samples = a.samples;
  opts.closure_tol = cfg.closure_tol;
  if (cfg.seed) opts.seed = *cfg.seed;
  if (a.seed) opts.seed = *a.seed;
  const OddEvenReport r = verify_odd_even(d, opts);
  const json report = io::to_json(d, r);
  if (!a.out.empty()) io::write_json_file(a.out, report);
  emit(out, report);
  return r.passed ? kSuccess : kVerificationFailure;
}

CartanType parse_type(const FactorArgs& a, int n) {
  if (a.type == "AI") return CartanType::ai();
  if (a.type == "AII") return CartanType::aii();
  if (a.type == "AIII") {
    if (a.p <= 0 || a.q <= 0 || a.p + a.q != n) {
      throw InvalidArgument("--p/--q: AIII requires p, q > 0 and p + q = n");
    }
    return CartanType::aiii(a.p, a.q);
  }
  throw InvalidArgument("--type: expected AI, AII or AIII");
}

int factor(const FactorArgs& a, const Tolerance& tol, std::ostream& out) {
  const ComplexMatrix u = io::read_matrix_file(a.file);
  const int n = static_cast<int>(u.rows());
  if (!is_unitary(u, 10.0 * tol.atol)) throw InvalidArgument("unitary file: matrix is not unitary");
  std::optional<ComplexMatrix> t;
  if (!a.t_file.empty()) t = io::read_matrix_file(a.t_file);
  const CartanType type = parse_type(a, n);
  const CartanInvolution inv(type, n, t, tol);

  FactorOptions opts;
  opts.log.tol = tol;
  const fs::path dir = a.out.empty() ? fs::path(".") : fs::path(a.out);
  fs::create_directories(dir);

  json report{{"schema", io::kSchemaVersion},
              {"mode", a.mode},
              {"type", to_string(type)},
              {"n", n},
              {"max_residual", a.max_residual}};
  double residual = 0.0;
  if (a.mode == "kp") {
    const KPResult kp = kp_decompose(u, inv, opts);
    io::write_matrix_file(dir / "K.json", kp.k);
    io::write_matrix_file(dir / "P.json", kp.p);
    residual = kp.residual;
    report["membership_residuals"] = {{"k", kp.membership_residual_k}, {"p", kp.membership_residual_p}};
    report["files"] = {"K.json", "P.json"};
  } else if (a.mode == "kak") {
    if (type.family != CartanFamily::AI || t) {
      throw InvalidArgument("--mode kak: only the canonical AI involution is supported");
    }
    const KAKResult kak = kak_decompose_ai(u, opts);
    io::write_matrix_file(dir / "K1.json", kak.k1);
    io::write_matrix_file(dir / "A.json", kak.a);
    io::write_matrix_file(dir / "K2.json", kak.k2);
    residual = kak.residual;
    report["realness_residuals"] = {{"k1", max_abs(kak.k1.imag().cast<Complex>())},
                                    {"k2", max_abs(kak.k2.imag().cast<Complex>())}};
    report["files"] = {"K1.json", "A.json", "K2.json"};
  } else if (a.mode == "propagator") {
    const PropagatorSplit split = split_propagator(u, inv, opts);
    const Symmetry s = symmetry_from_involution(inv);
    io::write_matrix_file(dir / "U_a.json", split.u_a);
    io::write_matrix_file(dir / "U_s.json", split.u_s);
    io::write_matrix_file(dir / "H_a.json", split.h_a);
    io::write_matrix_file(dir / "H_s.json", split.h_s);
    residual = hs_norm(split.u_a * split.u_s - u);
    report["membership_residuals"] = {{"k", split.kp.membership_residual_k},
                                      {"p", split.kp.membership_residual_p}};
    report["symmetry_residuals"] = {
        {"h_a", hs_norm(induced_observable_map(s, split.h_a) + split.h_a)},
        {"h_s", hs_norm(induced_observable_map(s, split.h_s) - split.h_s)}};
    report["files"] = {"U_a.json", "U_s.json", "H_a.json", "H_s.json"};
  } else {
    throw InvalidArgument("--mode: expected kp, kak or propagator");
  }
  report["residual"] = residual;
  report["passed"] = residual <= a.max_residual;
  io::write_json_file(dir / "report.json", report);
  emit(out, report);
  return residual <= a.max_residual ? kSuccess : kVerificationFailure;
}

int timereversal(const TimeReversalArgs& a, const Tolerance& tol, std::ostream& out) {
  const std::vector<Spin> spins = parse_spin_list(a.spins);
  const Symmetry s = time_reversal_symmetry(spins);
  const CartanCheckResult check = is_cartan_symmetry(s, std::max(tol.atol, 1e-10));

  int twice_sum = 0;
  std::vector<int> dims;
  json names = json::array();
  for (const Spin& sp : spins) {
    twice_sum += sp.twice();
    dims.push_back(sp.multiplicity());
    names.push_back(sp.str());
  }
  const double expected_phi = twice_sum % 2 == 0 ? 0.0 : std::numbers::pi;

  json per_spin = json::array();
  double worst = 0.0;
  for (std::size_t k = 0; k < spins.size(); ++k) {
    const SpinOperators ops = spin_operators(spins[k]);
    json entry{{"site", k}, {"spin", spins[k].str()}};
    const std::pair<const char*, const ComplexMatrix*> comps[] = {{"x", &ops.x}, {"y", &ops.y}, {"z", &ops.z}};
    for (const auto& [name, op] : comps) {
      const ComplexMatrix e = embed(*op, k, dims);
      const double r = hs_norm(induced_observable_map(s, e) + e);
      entry[name] = r;
      worst = std::max(worst, r);
    }
    per_spin.push_back(std::move(entry));
  }
  const double real_residual = max_abs(s.x().imag().cast<Complex>());
  const bool phi_ok = check.is_cartan && std::abs(std::polar(1.0, *check.phi) -
                                                  std::polar(1.0, expected_phi)) <= 1e-9;
  const bool passed = phi_ok && worst <= std::max(tol.atol, 1e-10) &&
                      real_residual <= std::max(tol.atol, 1e-10);

  if (!a.out.empty()) io::write_matrix_file(a.out, s.x());
  json report{{"schema", io::kSchemaVersion},
              {"spins", std::move(names)},
              {"n", s.dim()},
              {"is_cartan", check.is_cartan},
              {"cartan_residual", check.residual},
              {"phi", check.phi ? json(*check.phi) : json(nullptr)},
              {"expected_phi", expected_phi},
              {"real_residual", real_residual},
              {"spin_residuals", std::move(per_spin)},
              {"passed", passed}};
  emit(out, report);
  return passed ? kSuccess : kVerificationFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cartankit: Cartan decompositions of u(n)", "cartankit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads for verification (0 = runtime default)");

  ClassifyArgs ca;
  auto* cmd_classify = app.add_subcommand("classify", "Check and classify a symmetry X K or X");
  cmd_classify->add_option("symmetry-file", ca.file, "Matrix file holding X")->required();
  cmd_classify->add_option("--kind", ca.kind, "unitary or antiunitary")
      ->check(CLI::IsMember({"unitary", "antiunitary"}));

  OddEvenArgs oa;
  auto* cmd_oddeven = app.add_subcommand("oddeven", "Build and verify an odd-even decomposition");
  cmd_oddeven->add_option("config-file", oa.config, "Decomposition config (JSON)")->required();
  cmd_oddeven->add_option("--verify", oa.verify, "exhaustive or sampled")
      ->check(CLI::IsMember({"exhaustive", "sampled"}));
  cmd_oddeven->add_option("--out", oa.out, "Write the report here as well");
  cmd_oddeven->add_option("--samples", oa.samples, "Pairs per relation in sampled mode")
      ->check(CLI::PositiveNumber);
  cmd_oddeven->add_option("--seed", oa.seed, "Seed for sampled mode (overrides config)");

  FactorArgs fa;
  auto* cmd_factor = app.add_subcommand("factor", "K P, K A K, or propagator factorization");
  cmd_factor->add_option("unitary-file", fa.file, "Matrix file holding U")->required();
  cmd_factor->add_option("--mode", fa.mode, "kp, kak or propagator")
      ->check(CLI::IsMember({"kp", "kak", "propagator"}));
  cmd_factor->add_option("--type", fa.type, "AI, AII or AIII")
      ->check(CLI::IsMember({"AI", "AII", "AIII"}));
  cmd_factor->add_option("--p", fa.p, "AIII block size p");
  cmd_factor->add_option("--q", fa.q, "AIII block size q");
  cmd_factor->add_option("--T", fa.t_file, "Matrix file with the conjugating unitary T");
  cmd_factor->add_option("--out", fa.out, "Output directory for factor files and report.json");
  cmd_factor->add_option("--max-residual", fa.max_residual, "Reconstruction threshold");

  TimeReversalArgs ta;
  auto* cmd_tr = app.add_subcommand("timereversal", "Time-reversal symmetry of a spin network");
  cmd_tr->add_option("--spins", ta.spins, "Comma-separated spins, e.g. 1/2,1,1/2")->required();
  cmd_tr->add_option("--out", ta.out, "Write X here as a matrix file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    const Tolerance tol = default_tolerance();
    if (cmd_classify->parsed()) return classify(ca, tol, out);
    if (cmd_oddeven->parsed()) return oddeven(oa, tol, out);
    if (cmd_factor->parsed()) return factor(fa, tol, out);
    if (cmd_tr->parsed()) return timereversal(ta, tol, out);
  } catch (const BranchCut& e) {
    err << "error: " << e.what() << '\n';
    return kBranchCut;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DimensionMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NotCartan& e) {
    err << "error: " << e.what() << '\n';
    return kNotCartan;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace cartankit::cli
