// Command-line surface: m-function evaluation, the bound suite, and the
// sparse-potential experiments, bound to CSV/SVG files.
//
// Exit codes: 0 success; 1 bad input or config; 2 solver non-convergence;
// 3 bound violation; 4 invalid window sequence.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "weylvd/bounds.hpp"
#include "weylvd/experiments.hpp"
#include "weylvd/potential.hpp"
#include "weylvd/version.hpp"
#include "weylvd/weyl.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitBoundViolation = 3;
constexpr int kExitBadWindows = 4;

std::string iso_utc_now() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string fnv1a_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::complex<double> parse_z(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("--z expects re,im");
  }
  return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output: " + path);
  return file;
}

int cmd_mfunction(const std::string& potential_path, double start, const std::string& z_text,
                  double tail, double tol, const std::string& out_path) {
  weylvd::MFunctionRequest req;
  try {
    req.z = parse_z(z_text);
    req.start = start;
    req.tail_x = tail;
    req.tolerance = tol;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  weylvd::MFunctionResult res;
  try {
    const weylvd::PotentialSpec pot = weylvd::read_potential_csv(potential_path);
    res = weylvd::m_function(pot, req);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  try {
    std::ofstream file;
    std::ostream& out = open_out(out_path, file);
    char row[256];
    std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g,%.17g,%.17g", req.z.real(),
                  req.z.imag(), res.m.re, res.m.im, res.gamma_diag);
    out << "re_z,im_z,re_m,im_m,gamma_diag\n" << row << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  if (!res.converged) {
    std::cerr << "non-convergence: separation between tail " << res.tail_x_used << " and "
              << 2.0 * res.tail_x_used << " is " << res.gamma_diag << " > " << tol
              << "; extend --tail\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

int cmd_bounds(const std::string& check, int draws, std::uint64_t seed,
               const std::string& out_path, double tol_rel, double tol_abs) {
  weylvd::SuiteOptions opt;
  opt.check = check;
  opt.draws = draws;
  opt.seed = seed;
  opt.tol = {tol_rel, tol_abs};

  std::vector<weylvd::BoundCheckResult> rows;
  try {
    rows = weylvd::run_bound_suite(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  try {
    std::ofstream file;
    std::ostream& out = open_out(out_path, file);
    weylvd::write_bound_csv(rows, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  for (const auto& r : rows) {
    if (!r.pass) {
      std::cerr << "bound violation: " << r.check << " seed=" << r.seed
                << " lhs=" << r.lhs << " rhs=" << r.rhs << " [" << r.inputs_digest
                << "]\n";
      return kExitBoundViolation;
    }
  }
  return kExitOk;
}

int cmd_sparse_experiment(const std::string& config_path, const std::string& outdir,
                          bool plot) {
  const std::string started = iso_utc_now();
  const weylvd::ExperimentConfig cfg = weylvd::parse_experiment_config(config_path);

  std::filesystem::create_directories(outdir);
  const auto out_file = [&](const char* name) {
    return (std::filesystem::path(outdir) / name).string();
  };

  const auto rows = weylvd::run_theorem2(cfg);
  {
    std::ofstream out(out_file("theorem2.csv"));
    weylvd::write_theorem2_csv(rows, out);
  }
  const auto cor = weylvd::run_corollary2(cfg);
  {
    std::ofstream out(out_file("corollary2.csv"));
    weylvd::write_corollary2_csv(cor, out);
  }
  if (plot) {
    std::ofstream out(out_file("discrepancy.svg"));
    weylvd::write_discrepancy_svg(rows, out);
  }

  json manifest;
  manifest["command"] = "sparse-experiment";
  manifest["config"] = config_path;
  manifest["config_digest"] = fnv1a_digest(config_path);
  manifest["seed"] = cfg.seed;
  manifest["tool_version"] = weylvd::kVersion;
  manifest["started_utc"] = started;
  manifest["finished_utc"] = iso_utc_now();
  manifest["rows"] = rows.size();
  bool all_ok = true;
  for (const auto& r : rows) all_ok = all_ok && r.ok;
  manifest["all_rows_ok"] = all_ok;
  bool halves_ok = true;
  for (const auto& r : cor.rows) halves_ok = halves_ok && r.halves_admissible;
  manifest["corollary_halves_admissible"] = halves_ok;
  {
    std::ofstream out(out_file("manifest.json"));
    out << manifest.dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Value-distribution experiments for half-line Schrodinger operators"};
  app.set_version_flag("--version", weylvd::kVersion);
  app.require_subcommand(1);

  auto* mf = app.add_subcommand("mfunction", "Evaluate the Weyl m-function at one z");
  std::string mf_potential, mf_z, mf_out = "-";
  double mf_start = 0.0, mf_tail = 0.0, mf_tol = 1e-6;
  mf->add_option("--potential", mf_potential, "potential CSV (header x,v)")->required();
  mf->add_option("--z", mf_z, "spectral parameter re,im with im > 0")->required();
  mf->add_option("--start", mf_start, "left endpoint of the half-line problem");
  mf->add_option("--tail", mf_tail, "tail truncation point (0 = automatic)");
  mf->add_option("--tol", mf_tol, "acceptable truncation separation");
  mf->add_option("--out", mf_out, "output CSV path ('-' for stdout)");

  auto* bo = app.add_subcommand("bounds", "Run the inequality verifiers");
  std::string bo_check = "all", bo_out = "-";
  int bo_draws = 100;
  std::uint64_t bo_seed = 42;
  double bo_tol_rel = 1e-9, bo_tol_abs = 1e-12;
  bo->add_option("--check", bo_check, "lemma1|lemma2|lemma3|lemma4|theorem1|all")
      ->check(CLI::IsMember({"lemma1", "lemma2", "lemma3", "lemma4", "theorem1", "all"}));
  bo->add_option("--draws", bo_draws, "randomized draws per section")
      ->check(CLI::PositiveNumber);
  bo->add_option("--seed", bo_seed, "master seed");
  bo->add_option("--out", bo_out, "output CSV path ('-' for stdout)");
  bo->add_option("--tol-rel", bo_tol_rel, "relative pass tolerance");
  bo->add_option("--tol-abs", bo_tol_abs, "absolute pass tolerance");

  auto* sp = app.add_subcommand(
      "sparse-experiment", "Asymptotic value-distribution sweep for a sparse potential");
  std::string sp_config, sp_outdir = ".";
  bool sp_plot = false;
  sp->add_option("--config", sp_config, "experiment config file")->required();
  sp->add_option("--outdir", sp_outdir, "output directory");
  sp->add_flag("--plot", sp_plot, "emit discrepancy.svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (mf->parsed()) {
      return cmd_mfunction(mf_potential, mf_start, mf_z, mf_tail, mf_tol, mf_out);
    }
    if (bo->parsed()) {
      return cmd_bounds(bo_check, bo_draws, bo_seed, bo_out, bo_tol_rel, bo_tol_abs);
    }
    if (sp->parsed()) {
      return cmd_sparse_experiment(sp_config, sp_outdir, sp_plot);
    }
  } catch (const weylvd::InvalidWindowSequence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadWindows;
  } catch (const weylvd::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitOk;
}
